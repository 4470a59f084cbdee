"""Pure-Python/numpy versions of the compiled kernels (same signatures)."""
import numpy as np


def monotone_violation(pts, imgs):
    pts = np.asarray(pts)
    imgs = np.asarray(imgs)
    for i in range(len(pts)):
        above = (pts[i + 1:] >= pts[i]).all(axis=1)
        if not above.any():
            continue
        bad = above & ~(imgs[i + 1:] >= imgs[i]).all(axis=1)
        hit = np.flatnonzero(bad)
        if hit.size:
            return (i, i + 1 + int(hit[0]))
    return None


def bellman_ford(nnodes, src, dst, weight):
    dist = [0] * nnodes
    edges = list(zip(src, dst, weight))
    for _ in range(nnodes + 1):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            return dist
    return None
