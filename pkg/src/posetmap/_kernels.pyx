# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_kernels_py`` for the reference versions."""


def monotone_violation(const long long[:, ::1] pts, const long long[:, ::1] imgs):
    """First pair ``(i, j)`` with ``pts[i] <= pts[j]`` but ``imgs[i] !<= imgs[j]``.

    ``pts`` must be in lexicographic order, so only ``j > i`` can be above ``i``.
    """
    cdef Py_ssize_t N = pts.shape[0], n = pts.shape[1]
    cdef Py_ssize_t i, j, k
    cdef bint below, bad
    for i in range(N):
        for j in range(i + 1, N):
            below = True
            for k in range(n):
                if pts[i, k] > pts[j, k]:
                    below = False
                    break
            if not below:
                continue
            bad = False
            for k in range(n):
                if imgs[i, k] > imgs[j, k]:
                    bad = True
                    break
            if bad:
                return (i, j)
    return None


def bellman_ford(Py_ssize_t nnodes, const long long[::1] src, const long long[::1] dst,
                 const long long[::1] weight):
    """Feasible potentials for ``x[dst] - x[src] <= weight`` or ``None``.

    A virtual source reaches every node at cost 0; a relaxation in round
    ``nnodes + 1`` proves a negative cycle.
    """
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t r, e
    cdef long long cand
    cdef bint changed = True
    cdef long long[:] dist
    import array
    buf = array.array("q", [0]) * nnodes
    dist = buf
    for r in range(nnodes + 1):
        changed = False
        for e in range(m):
            cand = dist[src[e]] + weight[e]
            if cand < dist[dst[e]]:
                dist[dst[e]] = cand
                changed = True
        if not changed:
            return list(buf)
    return None
