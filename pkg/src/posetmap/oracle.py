"""Brute-force reference semantics on finite windows, and test-element generators.

Nothing here reuses the symbolic decision procedures: monotonicity on a
window is decided by a suffix-minimum sweep over the grid, injectivity by
sorting images, cofiniteness by looking for missing points on the window's
outer shell.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import RepresentationError
from .pmap import (
    PiecewiseMap,
    Rule,
    compose,
    cylinder_shift,
    from_parts,
    identity_off,
    unit,
    window_arrays,
    window_bound,
    window_grid,
)
from .regions import leq

# random element recipe
MAX_FACTORS = 6
MAX_IDEMPOTENT_POINTS = 5
POINT_RANGE = 5
MAX_CYLINDER_BOUND = 4
MAX_SHIFT = 3


def shift_margin(alpha: PiecewiseMap) -> int:
    return max((abs(d) for _, r in alpha.pieces for d in r.shift), default=0)


@dataclass(frozen=True)
class WindowTable:
    """``alpha`` restricted to ``[1..M]^dim``: domain points and their images."""

    M: int
    dim: int
    pts: np.ndarray = field(repr=False)
    imgs: np.ndarray = field(repr=False)
    margin: int = 0

    @cached_property
    def entries(self) -> dict:
        return {tuple(map(int, p)): tuple(map(int, q)) for p, q in zip(self.pts, self.imgs)}

    def __len__(self) -> int:
        return len(self.pts)


def materialize(alpha: PiecewiseMap, M: int) -> WindowTable:
    if M < 1:
        raise ValueError("window bound must be >= 1")
    pts, imgs = window_arrays(alpha, M)
    return WindowTable(M, alpha.dim, pts, imgs, shift_margin(alpha))


def _grid_index(pts: np.ndarray, M: int) -> np.ndarray:
    dim = pts.shape[1]
    weights = M ** np.arange(dim - 1, -1, -1)
    return (pts - 1) @ weights


def _upset_minimum(table: WindowTable) -> np.ndarray:
    # componentwise min of images over the up-set of every grid point
    M, dim = table.M, table.dim
    big = np.iinfo(np.int64).max
    dense = np.full((M,) * dim + (dim,), big, dtype=np.int64)
    flat = dense.reshape(-1, dim)
    flat[_grid_index(table.pts, M)] = table.imgs
    for ax in range(dim):
        rev = np.flip(dense, axis=ax)
        np.minimum.accumulate(rev, axis=ax, out=rev)
    return dense.reshape(-1, dim)


@dataclass
class BruteReport:
    table: WindowTable
    injective_on_window: bool
    monotone_on_window: bool
    dom_cofinite_on_window: bool
    ran_cofinite_on_window: bool
    witnesses: dict

    def pointwise_match(self, beta: PiecewiseMap) -> bool:
        other = materialize(beta, self.table.M)
        return self.table.entries == other.entries


def _monotone_witness(table: WindowTable, x: tuple):
    fx = table.entries[x]
    for y, fy in table.entries.items():
        if y != x and leq(x, y) and not leq(fx, fy):
            return x, y
    raise AssertionError("suffix minimum flagged a point without a violating partner")


def brute_checks(table: WindowTable) -> BruteReport:
    """Exhaustive verdicts on the window.

    Cofiniteness needs the window to reach past every finite feature of the
    source map, including translated images: ``M >= B + 2 * margin + 3``.
    """
    M, dim = table.M, table.dim
    witnesses = {}
    # injectivity
    if len(table):
        uniq, inverse, counts = np.unique(table.imgs, axis=0, return_inverse=True,
                                          return_counts=True)
        dup = np.flatnonzero(counts > 1)
        injective = dup.size == 0
        if not injective:
            rows = np.flatnonzero(inverse.reshape(-1) == dup[0])[:2]
            witnesses["injective"] = tuple(tuple(map(int, table.pts[r])) for r in rows)
    else:
        injective = True
    # monotonicity: alpha(x) must equal the minimum over its up-set
    low = _upset_minimum(table)[_grid_index(table.pts, M)]
    bad = np.flatnonzero((table.imgs != low).any(axis=1))
    monotone = bad.size == 0
    if not monotone:
        witnesses["monotone"] = _monotone_witness(table, tuple(map(int, table.pts[bad[0]])))
    # domain: nothing missing on the outer shell
    grid = window_grid(dim, M)
    defined = np.zeros(len(grid), dtype=bool)
    defined[_grid_index(table.pts, M)] = True
    shell = (grid == M).any(axis=1)
    miss = np.flatnonzero(~defined & shell)
    dom_cof = miss.size == 0
    if not dom_cof:
        witnesses["dom_cofinite"] = (tuple(map(int, grid[miss[0]])),)
    # range: work in the interior no outside point can reach
    K = M - table.margin
    ran_cof = True
    if K >= 2:
        inner = table.imgs[(table.imgs <= K).all(axis=1)]
        hit = np.zeros(K ** dim, dtype=bool)
        hit[_grid_index(inner, K)] = True
        igrid = window_grid(dim, K)
        miss = np.flatnonzero(~hit & (igrid == K).any(axis=1))
        ran_cof = miss.size == 0
        if not ran_cof:
            witnesses["ran_cofinite"] = (tuple(map(int, igrid[miss[0]])),)
    return BruteReport(table, injective, monotone, dom_cof, ran_cof, witnesses)


def cofinite_window(alpha: PiecewiseMap) -> int:
    return window_bound(alpha) + 2 * shift_margin(alpha) + 3


# ------------------------------------------------------------- generation


def _random_perm(rng: random.Random, dim: int) -> tuple:
    p = list(range(dim))
    rng.shuffle(p)
    return tuple(p)


def random_constructor(rng: random.Random, dim: int = 3) -> PiecewiseMap:
    kind = rng.choice(("unit", "idempotent", "idempotent", "cylinder", "cylinder", "cylinder"))
    if kind == "unit":
        return unit(_random_perm(rng, dim))
    if kind == "idempotent":
        k = rng.randint(1, MAX_IDEMPOTENT_POINTS)
        pts = {tuple(rng.randint(1, POINT_RANGE) for _ in range(dim)) for _ in range(k)}
        return identity_off(dim, pts)
    axis = rng.randrange(dim)
    bounds = [rng.randint(1, MAX_CYLINDER_BOUND) for _ in range(dim)]
    return cylinder_shift(dim, axis, bounds, -rng.randint(1, MAX_SHIFT))


def generate(seed: int, budget: int = MAX_FACTORS, dim: int = 3) -> PiecewiseMap:
    """Deterministic random member of the monoid.

    Composes between 1 and ``budget`` random constructor outputs, then
    optionally multiplies by units on either side.  Uses Python's
    ``random.Random`` (MT19937), whose integer stream is fixed across
    platforms for a given seed.
    """
    rng = random.Random(seed)
    out = random_constructor(rng, dim)
    for _ in range(rng.randint(1, budget) - 1):
        out = compose(out, random_constructor(rng, dim))
    if budget > 1:
        if rng.random() < 0.3:
            out = compose(unit(_random_perm(rng, dim)), out)
        if rng.random() < 0.3:
            out = compose(out, unit(_random_perm(rng, dim)))
    return out


def corrupt(alpha: PiecewiseMap, seed: int) -> PiecewiseMap:
    """A representation-valid perturbation of ``alpha`` that is usually not a
    member any more (patched values, shifted or re-permuted pieces)."""
    rng = random.Random(seed)
    dim = alpha.dim
    B = window_bound(alpha)
    for _ in range(100):
        pieces = list(alpha.pieces)
        holes = set(alpha.holes)
        patch = dict(alpha.patch)
        kind = rng.choice(("patch", "patch", "shift", "perm", "unhole"))
        if kind == "patch":
            p = tuple(rng.randint(1, B) for _ in range(dim))
            holes.discard(p)
            patch[p] = tuple(rng.randint(1, B) for _ in range(dim))
        elif kind == "unhole" and holes:
            h = rng.choice(sorted(holes))
            holes.discard(h)
            patch[h] = tuple(rng.randint(1, B) for _ in range(dim))
        elif kind == "shift" and pieces:
            i = rng.randrange(len(pieces))
            box, r = pieces[i]
            sh = list(r.shift)
            sh[rng.randrange(dim)] += rng.choice((-1, 1))
            pieces[i] = (box, Rule(r.perm, sh))
        elif kind == "perm" and pieces:
            i = rng.randrange(len(pieces))
            box, r = pieces[i]
            a, b = rng.sample(range(dim), 2)
            perm = list(r.perm)
            perm[a], perm[b] = perm[b], perm[a]
            pieces[i] = (box, Rule(perm, r.shift))
        else:
            continue
        try:
            out = from_parts(dim, pieces, holes, patch)
        except RepresentationError:
            continue
        if out != alpha:
            return out
    raise RuntimeError("could not corrupt element")


VERDICTS = ("injective", "monotone", "dom_cofinite", "ran_cofinite")


def brute_verdicts(report: BruteReport) -> dict:
    return {k: getattr(report, k + "_on_window") for k in VERDICTS}


def _witness_reach(witnesses: dict) -> int:
    coords = [c for w in witnesses.values() for p in (w or ()) if p is not None for c in p]
    return max(coords, default=0)


def disagreements(alpha: PiecewiseMap, symbolic, M: int) -> list[str]:
    """Verdicts of ``symbolic`` (a validity report) the window oracle rejects.

    A verdict that differs at ``M`` is re-checked once on a window enlarged to
    contain the symbolic witnesses and the cofiniteness margin; only verdicts
    that still differ are reported.
    """
    want = {k: getattr(symbolic, k) for k in VERDICTS}
    got = brute_verdicts(brute_checks(materialize(alpha, M)))
    bad = [k for k in VERDICTS if want[k] != got[k]]
    if not bad:
        return []
    M2 = max(M, cofinite_window(alpha), _witness_reach(symbolic.witnesses) + 1)
    if M2 == M:
        return bad
    got = brute_verdicts(brute_checks(materialize(alpha, M2)))
    return [k for k in bad if want[k] != got[k]]
