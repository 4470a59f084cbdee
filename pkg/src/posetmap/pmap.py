"""Finite presentations of monotone cofinite partial bijections of N^n.

A :class:`PiecewiseMap` is a finite list of disjoint boxes, each carrying a
:class:`Rule` (coordinate permutation plus integer translation), together
with finitely many *holes* (removed points) and *patch* entries (points
whose image is given explicitly).  Points covered by no piece and no patch
entry are outside the domain; there must be finitely many of them.

All finite irregularities of a map live inside the window ``[1..B]^n`` with
``B = window_bound(alpha)``.  Outside it the map is purely piecewise affine,
which is what makes the decision procedures in :func:`validate` exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .constraints import DiffSystem, solve_outside_window
from .errors import DimensionMismatch, RepresentationError
from .regions import UNBOUNDED, Box, RegionSet, check_point

# stands in for UNBOUNDED inside int64 arrays
BIG = 1 << 40


@dataclass(frozen=True)
class Rule:
    """``y[perm[i]] = x[i] + shift[perm[i]]``: coordinate ``i`` moves to ``perm[i]``."""

    perm: tuple
    shift: tuple

    def __post_init__(self):
        perm, shift = tuple(self.perm), tuple(self.shift)
        if sorted(perm) != list(range(len(perm))) or len(shift) != len(perm):
            raise ValueError(f"bad rule perm={perm} shift={shift}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "shift", tuple(int(s) for s in shift))

    @classmethod
    def identity(cls, dim: int) -> Rule:
        return cls(tuple(range(dim)), (0,) * dim)

    @cached_property
    def src(self) -> tuple:
        """``src[k]`` is the input coordinate feeding output ``k``."""
        out = [0] * len(self.perm)
        for i, t in enumerate(self.perm):
            out[t] = i
        return tuple(out)

    @property
    def dim(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.dim)) and not any(self.shift)

    def apply(self, x) -> tuple:
        return tuple(x[s] + d for s, d in zip(self.src, self.shift))

    def inverse_apply(self, y) -> tuple | None:
        x = tuple(y[t] - self.shift[t] for t in self.perm)
        return x if min(x) >= 1 else None

    def then(self, other: Rule) -> Rule:
        """Apply ``self`` first, then ``other``."""
        perm = tuple(other.perm[t] for t in self.perm)
        shift = tuple(other.shift[k] + self.shift[other.src[k]] for k in range(self.dim))
        return Rule(perm, shift)

    def inverse(self) -> Rule:
        return Rule(self.src, tuple(-self.shift[t] for t in self.perm))

    def image_box(self, box: Box) -> Box:
        lo = tuple(box.lo[s] + d for s, d in zip(self.src, self.shift))
        hi = tuple(box.hi[s] + d for s, d in zip(self.src, self.shift))
        return Box(lo, hi)

    def preimage_box(self, box: Box) -> Box | None:
        lo = tuple(box.lo[t] - self.shift[t] for t in self.perm)
        hi = tuple(box.hi[t] - self.shift[t] for t in self.perm)
        return Box.make(lo, hi)

    def positive_on(self, box: Box) -> bool:
        return all(box.lo[s] + d >= 1 for s, d in zip(self.src, self.shift))

    def key(self) -> tuple:
        return (self.perm, self.shift)


@dataclass(frozen=True)
class PiecewiseMap:
    """Immutable finite presentation; build with the constructors below.

    ``==`` is structural.  Use :func:`equals` for equality as partial maps.
    """

    dim: int
    pieces: tuple = ()
    holes: frozenset = frozenset()
    patch: tuple = ()

    @cached_property
    def patch_map(self) -> dict:
        return dict(self.patch)

    @cached_property
    def exceptional(self) -> frozenset:
        return self.holes | frozenset(self.patch_map)

    def piece_at(self, x):
        for box, rule in self.pieces:
            if x in box:
                return box, rule
        return None

    def __call__(self, x):
        return evaluate(self, x)

    def __matmul__(self, other: PiecewiseMap) -> PiecewiseMap:
        # left-to-right: (a @ b)(x) = b(a(x))
        return compose(self, other)

    def __repr__(self) -> str:
        ps = ", ".join(f"{b.lo}..{tuple('inf' if h == UNBOUNDED else h for h in b.hi)}"
                       f"->{r.perm}+{r.shift}" for b, r in self.pieces)
        return (f"PiecewiseMap(dim={self.dim}, pieces=[{ps}], holes={sorted(self.holes)}, "
                f"patch={list(self.patch)})")


# ---------------------------------------------------------------- building


def _as_box(b) -> Box:
    if isinstance(b, Box):
        return b
    lo, hi = b
    hi = tuple(UNBOUNDED if h is None else h for h in hi)
    box = Box.make(lo, hi)
    if box is None or tuple(lo) != box.lo:
        raise RepresentationError("nonempty-box", f"box {b} is empty or reaches below 1")
    return box


def _normalize(dim: int, pieces, holes, patch: dict) -> PiecewiseMap:
    by_rule: dict = {}
    for box, rule in pieces:
        by_rule.setdefault(rule, []).append(box)
    out = []
    for rule, boxes in by_rule.items():
        out.extend((b, rule) for b in RegionSet.from_boxes(dim, boxes, disjoint=True).boxes)
    out.sort(key=lambda br: (br[0], br[1].key()))
    proto = PiecewiseMap(dim, tuple(out))
    clean_patch = {}
    for p, q in patch.items():
        hit = proto.piece_at(p)
        if hit is None or hit[1].apply(p) != q:
            clean_patch[p] = q
    clean_holes = frozenset(h for h in holes if h not in clean_patch and proto.piece_at(h))
    return PiecewiseMap(dim, tuple(out), clean_holes, tuple(sorted(clean_patch.items())))


def from_parts(dim: int, pieces: Iterable = (), holes: Iterable = (), patch=()) -> PiecewiseMap:
    """Validate the representation invariants, then normalise.

    ``pieces`` holds ``(box, rule)`` pairs where ``box`` is a :class:`Box` or
    ``(lo, hi)`` with ``None``/inf for unbounded ends.  ``patch`` is a
    mapping or a sequence of ``(point, point)`` pairs.
    """
    if dim < 2:
        raise RepresentationError("dimension", "dimension must be >= 2")
    plist = []
    for b, r in pieces:
        box = _as_box(b)
        if box.dim != dim or r.dim != dim:
            raise DimensionMismatch(f"piece of dimension {box.dim} in a {dim}-dimensional map")
        if not r.positive_on(box):
            raise RepresentationError("rule-positivity",
                                      f"rule {r.perm}+{r.shift} leaves N^{dim} on box {box}")
        plist.append((box, r))
    for (b1, _), (b2, _) in itertools.combinations(plist, 2):
        if b1.intersect(b2) is not None:
            raise RepresentationError("disjoint-pieces", f"boxes {b1} and {b2} overlap")
    hs = {check_point(h, dim) for h in holes}
    items = patch.items() if isinstance(patch, dict) else patch
    pm = {}
    for p, q in items:
        p, q = check_point(p, dim), check_point(q, dim)
        if p in pm:
            raise RepresentationError("patch-function", f"point {p} patched twice")
        pm[p] = q
    clash = hs & set(pm)
    if clash:
        raise RepresentationError("holes-patch-disjoint", f"{sorted(clash)[0]} is both hole and patch")
    covered = RegionSet.from_boxes(dim, [b for b, _ in plist], disjoint=True)
    uncovered = covered.complement().subtract(RegionSet.from_points(dim, pm))
    if not uncovered.is_finite():
        raise RepresentationError("cofinite-domain",
                                  f"infinitely many points are uncovered, e.g. {uncovered.sample_point()}")
    return _normalize(dim, plist, hs, pm)


def identity(dim: int) -> PiecewiseMap:
    return PiecewiseMap(dim, ((Box((1,) * dim, (UNBOUNDED,) * dim), Rule.identity(dim)),))


def identity_off(dim: int, points: Iterable = ()) -> PiecewiseMap:
    """The idempotent acting as the identity on ``N^dim`` minus ``points``."""
    hs = frozenset(check_point(p, dim) for p in points)
    return PiecewiseMap(dim, identity(dim).pieces, hs)


def unit(perm: Sequence[int]) -> PiecewiseMap:
    """The order automorphism moving coordinate ``i`` to position ``perm[i]``."""
    perm = tuple(perm)
    dim = len(perm)
    return PiecewiseMap(dim, ((Box((1,) * dim, (UNBOUNDED,) * dim), Rule(perm, (0,) * dim)),))


def cylinder_shift(dim: int, axis: int, bounds: Sequence, amount: int) -> PiecewiseMap:
    """Shift the cylinder ``{x[axis] > -amount, x[j] <= bounds[j]}`` by ``amount``
    along ``axis``; identity elsewhere.  The vacated block leaves the domain.

    ``bounds[axis]`` is ignored.
    """
    if amount > -1:
        raise ValueError("amount must be <= -1")
    if not 0 <= axis < dim or len(bounds) != dim:
        raise DimensionMismatch("axis or bounds do not fit the dimension")
    hi = [UNBOUNDED if j == axis else int(bounds[j]) for j in range(dim)]
    if any(h < 1 for h in hi):
        raise ValueError("bounds must be positive")
    column = Box((1,) * dim, tuple(hi))
    moving_lo = [1] * dim
    moving_lo[axis] = 1 - amount
    shift = [0] * dim
    shift[axis] = amount
    pieces = [(Box(tuple(moving_lo), tuple(hi)), Rule(tuple(range(dim)), tuple(shift)))]
    ident = Rule.identity(dim)
    pieces += [(b, ident) for b in RegionSet(dim, (column,)).complement().boxes]
    return _normalize(dim, pieces, (), {})


# ------------------------------------------------------------- semantics


def _same_dim(a: PiecewiseMap, b: PiecewiseMap) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"maps of dimension {a.dim} and {b.dim}")


def evaluate(alpha: PiecewiseMap, x) -> tuple | None:
    """Image of ``x`` or ``None`` when ``x`` is outside the domain."""
    x = tuple(x)
    if x in alpha.holes:
        return None
    pm = alpha.patch_map
    if x in pm:
        return pm[x]
    hit = alpha.piece_at(x)
    return hit[1].apply(x) if hit else None


def compose(alpha: PiecewiseMap, beta: PiecewiseMap) -> PiecewiseMap:
    """``x -> beta(alpha(x))``, the product ``alpha beta``."""
    _same_dim(alpha, beta)
    pieces = []
    for bp, rp in alpha.pieces:
        for bq, rq in beta.pieces:
            pre = rp.preimage_box(bq)
            if pre is None:
                continue
            reg = bp.intersect(pre)
            if reg is not None:
                pieces.append((reg, rp.then(rq)))
    special = set(alpha.exceptional)
    for e in beta.exceptional:
        for bp, rp in alpha.pieces:
            x = rp.inverse_apply(e)
            if x is not None and x in bp and x not in alpha.exceptional:
                special.add(x)
    holes, patch = set(), {}
    for x in special:
        y = evaluate(alpha, x)
        z = None if y is None else evaluate(beta, y)
        if z is None:
            holes.add(x)
        else:
            patch[x] = z
    return _normalize(alpha.dim, pieces, holes, patch)


def _rules_agree_on(box: Box, r: Rule, s: Rule) -> bool:
    for k in range(r.dim):
        a, b = r.src[k], s.src[k]
        if a == b:
            if r.shift[k] != s.shift[k]:
                return False
        elif not (box.lo[a] == box.hi[a] and box.lo[b] == box.hi[b]
                  and box.lo[a] + r.shift[k] == box.lo[b] + s.shift[k]):
            return False
    return True


def difference_witness(alpha: PiecewiseMap, beta: PiecewiseMap) -> tuple | None:
    """A point where the two partial maps differ (domain or value), else ``None``."""
    _same_dim(alpha, beta)
    da, db = dom_complement(alpha), dom_complement(beta)
    if da != db:
        diff = da.subtract(db).union(db.subtract(da))
        return diff.sample_point()
    special = alpha.exceptional | beta.exceptional
    for x in sorted(special):
        if evaluate(alpha, x) != evaluate(beta, x):
            return x
    far = max(window_bound(alpha), window_bound(beta)) + 2
    for bp, rp in alpha.pieces:
        for bq, rq in beta.pieces:
            if rp == rq:
                continue
            inter = bp.intersect(bq)
            if inter is None:
                continue
            if inter.is_finite():
                for x in inter.points():
                    if x not in special and rp.apply(x) != rq.apply(x):
                        return x
            elif not _rules_agree_on(inter, rp, rq):
                axes = [[far, far + 1] if h == UNBOUNDED else sorted({lo, min(lo + 1, h)})
                        for lo, h in zip(inter.lo, inter.hi)]
                for x in itertools.product(*axes):
                    if rp.apply(x) != rq.apply(x):
                        return x
                raise AssertionError("disagreement on an infinite box without a probe witness")
    return None


def equals(alpha: PiecewiseMap, beta: PiecewiseMap) -> bool:
    """Equality as partial maps: same domain and same value everywhere on it."""
    if alpha == beta:
        return True
    return difference_witness(alpha, beta) is None


def dom_complement(alpha: PiecewiseMap) -> RegionSet:
    dim = alpha.dim
    covered = RegionSet.from_boxes(dim, [b for b, _ in alpha.pieces], disjoint=True)
    out = covered.complement().subtract(RegionSet.from_points(dim, alpha.patch_map))
    return out.union(RegionSet.from_points(dim, alpha.holes))


def _in_range(alpha: PiecewiseMap, z) -> bool:
    if z in alpha.patch_map.values():
        return True
    for box, rule in alpha.pieces:
        x = rule.inverse_apply(z)
        if x is not None and x in box and x not in alpha.exceptional:
            return True
    return False


def ran_complement(alpha: PiecewiseMap) -> RegionSet:
    dim = alpha.dim
    images = RegionSet.from_boxes(dim, [r.image_box(b) for b, r in alpha.pieces])
    out = images.complement()
    lost = set()
    for box, rule in alpha.pieces:
        for e in alpha.exceptional:
            if e in box:
                z = rule.apply(e)
                if not _in_range(alpha, z):
                    lost.add(z)
    out = out.union(RegionSet.from_points(dim, lost))
    return out.subtract(RegionSet.from_points(dim, set(alpha.patch_map.values())))


def inverse_if_valid(alpha: PiecewiseMap) -> PiecewiseMap | None:
    """The inverse partial map when it is again a member of the monoid."""
    if not validate(alpha).valid:
        return None
    pieces = [(r.image_box(b), r.inverse()) for b, r in alpha.pieces]
    patch = {q: p for p, q in alpha.patch}
    holes = set()
    for box, rule in alpha.pieces:
        for e in alpha.exceptional:
            if e in box:
                z = rule.apply(e)
                if z not in patch:
                    holes.add(z)
    try:
        inv = from_parts(alpha.dim, pieces, holes, patch)
    except RepresentationError:
        return None
    return inv if validate(inv).valid else None


# ---------------------------------------------------------------- validity


def window_bound(alpha: PiecewiseMap) -> int:
    """``B``: every hole, patch entry and finite box bound lies below it,
    with room for the largest translation."""
    m = 1
    for box, _ in alpha.pieces:
        m = max(m, *box.lo, *(h for h in box.hi if h != UNBOUNDED))
    for p in alpha.holes:
        m = max(m, *p)
    for p, q in alpha.patch:
        m = max(m, *p, *q)
    s = max((abs(d) for _, r in alpha.pieces for d in r.shift), default=0)
    return 1 + m + s


def window_grid(dim: int, bound: int) -> np.ndarray:
    """All points of ``[1..bound]^dim`` in lexicographic order."""
    axes = np.indices((bound,) * dim).reshape(dim, -1).T + 1
    return np.ascontiguousarray(axes, dtype=np.int64)


def window_arrays(alpha: PiecewiseMap, bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Domain points of ``[1..bound]^n`` (lex order) and their images."""
    dim = alpha.dim
    grid = window_grid(dim, bound)
    imgs = np.zeros_like(grid)
    defined = np.zeros(len(grid), dtype=bool)
    for box, rule in alpha.pieces:
        lo = np.array(box.lo, dtype=np.int64)
        hi = np.array([BIG if h == UNBOUNDED else h for h in box.hi], dtype=np.int64)
        mask = ((grid >= lo) & (grid <= hi)).all(axis=1)
        imgs[mask] = grid[mask][:, list(rule.src)] + np.array(rule.shift, dtype=np.int64)
        defined |= mask
    weights = bound ** np.arange(dim - 1, -1, -1)

    def index(p):
        return int(np.dot(np.array(p) - 1, weights)) if max(p) <= bound else None

    for h in alpha.holes:
        i = index(h)
        if i is not None:
            defined[i] = False
    for p, q in alpha.patch:
        i = index(p)
        if i is not None:
            defined[i] = True
            imgs[i] = q
    return np.ascontiguousarray(grid[defined]), np.ascontiguousarray(imgs[defined])


@dataclass
class ValidityReport:
    injective: bool
    monotone: bool
    dom_cofinite: bool
    ran_cofinite: bool
    witnesses: dict = field(default_factory=dict)
    bound: int = 0

    @property
    def valid(self) -> bool:
        return self.injective and self.monotone and self.dom_cofinite and self.ran_cofinite

    def failures(self) -> list[str]:
        return [k for k in ("injective", "monotone", "dom_cofinite", "ran_cofinite")
                if not getattr(self, k)]


def injectivity_witness(alpha: PiecewiseMap, bound: int | None = None):
    """Two distinct domain points with the same image, or ``None``."""
    B = window_bound(alpha) if bound is None else bound
    exc = alpha.exceptional
    pm = alpha.patch_map
    seen = {}
    for p, q in alpha.patch:
        if q in seen:
            return seen[q], p
        seen[q] = p
    for (bp, rp), (bq, rq) in itertools.combinations(alpha.pieces, 2):
        ov = rp.image_box(bp).intersect(rq.image_box(bq))
        if ov is None:
            continue
        if ov.is_finite():
            for z in ov.points():
                x, y = rp.inverse_apply(z), rq.inverse_apply(z)
                if x not in exc and y not in exc:
                    return x, y
        else:
            j = ov.hi.index(UNBOUNDED)
            z = list(ov.lo)
            z[j] = max(z[j], 2 * B)
            return rp.inverse_apply(z), rq.inverse_apply(z)
    for p, q in pm.items():
        for box, rule in alpha.pieces:
            x = rule.inverse_apply(q)
            if x is not None and x in box and x not in exc:
                return p, x
    return None


def _monotone_window_vs_outside(alpha, pts, imgs, B):
    # every window domain point x against points y >= x outside the window
    if not len(pts):
        return None
    n = alpha.dim
    for box, rule in alpha.pieces:
        lo = np.maximum(pts, np.array(box.lo, dtype=np.int64))
        hi = np.broadcast_to(np.array([BIG if h == UNBOUNDED else h for h in box.hi],
                                      dtype=np.int64), pts.shape)
        for k in range(n):
            b = rule.src[k]
            hk = hi.copy()
            hk[:, b] = np.minimum(hk[:, b], imgs[:, k] - 1 - rule.shift[k])
            ok = (lo <= hk).all(axis=1)
            if not ok.any():
                continue
            for j in range(n):
                hit = np.flatnonzero(ok & (hk[:, j] >= np.maximum(lo[:, j], B + 1)))
                if hit.size:
                    i = int(hit[0])
                    y = [int(v) for v in lo[i]]
                    y[j] = max(y[j], B + 1)
                    return tuple(int(v) for v in pts[i]), tuple(y)
    return None


def _monotone_outside(alpha, B):
    # both points outside the window: pure piece arithmetic
    n = alpha.dim
    for bp, rp in alpha.pieces:
        for bq, rq in alpha.pieces:
            for k in range(n):
                a, b = rp.src[k], rq.src[k]
                c = rp.shift[k] - rq.shift[k] - 1
                if a == b and c < 0:
                    continue
                system = DiffSystem(2 * n).bounds(0, bp.lo, bp.hi).bounds(n, bq.lo, bq.hi)
                for i in range(n):
                    system.diff_le(i, n + i, 0)
                system.diff_le(n + b, a, c)
                if system.solve() is None:
                    continue
                sol = solve_outside_window(system, range(n), B)
                if sol is not None:
                    return tuple(sol[:n]), tuple(sol[n:])
    return None


def monotonicity_witness(alpha: PiecewiseMap, bound: int | None = None, arrays=None):
    """A pair ``x <= y`` in the domain with ``alpha(x) !<= alpha(y)``, or ``None``.

    Exact over all of N^n: exhaustive inside the window, per-point bound
    reasoning for window-to-outside pairs, difference constraints beyond.
    """
    B = window_bound(alpha) if bound is None else bound
    pts, imgs = window_arrays(alpha, B) if arrays is None else arrays
    hit = kernels.monotone_violation(pts, imgs)
    if hit is not None:
        i, j = hit
        return tuple(int(v) for v in pts[i]), tuple(int(v) for v in pts[j])
    w = _monotone_window_vs_outside(alpha, pts, imgs, B)
    if w is not None:
        return w
    return _monotone_outside(alpha, B)


def validate(alpha: PiecewiseMap) -> ValidityReport:
    """Decide membership in the monoid, with counterexamples for failures."""
    B = window_bound(alpha)
    witnesses = {}
    inj = injectivity_witness(alpha, B)
    if inj is not None:
        witnesses["injective"] = inj
    mono = monotonicity_witness(alpha, B)
    if mono is not None:
        witnesses["monotone"] = mono
    dc = dom_complement(alpha)
    if not dc.is_finite():
        witnesses["dom_cofinite"] = (next(b.lo for b in dc.boxes if not b.is_finite()),)
    rc = ran_complement(alpha)
    if not rc.is_finite():
        witnesses["ran_cofinite"] = (next(b.lo for b in rc.boxes if not b.is_finite()),)
    return ValidityReport(inj is None, mono is None, dc.is_finite(), rc.is_finite(), witnesses, B)
