"""The poset N^n under the product order and exact unions of integer boxes.

Points are plain tuples of positive ints.  A :class:`Box` is a product of
integer intervals whose upper ends may be :data:`UNBOUNDED`; a
:class:`RegionSet` is a finite disjoint union of boxes kept in a canonical
form, so two region sets describe the same subset of N^n exactly when they
compare equal.

Axis indices are 0-based throughout the Python API; coordinates start at 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DimensionMismatch, PreconditionError

UNBOUNDED = math.inf

Point = tuple


def check_point(p: Sequence[int], dim: int | None = None) -> tuple:
    p = tuple(p)
    if dim is not None and len(p) != dim:
        raise DimensionMismatch(f"point {p} has dimension {len(p)}, expected {dim}")
    for c in p:
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise ValueError(f"point {p} has a coordinate that is not a positive integer")
    return p


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Product order: every coordinate of ``a`` is at most that of ``b``."""
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot compare {tuple(a)} and {tuple(b)}")
    return all(x <= y for x, y in zip(a, b))


class Interval(NamedTuple):
    lo: int
    hi: int | float = UNBOUNDED

    @property
    def bounded(self) -> bool:
        return self.hi != UNBOUNDED


class Box(NamedTuple):
    """Product of intervals ``[lo[i], hi[i]]``; never empty."""

    lo: tuple
    hi: tuple

    @classmethod
    def make(cls, lo, hi) -> Box | None:
        lo, hi = tuple(lo), tuple(hi)
        if len(lo) != len(hi):
            raise DimensionMismatch("lo and hi differ in length")
        lo = tuple(max(1, int(a)) for a in lo)
        hi = tuple(b if b == UNBOUNDED else int(b) for b in hi)
        if any(b < a for a, b in zip(lo, hi)):
            return None
        return cls(lo, hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def intervals(self) -> tuple:
        return tuple(Interval(a, b) for a, b in zip(self.lo, self.hi))

    def is_finite(self) -> bool:
        return UNBOUNDED not in self.hi

    def size(self) -> int:
        if not self.is_finite():
            raise ValueError("box is infinite")
        return math.prod(b - a + 1 for a, b in zip(self.lo, self.hi))

    def __contains__(self, p) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, p, self.hi))

    def intersect(self, other: Box) -> Box | None:
        lo = tuple(map(max, self.lo, other.lo))
        hi = tuple(map(min, self.hi, other.hi))
        if any(b < a for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def minus(self, other: Box) -> list[Box]:
        """``self \\ other`` as at most ``2n`` disjoint boxes."""
        inter = self.intersect(other)
        if inter is None:
            return [self]
        out = []
        lo, hi = list(self.lo), list(self.hi)
        for d in range(self.dim):
            if lo[d] < inter.lo[d]:
                out.append(Box(tuple(lo), tuple(hi[:d] + [inter.lo[d] - 1] + hi[d + 1:])))
            if hi[d] > inter.hi[d]:
                out.append(Box(tuple(lo[:d] + [inter.hi[d] + 1] + lo[d + 1:]), tuple(hi)))
            lo[d], hi[d] = inter.lo[d], inter.hi[d]
        return out

    def points(self) -> Iterator[tuple]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite box")
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def clip(self, bound: int) -> Box | None:
        """Intersection with the window ``[1..bound]^n``."""
        return self.intersect(Box((1,) * self.dim, (bound,) * self.dim))


def _canon(boxes: list, axis: int, n: int) -> tuple:
    # Maximal runs of constant cross-section along ``axis``; boxes are disjoint.
    if axis == n:
        return ((),) if boxes else ()
    cuts = set()
    for b in boxes:
        cuts.add(b.lo[axis])
        if b.hi[axis] != UNBOUNDED:
            cuts.add(b.hi[axis] + 1)
    cuts = sorted(cuts)
    runs = []  # [start, end, sub]
    for i, a in enumerate(cuts):
        end = cuts[i + 1] - 1 if i + 1 < len(cuts) else UNBOUNDED
        members = [b for b in boxes if b.lo[axis] <= a <= b.hi[axis]]
        sub = _canon(members, axis + 1, n)
        if not sub:
            continue
        if runs and runs[-1][2] == sub and runs[-1][1] + 1 == a:
            runs[-1][1] = end
        else:
            runs.append([a, end, sub])
    return tuple(((a, e),) + s for a, e, sub in runs for s in sub)


def _disjoint(boxes: Iterable[Box]) -> list[Box]:
    out: list[Box] = []
    for b in boxes:
        parts = [b]
        for c in out:
            parts = [q for p in parts for q in p.minus(c)]
            if not parts:
                break
        out.extend(parts)
    return out


def canonical_boxes(boxes: Iterable[Box], disjoint: bool = False) -> tuple:
    boxes = list(boxes)
    if not boxes:
        return ()
    if not disjoint:
        boxes = _disjoint(boxes)
    n = boxes[0].dim
    rows = _canon(boxes, 0, n)
    out = [Box(tuple(iv[0] for iv in r), tuple(iv[1] for iv in r)) for r in rows]
    out.sort()
    return tuple(out)


@dataclass(frozen=True)
class RegionSet:
    """Canonical finite disjoint union of boxes in N^dim.

    Build instances with the classmethods; the raw constructor trusts its
    ``boxes`` argument to be canonical already.
    """

    dim: int
    boxes: tuple = ()

    # construction -------------------------------------------------------
    @classmethod
    def from_boxes(cls, dim: int, boxes: Iterable, disjoint: bool = False) -> RegionSet:
        bs = []
        for b in boxes:
            if not isinstance(b, Box):
                b = Box.make(*b)
                if b is None:
                    continue
            if b.dim != dim:
                raise DimensionMismatch(f"box of dimension {b.dim} in a {dim}-dimensional region")
            bs.append(b)
        return cls(dim, canonical_boxes(bs, disjoint=disjoint))

    @classmethod
    def from_points(cls, dim: int, points: Iterable) -> RegionSet:
        pts = {check_point(p, dim) for p in points}
        return cls.from_boxes(dim, (Box(p, p) for p in pts), disjoint=True)

    @classmethod
    def full(cls, dim: int) -> RegionSet:
        return cls(dim, (Box((1,) * dim, (UNBOUNDED,) * dim),))

    @classmethod
    def empty(cls, dim: int) -> RegionSet:
        return cls(dim, ())

    @classmethod
    def upset(cls, p: Sequence[int]) -> RegionSet:
        p = check_point(p)
        return cls(len(p), (Box(p, (UNBOUNDED,) * len(p)),))

    @classmethod
    def box(cls, lo, hi) -> RegionSet:
        b = Box.make(lo, hi)
        return cls(len(lo), (b,) if b else ())

    # algebra ------------------------------------------------------------
    def _same_dim(self, other: RegionSet) -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"regions of dimension {self.dim} and {other.dim}")

    def intersect(self, other: RegionSet) -> RegionSet:
        self._same_dim(other)
        parts = [c for a in self.boxes for b in other.boxes if (c := a.intersect(b)) is not None]
        return RegionSet(self.dim, canonical_boxes(parts, disjoint=True))

    def subtract(self, other: RegionSet) -> RegionSet:
        self._same_dim(other)
        parts = list(self.boxes)
        for b in other.boxes:
            parts = [q for p in parts for q in p.minus(b)]
        return RegionSet(self.dim, canonical_boxes(parts, disjoint=True))

    def union(self, other: RegionSet) -> RegionSet:
        self._same_dim(other)
        extra = other.subtract(self)
        return RegionSet(self.dim, canonical_boxes(self.boxes + extra.boxes, disjoint=True))

    def complement(self) -> RegionSet:
        return RegionSet.full(self.dim).subtract(self)

    __and__ = intersect
    __or__ = union
    __sub__ = subtract

    def __invert__(self) -> RegionSet:
        return self.complement()

    # queries ------------------------------------------------------------
    def __contains__(self, p) -> bool:
        return any(p in b for b in self.boxes)

    def is_empty(self) -> bool:
        return not self.boxes

    def is_finite(self) -> bool:
        return all(b.is_finite() for b in self.boxes)

    def cardinality(self) -> int:
        if not self.is_finite():
            raise ValueError("region is infinite")
        return sum(b.size() for b in self.boxes)

    def enumerate(self) -> Iterator[tuple]:
        """Points in lexicographic order (finite regions only)."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite region")
        return iter(sorted(p for b in self.boxes for p in b.points()))

    def __iter__(self) -> Iterator[tuple]:
        return self.enumerate()

    def points_in_window(self, bound: int) -> list[tuple]:
        return sorted(p for b in self.boxes if (c := b.clip(bound)) for p in c.points())

    def sample_point(self) -> tuple | None:
        return self.boxes[0].lo if self.boxes else None

    def __repr__(self) -> str:
        def iv(a, b):
            return f"[{a},{'inf' if b == UNBOUNDED else b}]"
        body = " | ".join("x".join(iv(a, b) for a, b in zip(bx.lo, bx.hi)) for bx in self.boxes)
        return f"RegionSet({self.dim}: {body or 'empty'})"


def region_algebra(op: str, *args: RegionSet) -> RegionSet:
    """Dispatch ``intersect``/``union``/``subtract``/``complement`` by name."""
    if op == "complement":
        (a,) = args
        return a.complement()
    if op not in ("intersect", "union", "subtract"):
        raise ValueError(f"unknown region operation {op!r}")
    if not args:
        raise ValueError("no operands")
    out = args[0]
    for a in args[1:]:
        out = getattr(out, op)(a)
    return out


@dataclass(frozen=True)
class Space:
    """Ambient dimension ``n >= 2`` plus convenience constructors."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("dimension must be an integer >= 2")

    def point(self, *coords) -> tuple:
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return check_point(coords, self.n)

    def bottom(self) -> tuple:
        return (1,) * self.n

    def full(self) -> RegionSet:
        return RegionSet.full(self.n)

    def empty(self) -> RegionSet:
        return RegionSet.empty(self.n)

    def upset(self, p) -> RegionSet:
        return RegionSet.upset(self.point(p))

    def axis(self, i: int) -> RegionSet:
        """The ray K_i of points equal to 1 off coordinate ``i``."""
        hi = [1] * self.n
        hi[i] = UNBOUNDED
        return RegionSet.box((1,) * self.n, hi)

    def plane(self, i: int, j: int) -> RegionSet:
        """The coordinate plane K_ij."""
        if i == j:
            raise ValueError("plane needs two distinct axes")
        hi = [1] * self.n
        hi[i] = hi[j] = UNBOUNDED
        return RegionSet.box((1,) * self.n, hi)


def on_axis(p: Sequence[int], i: int) -> bool:
    """True iff ``p`` lies on the ray K_i."""
    return all(c == 1 for k, c in enumerate(p) if k != i)


def upset_union_cofinite(points: Iterable[Sequence[int]]) -> bool:
    """Whether ``N^n`` minus the union of the up-sets of ``points`` is finite.

    Decided combinatorially: each axis ray must carry one of the points.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        return False
    n = len(pts[0])
    for p in pts:
        check_point(p, n)
        if all(c == 1 for c in p):
            raise PreconditionError("the bottom point (1,...,1) is excluded")
    return all(any(on_axis(p, i) for p in pts) for i in range(n))


def upset_union_complement(points: Iterable[Sequence[int]]) -> RegionSet:
    pts = [check_point(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    n = len(pts[0])
    up = RegionSet.from_boxes(n, (Box(p, (UNBOUNDED,) * n) for p in pts))
    return up.complement()


def antichain_witness(k: int) -> list[tuple]:
    """``k+1`` pairwise incomparable points of N^2; no ``k`` chains can cover them."""
    if k < 1:
        raise ValueError("k must be positive")
    return [(i, k + 2 - i) for i in range(1, k + 2)]


def is_antichain(points: Sequence[Sequence[int]]) -> bool:
    return all(not leq(a, b) and not leq(b, a) for a, b in itertools.combinations(points, 2))


@dataclass(frozen=True)
class ChainDescriptor:
    """A line parallel to one axis: fixed coordinates plus one free coordinate.

    ``kind`` is ``"L"`` (first coordinate fixed, second free) or ``"R"``
    (second fixed, first free); ``fixed`` maps 0-based axes to values.
    """

    kind: str
    fixed: tuple
    free: int

    @property
    def dim(self) -> int:
        return len(self.fixed) + 1

    def region(self) -> Box:
        lo = [1] * self.dim
        hi = [UNBOUNDED] * self.dim
        for i, v in self.fixed:
            lo[i] = hi[i] = v
        return Box(tuple(lo), tuple(hi))

    def __contains__(self, p) -> bool:
        return all(p[i] == v for i, v in self.fixed)


def chain_cover(y12: Sequence[int], xs: Sequence[Sequence[int]]) -> list[ChainDescriptor]:
    """Finitely many chains covering ``N^n`` minus ``up(y12) | up(x_3) | ... | up(x_n)``.

    ``y12 = (y1, y2, 1, ..., 1)`` with ``y1, y2 >= 2``; ``xs[m]`` lies on the
    axis ray of coordinate ``m + 2`` (0-based) strictly above the bottom.
    """
    y12 = check_point(y12)
    n = len(y12)
    if n < 3:
        raise PreconditionError("chain_cover needs dimension >= 3")
    if y12[0] < 2 or y12[1] < 2 or any(c != 1 for c in y12[2:]):
        raise PreconditionError(f"{y12} is not in the open (1,2) coordinate plane")
    xs = [check_point(x, n) for x in xs]
    if len(xs) != n - 2:
        raise PreconditionError(f"expected {n - 2} axis points, got {len(xs)}")
    bounds = []
    for m, x in enumerate(xs, start=2):
        if not on_axis(x, m) or x[m] < 2:
            raise PreconditionError(f"{x} is not on axis {m + 1} above the bottom")
        bounds.append(x[m])
    out = []
    for ks in itertools.product(*(range(1, b) for b in bounds)):
        tail = tuple((m, k) for m, k in enumerate(ks, start=2))
        out.extend(ChainDescriptor("L", ((0, i),) + tail, 1) for i in range(1, y12[0]))
        out.extend(ChainDescriptor("R", ((1, j),) + tail, 0) for j in range(1, y12[1]))
    return out
