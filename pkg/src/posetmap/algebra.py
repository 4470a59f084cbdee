"""Semigroup structure: units, axis behaviour, idempotents, Green's relations.

Everything from :func:`pointwise_decrease_check` on is specific to
dimension 3 and raises :class:`UnsupportedDimension` elsewhere; the
statements behind those procedures are only known to hold there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constraints import DiffSystem, solve_outside_window
from .errors import InvalidElement, PreconditionError, TheoremViolation, UnsupportedDimension
from .pmap import (
    PiecewiseMap,
    compose,
    dom_complement,
    equals,
    evaluate,
    identity,
    identity_off,
    ran_complement,
    unit,
    window_arrays,
    window_bound,
)
from .regions import UNBOUNDED, Box, RegionSet, on_axis

RELATIONS = ("L", "R", "H", "D", "J")


def _perm_inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, t in enumerate(p):
        out[t] = i
    return tuple(out)


@dataclass(frozen=True)
class AxisPermutation:
    """Axis ``i`` is carried into axis ``perm[i]``."""

    perm: tuple

    def inverse(self) -> AxisPermutation:
        return AxisPermutation(_perm_inverse(self.perm))

    def then(self, other: AxisPermutation) -> AxisPermutation:
        return AxisPermutation(tuple(other.perm[t] for t in self.perm))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))


@dataclass(frozen=True)
class GreenWitness:
    relation: str
    mu: tuple | None = None
    nu: tuple | None = None

    @property
    def mu_unit(self) -> PiecewiseMap | None:
        return None if self.mu is None else unit(self.mu)

    @property
    def nu_unit(self) -> PiecewiseMap | None:
        return None if self.nu is None else unit(self.nu)


def _require_dim3(*maps: PiecewiseMap) -> None:
    for m in maps:
        if m.dim != 3:
            raise UnsupportedDimension(f"only dimension 3 is supported here, got {m.dim}")


def _ident_on(region_complement: RegionSet, dim: int) -> PiecewiseMap:
    if not region_complement.is_finite():
        raise PreconditionError("restriction set must be cofinite")
    return identity_off(dim, region_complement.enumerate())


# ------------------------------------------------------------------ units


def unit_perms(dim: int) -> list[tuple]:
    return list(itertools.permutations(range(dim)))


def units(dim: int) -> list[PiecewiseMap]:
    """The ``dim!`` coordinate permutations, identity first (lexicographic)."""
    return [unit(p) for p in unit_perms(dim)]


def unit_perm(u: PiecewiseMap) -> tuple | None:
    """Permutation of a unit, ``None`` if ``u`` is not a coordinate permutation."""
    if len(u.pieces) != 1 or u.holes or u.patch:
        return None
    box, rule = u.pieces[0]
    if box.lo != (1,) * u.dim or any(h != UNBOUNDED for h in box.hi) or any(rule.shift):
        return None
    return rule.perm


def unit_inverse(u: PiecewiseMap) -> PiecewiseMap:
    p = unit_perm(u)
    if p is None:
        raise PreconditionError("not a unit")
    return unit(_perm_inverse(p))


# ------------------------------------------------------- axes and normalising


def axis_permutation(alpha: PiecewiseMap) -> AxisPermutation:
    """The permutation by which ``alpha`` carries axis rays into axis rays."""
    n = alpha.dim
    m = window_bound(alpha) + 1
    targets = []
    for i in range(n):
        probe = tuple(m if k == i else 1 for k in range(n))
        y = evaluate(alpha, probe)
        moved = [] if y is None else [k for k in range(n) if y[k] != 1]
        if len(moved) != 1:
            raise InvalidElement(f"axis {i}: probe {probe} maps to {y}, not onto an axis")
        j = moved[0]
        box, rule = alpha.piece_at(probe)
        tail_ok = (box.hi[i] == UNBOUNDED and all(box.lo[k] == 1 for k in range(n) if k != i)
                   and rule.src[j] == i and all(rule.shift[k] == 0 for k in range(n) if k != j))
        if not tail_ok:
            raise InvalidElement(f"axis {i}: the tail beyond {probe} does not map into axis {j}")
        for t in range(1, m):
            x = tuple(t if k == i else 1 for k in range(n))
            fx = evaluate(alpha, x)
            if fx is not None and not on_axis(fx, j):
                raise InvalidElement(f"axis point {x} maps off axis {j} to {fx}")
        targets.append(j)
    if sorted(targets) != list(range(n)):
        raise InvalidElement(f"axes map to {targets}, not a permutation")
    return AxisPermutation(tuple(targets))


def is_normalized(alpha: PiecewiseMap) -> bool:
    return axis_permutation(alpha).is_identity()


def normalize(alpha: PiecewiseMap) -> tuple[PiecewiseMap, PiecewiseMap]:
    """``(sigma, alpha sigma)`` with ``alpha sigma`` preserving every axis ray.

    ``sigma alpha`` preserves the axes too; both are checked.
    """
    s = axis_permutation(alpha)
    sigma = unit(s.inverse().perm)
    right = compose(alpha, sigma)
    if not axis_permutation(right).is_identity():
        raise TheoremViolation("alpha sigma does not preserve the axes")
    if not axis_permutation(compose(sigma, alpha)).is_identity():
        raise TheoremViolation("sigma alpha does not preserve the axes")
    return sigma, right


def _require_normalized(alpha: PiecewiseMap) -> None:
    if not is_normalized(alpha):
        raise PreconditionError("element does not preserve the axis rays; normalize it first")


def plane_violation(alpha: PiecewiseMap) -> tuple | None:
    """A point of some coordinate plane mapped off that plane, else ``None``."""
    _require_normalized(alpha)
    n = alpha.dim
    B = window_bound(alpha)
    pts, imgs = window_arrays(alpha, B)
    for i1, i2 in itertools.combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i1, i2)]
        if not others:
            continue
        on = (pts[:, others] == 1).all(axis=1)
        off = on & ~(imgs[:, others] == 1).all(axis=1)
        hit = np.flatnonzero(off)
        if hit.size:
            return tuple(int(v) for v in pts[hit[0]])
        hi = tuple(UNBOUNDED if k in (i1, i2) else 1 for k in range(n))
        plane = Box((1,) * n, hi)
        for box, rule in alpha.pieces:
            inter = box.intersect(plane)
            if inter is None:
                continue
            for k in others:
                s, d = rule.src[k], rule.shift[k]
                for system in (DiffSystem(n).bounds(0, inter.lo, inter.hi).lower(s, 2 - d),
                               DiffSystem(n).bounds(0, inter.lo, inter.hi).upper(s, -d)):
                    sol = solve_outside_window(system, range(n), B)
                    if sol is not None:
                        return tuple(sol)
    return None


def plane_preservation_check(alpha: PiecewiseMap) -> bool:
    return plane_violation(alpha) is None


# --------------------------------------------------- dimension-3 structure


def decrease_violation(alpha: PiecewiseMap) -> tuple | None:
    """A domain point ``x`` with ``alpha(x) !<= x``, else ``None``."""
    _require_dim3(alpha)
    _require_normalized(alpha)
    n = alpha.dim
    B = window_bound(alpha)
    pts, imgs = window_arrays(alpha, B)
    bad = np.flatnonzero(~(imgs <= pts).all(axis=1))
    if bad.size:
        return tuple(int(v) for v in pts[bad[0]])
    for box, rule in alpha.pieces:
        for k in range(n):
            # x[src k] + shift k >= x[k] + 1
            system = DiffSystem(n).bounds(0, box.lo, box.hi)
            system.diff_le(k, rule.src[k], rule.shift[k] - 1)
            sol = solve_outside_window(system, range(n), B)
            if sol is not None:
                return tuple(sol)
    return None


def pointwise_decrease_check(alpha: PiecewiseMap) -> bool:
    return decrease_violation(alpha) is None


def _moved_point(box: Box, rule):
    # some point of ``box`` that ``rule`` moves, probing {lo, lo+1} per axis
    axes = [sorted({lo, lo + 1 if hi == UNBOUNDED else min(lo + 1, hi)})
            for lo, hi in zip(box.lo, box.hi)]
    for x in itertools.product(*axes):
        if rule.apply(x) != x:
            return x
    return None


def n_alpha_witness(alpha: PiecewiseMap) -> tuple[int, tuple | None]:
    """Least ``N`` with ``alpha`` fixing its domain above ``(N, N, N)``.

    Also returns a moved domain point with smallest coordinate ``N - 1``
    certifying minimality (``None`` when ``N == 1``).
    """
    _require_dim3(alpha)
    _require_normalized(alpha)
    n = alpha.dim
    B = window_bound(alpha)
    pts, imgs = window_arrays(alpha, B)
    best, witness = 0, None
    moved = np.flatnonzero((imgs != pts).any(axis=1))
    if moved.size:
        mins = pts[moved].min(axis=1)
        i = int(np.argmax(mins))
        best, witness = int(mins[i]), tuple(int(v) for v in pts[moved[i]])
    for box, rule in alpha.pieces:
        if rule.is_identity():
            continue
        top = min(box.hi)
        if top == UNBOUNDED:
            raise TheoremViolation(f"rule {rule} moves points arbitrarily far above the diagonal")
        for t in range(int(top), best, -1):
            found = None
            for j in range(n):
                lo = [max(a, t) for a in box.lo]
                lo[j] = max(lo[j], B + 1)
                sub = Box.make(lo, box.hi)
                if sub is not None:
                    found = _moved_point(sub, rule)
                    if found:
                        break
            if found:
                best, witness = t, found
                break
    nval = best + 1
    # re-verify on the window: fixed above nval, and the witness really moves
    above = (pts >= nval).all(axis=1)
    if (imgs[above] != pts[above]).any():
        raise TheoremViolation("window point above the threshold is moved")
    if witness is not None and (evaluate(alpha, witness) == witness or min(witness) != nval - 1):
        raise TheoremViolation("minimality witness does not move")
    return nval, witness


def n_alpha(alpha: PiecewiseMap) -> int:
    return n_alpha_witness(alpha)[0]


def corner_units(alpha: PiecewiseMap) -> tuple[PiecewiseMap, PiecewiseMap, int]:
    """Units ``s1, s2`` and a threshold ``N`` with ``s1 alpha`` and ``alpha s2``
    fixing their domains above ``(N, N, N)``."""
    _require_dim3(alpha)
    sigma, right = normalize(alpha)
    left = compose(sigma, alpha)
    return sigma, sigma, max(n_alpha(left), n_alpha(right))


# ------------------------------------------------------------- idempotents


def is_idempotent(alpha: PiecewiseMap) -> bool:
    dc = dom_complement(alpha)
    if not dc.is_finite():
        raise InvalidElement("domain is not cofinite")
    return equals(alpha, identity_off(alpha.dim, dc.enumerate()))


def semilattice_iso(eps: PiecewiseMap) -> frozenset:
    """The finite set an idempotent leaves out of its domain."""
    if not is_idempotent(eps):
        raise PreconditionError("not an idempotent")
    return frozenset(dom_complement(eps).enumerate())


def idempotent_product(e1: PiecewiseMap, e2: PiecewiseMap) -> PiecewiseMap:
    if not (is_idempotent(e1) and is_idempotent(e2)):
        raise PreconditionError("both factors must be idempotent")
    return compose(e1, e2)


def left_absorbs(gamma: PiecewiseMap, alpha: PiecewiseMap) -> bool:
    """``gamma alpha == alpha``; cross-checked against ``gamma`` fixing ``dom alpha``."""
    product_side = equals(compose(gamma, alpha), alpha)
    iota = _ident_on(dom_complement(alpha), alpha.dim)
    restriction_side = equals(compose(iota, gamma), iota)
    if product_side != restriction_side:
        raise TheoremViolation("left absorption disagrees with the restriction criterion")
    return product_side


def right_absorbs(gamma: PiecewiseMap, alpha: PiecewiseMap) -> bool:
    """``alpha gamma == alpha``; cross-checked against ``gamma`` fixing ``ran alpha``."""
    product_side = equals(compose(alpha, gamma), alpha)
    iota = _ident_on(ran_complement(alpha), alpha.dim)
    restriction_side = equals(compose(iota, gamma), iota)
    if product_side != restriction_side:
        raise TheoremViolation("right absorption disagrees with the restriction criterion")
    return product_side


# ------------------------------------------------------- Green's relations


def _image_points(points, perm) -> set:
    src = _perm_inverse(perm)
    return {tuple(p[s] for s in src) for p in points}


def green(relation: str, alpha: PiecewiseMap, beta: PiecewiseMap) -> GreenWitness | None:
    """Units witnessing ``alpha ~ beta``, or ``None`` when unrelated.

    L: ``alpha = mu beta``; R: ``alpha = beta nu``; H: both; D: ``alpha = mu
    beta nu``; J coincides with D here.  The lexicographically least
    witnessing permutation(s) are returned.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    _require_dim3(alpha, beta)
    perms = unit_perms(3)
    if relation == "L":
        for p in perms:
            if equals(alpha, compose(unit(p), beta)):
                return GreenWitness("L", mu=p)
        return None
    if relation == "R":
        for p in perms:
            if equals(alpha, compose(beta, unit(p))):
                return GreenWitness("R", nu=p)
        return None
    if relation == "H":
        lw, rw = green("L", alpha, beta), green("R", alpha, beta)
        if lw is None or rw is None:
            return None
        return GreenWitness("H", mu=lw.mu, nu=rw.nu)
    # D and J
    da = dom_complement(alpha)
    ra = set(ran_complement(alpha).enumerate())
    rb = list(ran_complement(beta).enumerate())
    for p in perms:
        mb = compose(unit(p), beta)
        if dom_complement(mb) != da:
            continue
        for q in perms:
            if _image_points(rb, q) != ra:
                continue
            if equals(alpha, compose(mb, unit(q))):
                return GreenWitness(relation, mu=p, nu=q)
    return None


def dedup(maps: list[PiecewiseMap]) -> list[PiecewiseMap]:
    out: list[PiecewiseMap] = []
    for m in maps:
        if not any(equals(m, o) for o in out):
            out.append(m)
    return out


def green_class(relation: str, alpha: PiecewiseMap) -> list[PiecewiseMap]:
    """The L-class ``{mu alpha}`` or R-class ``{alpha nu}``; always 6 elements."""
    _require_dim3(alpha)
    if relation == "L":
        members = dedup([compose(u, alpha) for u in units(3)])
    elif relation == "R":
        members = dedup([compose(alpha, u) for u in units(3)])
    else:
        raise ValueError("green_class takes 'L' or 'R'")
    if len(members) != 6:
        raise TheoremViolation(f"{relation}-class has {len(members)} elements, expected 6")
    return members


def h_class(alpha: PiecewiseMap) -> list[PiecewiseMap]:
    """Intersection of the L- and R-classes of ``alpha`` (at most 6 elements)."""
    rs = green_class("R", alpha)
    members = [m for m in green_class("L", alpha) if any(equals(m, r) for r in rs)]
    if not 1 <= len(members) <= 6:
        raise TheoremViolation(f"H-class has {len(members)} elements")
    return members


def d_class(alpha: PiecewiseMap) -> list[PiecewiseMap]:
    _require_dim3(alpha)
    us = units(3)
    return dedup([compose(compose(m, alpha), v) for m in us for v in us])


# --------------------------------------------------- sandwich factorisations


def power(alpha: PiecewiseMap, k: int) -> PiecewiseMap:
    out = identity(alpha.dim)
    for _ in range(k):
        out = compose(out, alpha)
    return out


def _agreeing_units(iota: PiecewiseMap, gamma: PiecewiseMap) -> list[tuple]:
    restricted = compose(iota, gamma)
    return [p for p in unit_perms(gamma.dim) if equals(restricted, compose(iota, unit(p)))]


def sandwich_candidates(alpha: PiecewiseMap) -> list[tuple[tuple, tuple]]:
    """All unit pairs ``(p, q)`` with ``alpha = unit(p) alpha unit(q)``."""
    _require_dim3(alpha)
    perms = unit_perms(3)
    return [(p, q) for p in perms for q in perms
            if equals(alpha, compose(compose(unit(p), alpha), unit(q)))]


def sandwich_units(alpha: PiecewiseMap, beta: PiecewiseMap,
                   gamma: PiecewiseMap) -> tuple[PiecewiseMap, PiecewiseMap]:
    """Given ``alpha = beta alpha gamma``, units acting like ``beta`` on
    ``dom alpha`` and like ``gamma`` on ``ran alpha``; they satisfy
    ``alpha = s_beta alpha s_gamma``."""
    _require_dim3(alpha, beta, gamma)
    if not equals(alpha, compose(compose(beta, alpha), gamma)):
        raise PreconditionError("alpha != beta alpha gamma")
    dom_iota = _ident_on(dom_complement(alpha), 3)
    ran_iota = _ident_on(ran_complement(alpha), 3)
    sb = _agreeing_units(dom_iota, beta)
    sg = _agreeing_units(ran_iota, gamma)
    if not sb or not sg:
        raise TheoremViolation("no unit agrees with beta on dom alpha / gamma on ran alpha")
    s_beta, s_gamma = unit(sb[0]), unit(sg[0])
    if not equals(alpha, compose(compose(s_beta, alpha), s_gamma)):
        raise TheoremViolation("alpha != s_beta alpha s_gamma")
    return s_beta, s_gamma


def cofactor_units(alpha: PiecewiseMap, beta: PiecewiseMap, region: RegionSet) -> PiecewiseMap:
    """Given ``alpha beta`` fixing the cofinite ``region`` pointwise, the unit
    ``sigma`` agreeing with ``alpha`` on it (``sigma^-1`` agrees with ``beta``
    on its image)."""
    _require_dim3(alpha, beta)
    iota = _ident_on(region.complement(), 3)
    if not equals(compose(iota, compose(alpha, beta)), iota):
        raise PreconditionError("alpha beta is not the identity on the region")
    restricted = compose(iota, alpha)
    image_iota = _ident_on(ran_complement(restricted), 3)
    back = compose(image_iota, beta)
    for p in unit_perms(3):
        if (equals(restricted, compose(iota, unit(p)))
                and equals(back, compose(image_iota, unit(_perm_inverse(p))))):
            return unit(p)
    raise TheoremViolation("no unit factors alpha and beta on the region")


def trim_factorization(gamma: PiecewiseMap, delta: PiecewiseMap, alpha: PiecewiseMap,
                       beta: PiecewiseMap) -> tuple[PiecewiseMap, PiecewiseMap]:
    """From ``alpha = gamma beta delta``, trim the outer factors to the
    domains and ranges involved: ``gamma* = i_dom(a) gamma i_dom(b)`` and
    ``delta* = i_ran(b) delta i_ran(a)``.

    The claimed equalities ``ran gamma* = dom beta`` and ``dom delta* =
    ran beta`` are checked; they are not always achievable (see tests), and
    a failure raises :class:`TheoremViolation` naming the broken equation.
    """
    if not equals(alpha, compose(compose(gamma, beta), delta)):
        raise PreconditionError("alpha != gamma beta delta")
    dim = alpha.dim
    i_da = _ident_on(dom_complement(alpha), dim)
    i_db = _ident_on(dom_complement(beta), dim)
    i_rb = _ident_on(ran_complement(beta), dim)
    i_ra = _ident_on(ran_complement(alpha), dim)
    g = compose(compose(i_da, gamma), i_db)
    d = compose(compose(i_rb, delta), i_ra)
    checks = {
        "alpha = gamma* beta delta*": equals(alpha, compose(compose(g, beta), d)),
        "dom gamma* = dom alpha": dom_complement(g) == dom_complement(alpha),
        "ran gamma* = dom beta": ran_complement(g) == dom_complement(beta),
        "dom delta* = ran beta": dom_complement(d) == ran_complement(beta),
        "ran delta* = ran alpha": ran_complement(d) == ran_complement(alpha),
    }
    broken = [k for k, ok in checks.items() if not ok]
    if broken:
        raise TheoremViolation("trimmed factorization fails: " + "; ".join(broken))
    return g, d
