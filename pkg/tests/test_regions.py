import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetmap.errors import DimensionMismatch, PreconditionError
from posetmap.regions import (
    UNBOUNDED,
    Box,
    RegionSet,
    Space,
    antichain_witness,
    chain_cover,
    is_antichain,
    leq,
    region_algebra,
    upset_union_cofinite,
    upset_union_complement,
)

S3 = Space(3)


def test_leq_examples():
    assert leq((1, 2, 3), (2, 2, 3))
    assert not leq((1, 4, 1), (2, 2, 3))
    assert leq((4, 4, 4), (4, 4, 4))
    with pytest.raises(DimensionMismatch):
        leq((1, 2), (1, 2, 3))


def test_complement_of_three_upsets_is_small_box():
    u = S3.upset((2, 1, 1)) | S3.upset((1, 3, 1)) | S3.upset((1, 1, 4))
    comp = region_algebra("complement", u)
    assert comp == RegionSet.box((1, 1, 1), (1, 2, 3))
    assert comp.cardinality() == 6
    window = itertools.product(range(1, 11), repeat=3)
    expected = [p for p in window if not any(leq(q, p) for q in [(2, 1, 1), (1, 3, 1), (1, 1, 4)])]
    assert list(comp.enumerate()) == expected


def test_upset_intersection_and_full_subtraction():
    assert S3.upset((2, 2, 2)) & S3.upset((3, 1, 1)) == S3.upset((3, 2, 2))
    assert region_algebra("subtract", S3.full(), S3.full()).is_empty()


def test_finiteness_and_cardinality():
    box = RegionSet.box((1, 1, 1), (1, 2, 3))
    assert box.is_finite() and box.cardinality() == 6
    assert not S3.upset((5, 5, 5)).is_finite()
    assert S3.empty().is_finite() and S3.empty().cardinality() == 0
    with pytest.raises(ValueError):
        S3.upset((5, 5, 5)).cardinality()


def test_enumerate_is_lexicographic():
    r = RegionSet.from_points(3, [(2, 1, 1), (1, 1, 2), (1, 2, 1), (1, 1, 1)])
    assert list(r.enumerate()) == sorted(r.enumerate())
    assert len(list(r.enumerate())) == 4


def test_canonical_form_decides_set_equality():
    a = RegionSet.from_boxes(2, [Box((1, 1), (3, 3)), Box((4, 1), (5, 3))])
    b = RegionSet.from_boxes(2, [Box((1, 1), (5, 1)), Box((1, 2), (5, 3))])
    assert a == b


def test_box_minus_stays_small():
    a = Box((1, 1, 1), (UNBOUNDED,) * 3)
    b = Box((2, 2, 2), (4, 4, 4))
    parts = a.minus(b)
    assert len(parts) <= 6


def test_upset_cofinite_examples():
    assert upset_union_cofinite([(2, 1, 1), (1, 3, 1), (1, 1, 4)])
    assert not upset_union_cofinite([(2, 2, 1), (1, 1, 3)])
    assert upset_union_cofinite([(2, 1), (1, 2)])
    with pytest.raises(PreconditionError):
        upset_union_cofinite([(1, 1, 1), (2, 1, 1)])


def test_non_cofinite_complement_grows_with_window():
    comp = upset_union_complement([(2, 2, 1), (1, 1, 3)])
    counts = [len(comp.points_in_window(M)) for M in (5, 10, 20)]
    assert counts[0] < counts[1] < counts[2]


def test_antichain_witness():
    assert sorted(antichain_witness(3)) == [(1, 4), (2, 3), (3, 2), (4, 1)]
    assert sorted(antichain_witness(1)) == [(1, 2), (2, 1)]
    pts = antichain_witness(10)
    assert len(pts) == 11
    assert sum(1 for _ in itertools.combinations(pts, 2)) == 55
    assert is_antichain(pts)


@pytest.mark.parametrize("k", range(1, 7))
def test_antichain_defeats_k_chains(k):
    # every way of spreading k+1 antichain points over k chains puts an
    # incomparable pair into a single chain
    pts = antichain_witness(k)
    pairs = [(i, j) for i, j in itertools.combinations(range(len(pts)), 2)
             if not (leq(pts[i], pts[j]) or leq(pts[j], pts[i]))]
    assign = np.array(list(itertools.product(range(k), repeat=len(pts))))
    clash = np.zeros(len(assign), dtype=bool)
    for i, j in pairs:
        clash |= assign[:, i] == assign[:, j]
    assert clash.all()


def _cover_matches(y12, x3, M):
    chains = chain_cover(y12, [x3])
    comp = upset_union_complement([y12, x3])
    grid = itertools.product(range(1, M + 1), repeat=3)
    for p in grid:
        assert (p in comp) == any(p in c for c in chains), p
    return chains


def test_chain_cover_examples():
    chains = _cover_matches((2, 3, 1), (1, 1, 4), 40)
    assert len(chains) == 9
    assert sorted(c.kind for c in chains) == ["L"] * 3 + ["R"] * 6
    assert len(_cover_matches((2, 2, 1), (1, 1, 2), 20)) == 2


def test_chain_descriptors_are_chains():
    for c in chain_cover((3, 2, 1), [(1, 1, 3)]):
        pts = list(c.region().clip(6).points())
        assert all(leq(a, b) or leq(b, a) for a, b in itertools.combinations(pts, 2))


def test_chain_cover_rejects_malformed_input():
    with pytest.raises(PreconditionError):
        chain_cover((1, 3, 1), [(1, 1, 4)])
    with pytest.raises(PreconditionError):
        chain_cover((2, 3, 1), [(1, 2, 4)])
    with pytest.raises(PreconditionError):
        chain_cover((2, 3, 2), [(1, 1, 4)])


bounded = st.integers(1, 20)


@st.composite
def boxes(draw, n=2):
    lo = [draw(bounded) for _ in range(n)]
    hi = [draw(st.one_of(st.just(UNBOUNDED), st.integers(l, 20))) for l in lo]
    return Box(tuple(lo), tuple(hi))


@st.composite
def regions(draw, n=2):
    return RegionSet.from_boxes(n, draw(st.lists(boxes(n), max_size=3)))


def _mask(r, M=25):
    grid = itertools.product(range(1, M + 1), repeat=r.dim)
    return np.array([p in r for p in grid])


@settings(max_examples=60, deadline=None)
@given(regions(), regions())
def test_region_algebra_matches_naive_sets(a, b):
    ma, mb = _mask(a), _mask(b)
    assert np.array_equal(_mask(a & b), ma & mb)
    assert np.array_equal(_mask(a | b), ma | mb)
    assert np.array_equal(_mask(a - b), ma & ~mb)
    assert np.array_equal(_mask(~a), ~ma)
    assert (a | b) == (b | a)
    assert ~~a == a


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(*[st.integers(1, 4)] * 3).filter(lambda p: p != (1, 1, 1)),
                min_size=1, max_size=6))
def test_upset_cofinite_criterion_matches_region_algebra(points):
    assert upset_union_cofinite(points) == upset_union_complement(points).is_finite()
