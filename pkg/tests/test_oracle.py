import itertools

import pytest

from conftest import bad_patch, varpi
from posetmap.oracle import (
    brute_checks,
    cofinite_window,
    corrupt,
    disagreements,
    generate,
    materialize,
)
from posetmap.pmap import compose, equals, evaluate, identity, identity_off, unit, validate


def test_materialize_examples():
    t = materialize(identity(3), 3)
    assert len(t) == 27 and all(x == y for x, y in t.entries.items())
    assert len(materialize(varpi(2), 4)) == 60
    assert len(materialize(identity_off(3, [(2, 2, 2)]), 2)) == 7
    with pytest.raises(ValueError):
        materialize(identity(3), 0)


def test_bad_patch_caught_on_window():
    rep = brute_checks(materialize(bad_patch(), 4))
    assert not rep.monotone_on_window
    assert rep.witnesses["monotone"] == ((1, 1, 1), (1, 1, 2))
    assert rep.injective_on_window


def test_window_composition_matches_tables():
    a, b = varpi(2), compose(unit((1, 0, 2)), varpi(3))
    M = 9
    inner = M - 1
    ta, tb = materialize(a, M).entries, materialize(b, M).entries
    tab = materialize(compose(a, b), M).entries
    for x in itertools.product(range(1, inner + 1), repeat=3):
        y = ta.get(x)
        assert tab.get(x) == (None if y is None else tb.get(y))


def test_pointwise_match():
    w = varpi(2)
    rep = brute_checks(materialize(w, 6))
    assert rep.pointwise_match(w)
    assert not rep.pointwise_match(varpi(3))


def test_non_injective_witness():
    from posetmap.pmap import from_parts
    m = from_parts(3, identity(3).pieces, patch={(1, 2, 1): (1, 1, 1)})
    rep = brute_checks(materialize(m, 4))
    assert not rep.injective_on_window
    x, y = rep.witnesses["injective"]
    assert evaluate(m, x) == evaluate(m, y)


def test_generate_is_deterministic_and_valid():
    g = generate(0, 1)
    assert validate(g).valid
    assert generate(12345) == generate(12345)
    for s in range(40):
        assert validate(generate(s)).valid


def test_generate_is_diverse():
    reps = []
    for s in range(1000):
        g = generate(s)
        if not any(equals(g, r) for r in reps):
            reps.append(g)
        if len(reps) >= 100:
            break
    assert len(reps) >= 100


@pytest.mark.parametrize("seed", range(30))
def test_symbolic_and_window_verdicts_agree(seed):
    for alpha in (generate(seed), corrupt(generate(seed), seed)):
        rep = validate(alpha)
        assert disagreements(alpha, rep, rep.bound + 3) == []
        assert brute_checks(materialize(alpha, cofinite_window(alpha))).dom_cofinite_on_window \
            == rep.dom_cofinite


def test_corrupt_changes_the_map():
    a = generate(7)
    assert corrupt(a, 1) != a
    assert corrupt(a, 1) == corrupt(a, 1)
