import pytest

from posetmap.pmap import cylinder_shift, from_parts, identity


def varpi(c2=2, c3=None):
    """Shift by -1 along the first axis on {x2 <= c2, x3 <= c3}."""
    return cylinder_shift(3, 0, (1, c2, c2 if c3 is None else c3), -1)


def bad_patch():
    base = identity(3)
    return from_parts(3, base.pieces, holes=[(2, 2, 2)], patch={(1, 1, 1): (2, 2, 2)})


@pytest.fixture
def w2():
    return varpi(2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
