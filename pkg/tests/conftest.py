import itertools

import pytest

from filterlogic.order import meet_structure, validate_poset


def chain(n):
    labs = [str(i) for i in range(n)]
    return meet_structure(validate_poset(labs, [(labs[i], labs[i + 1]) for i in range(n - 1)]))


@pytest.fixture
def m3():
    return meet_structure(validate_poset(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]))


@pytest.fixture
def vee():
    # 0 below a and b, no top: the V-shaped semilattice
    return meet_structure(validate_poset(["0", "a", "b"], [("0", "a"), ("0", "b")]))


@pytest.fixture
def chain2():
    return chain(2)


def subsets(n):
    return range(1 << n)


def brute_filters(sl):
    """Filters straight from the definition, over plain index sets."""
    out = []
    for m in subsets(sl.n):
        s = {i for i in range(sl.n) if m >> i & 1}
        up = all(j in s for i in s for j in range(sl.n) if sl.leq(i, j))
        mc = all(sl.meet[i][j] in s for i, j in itertools.product(s, s))
        if up and mc:
            out.append(m)
    return out


def brute_modal_rows(sl, rows):
    """Conditions (1)-(5) of a modal L-frame read literally."""
    n = sl.n
    R = lambda a, b: rows[a] >> b & 1
    le = sl.leq
    X = range(n)
    c1 = all(any(R(x, w) and le(w, z) for w in X) for x in X for y in X if le(x, y) for z in X if R(y, z))
    c2 = all(any(R(y, v) and le(w, v) for v in X) for x in X for y in X if le(x, y) for w in X if R(x, w))
    c3 = all(any(R(x, v) and R(y, w) and le(sl.meet[v][w], z) for v in X for w in X)
             for x in X for y in X for z in X if R(sl.meet[x][y], z))
    c4 = all(R(sl.meet[x][y], sl.meet[v][w]) for x in X for y in X for v in X for w in X
             if R(x, v) and R(y, w))
    c5 = all(any(R(x, y) for y in X) for x in X)
    return c1 and c2 and c3 and c4 and c5


# criterion lines collected by test_acceptance, echoed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
