import itertools

import pytest

from conftest import brute_modal_rows
from filterlogic.enumeration import (
    BOUNDS, BoundExceeded, canonical_code, census_lattices, census_semilattices,
    enumerate_frames, enumerate_posets, modal_relations, natural_posets,
)
from filterlogic.order import Poset, meet_structure, NoMeet


def brute_orders(n):
    """Order codes of every partial order on n labeled points, from raw matrices."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bitsel in range(1 << len(off)):
        M = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(off):
            if bitsel >> k & 1:
                M[i][j] = True
        if any(M[i][j] and M[j][i] for i, j in off):
            continue
        if any(M[i][j] and M[j][k] and not M[i][k] for i in range(n) for j in range(n) for k in range(n)):
            continue
        out.append(sum(1 << (i * n + j) for i in range(n) for j in range(n) if M[i][j]))
    return sorted(out)


def code(up):
    n = len(up)
    return sum(1 << (i * n + j) for i in range(n) for j in range(n) if up[i] >> j & 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_labeled_posets_match_brute_force(n):
    assert [code(u) for u in enumerate_posets(n)] == brute_orders(n)


def test_natural_poset_counts():
    assert [len(natural_posets(n)) for n in range(1, 7)] == [1, 2, 7, 40, 357, 4824]


def test_unlabeled_poset_counts():
    assert [len(enumerate_posets(n, up_to_iso=True)) for n in range(1, 6)] == [1, 2, 5, 16, 63]


@pytest.mark.parametrize("n", range(1, 5))
def test_labeled_semilattices_match_brute_force(n):
    def is_sl(c):
        up = tuple(sum(1 << j for j in range(n) if c >> (i * n + j) & 1) for i in range(n))
        try:
            meet_structure(Poset(tuple(map(str, range(n))), up))
            return True
        except NoMeet:
            return False
    want = [c for c in brute_orders(n) if is_sl(c)]
    assert [code(sl.poset.up) for sl in enumerate_frames(n, "semilattice")] == want


def test_iso_counts_against_census():
    assert [len(enumerate_frames(n, "lattice", True)) for n in range(1, 7)] == \
        [census_lattices(n) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]
    assert [len(enumerate_frames(n, "semilattice", True)) for n in range(1, 6)] == \
        [census_semilattices(n) for n in range(1, 6)]


def test_semilattices_are_lattices_minus_top():
    # a finite meet-semilattice plus a new top is a lattice, and conversely
    assert [len(enumerate_frames(n, "semilattice", True)) for n in range(1, 6)] == \
        [len(enumerate_frames(n + 1, "lattice", True)) for n in range(1, 6)]


def test_labeled_counts_are_orbit_sums():
    from math import factorial
    from filterlogic.enumeration import _automorphisms
    for n in range(1, 6):
        reps = enumerate_posets(n, "semilattice", up_to_iso=True)
        total = sum(factorial(n) // len(_automorphisms(u)) for u in reps)
        assert total == len(enumerate_posets(n, "semilattice"))


def test_canonical_code_is_invariant():
    for up in enumerate_posets(4, "semilattice"):
        assert canonical_code(up) == min(code(u) for u in enumerate_posets(4, "semilattice")
                                         if canonical_code(u) == canonical_code(up))


def test_chain2_modal_relations_by_16_sweep(chain2):
    good = []
    for c in range(16):
        rows = (c & 3, c >> 2 & 3)
        if brute_modal_rows(chain2, rows):
            good.append(rows)
    assert [tuple(r) for r in modal_relations(chain2).tolist()] == good


def test_modal_labeled_n3_brute_force():
    n = 3
    count = 0
    for sl in enumerate_frames(n, "semilattice"):
        for c in range(1 << (n * n)):
            rows = tuple(c >> (i * n) & 7 for i in range(n))
            count += brute_modal_rows(sl, rows)
    assert count == len(enumerate_frames(n, "modal")) == 498


def test_modal_counts():
    assert [len(enumerate_frames(n, "modal")) for n in (1, 2, 3)] == [1, 12, 498]
    assert [len(enumerate_frames(n, "modal", True)) for n in (1, 2, 3)] == [1, 6, 86]


def test_modal_iso_dedupe_by_brute_force():
    # canonical form of a frame: least (order code, relation code) over all relabelings
    n = 3
    seen = set()
    for fr in enumerate_frames(n, "modal"):
        best = None
        for p in itertools.permutations(range(n)):
            oc = sum(1 << (p[i] * n + p[j]) for i in range(n) for j in range(n) if fr.sl.leq(i, j))
            rc = sum(1 << (p[i] * n + p[j]) for i, j in fr.pairs())
            best = min(best or (oc, rc), (oc, rc))
        seen.add(best)
    assert len(seen) == len(enumerate_frames(n, "modal", True))


def test_deterministic_order():
    a = [(f.sl.poset.up, f.rows) for f in enumerate_frames(3, "modal")]
    b = [(f.sl.poset.up, f.rows) for f in enumerate_frames(3, "modal")]
    assert a == b


def test_bounds():
    with pytest.raises(BoundExceeded):
        enumerate_frames(BOUNDS["modal"] + 1, "modal")
    with pytest.raises(BoundExceeded):
        enumerate_frames(BOUNDS["lattice"] + 1, "lattice")
    with pytest.raises(ValueError):
        enumerate_frames(2, "tree")
