import itertools

import pytest

from conftest import brute_filters, chain
from filterlogic.enumeration import enumerate_frames
from filterlogic.order import (
    AntisymmetryViolation, DuplicateLabel, Filter, NoJoin, NoMeet, NotTotal, OrderError,
    all_filters, bits, complex_algebra, filter_join, generated_filter, is_filter,
    is_L_morphism, lattice_props, lattice_structure, meet_structure, popcount,
    principal_filters, to_mask, validate_poset,
)


def test_bits_and_popcount():
    assert bits(0b10110) == [1, 2, 4]
    assert popcount(0b10110) == 3
    assert to_mask([0, 3]) == 0b1001


def test_validate_poset_closes_transitively():
    p = validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.leq(0, 2)
    assert not p.leq(2, 0)


def test_poset_errors():
    with pytest.raises(DuplicateLabel):
        validate_poset(["a", "a"], [])
    with pytest.raises(AntisymmetryViolation):
        validate_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(OrderError):
        validate_poset(["a"], [("a", "z")])


def test_no_meet_reported():
    # two minimal elements below a common top: no meet
    p = validate_poset(["a", "b", "1"], [("a", "1"), ("b", "1")])
    with pytest.raises(NoMeet):
        meet_structure(p)


def test_vee_is_semilattice_not_lattice(vee):
    assert vee.meet[1][2] == 0
    with pytest.raises((NoJoin, OrderError)):
        lattice_structure(vee.poset)


@pytest.mark.parametrize("n", range(1, 6))
def test_all_filters_match_definition(n):
    for sl in enumerate_frames(n, "semilattice"):
        assert [f.mask for f in all_filters(sl)] == brute_filters(sl)


def test_empty_set_is_a_filter(m3):
    assert is_filter(m3, 0)
    assert all_filters(m3)[0].mask == 0


def brute_generated(sl, seed):
    m = sl.full
    for f in brute_filters(sl):
        if seed & ~f == 0:
            m &= f
    return m


@pytest.mark.parametrize("n", range(1, 6))
def test_generated_filter_is_least(n):
    for sl in enumerate_frames(n, "semilattice", up_to_iso=True):
        for seed in range(1 << sl.n):
            assert generated_filter(sl, seed).mask == brute_generated(sl, seed)


@pytest.mark.parametrize("n", range(1, 6))
def test_join2_formula_matches_least_upper_filter(n):
    for sl in enumerate_frames(n, "semilattice", up_to_iso=True):
        fs = brute_filters(sl)
        for a, b in itertools.product(fs, fs):
            assert sl.join2(a, b) == brute_generated(sl, a | b)
            assert filter_join(sl, [a, b]).mask == sl.join2(a, b)


def test_vee_join_golden(vee):
    # up(a) join up(b) = {0, a, b}: the meet 0 enters
    a, b = vee.principal(1), vee.principal(2)
    assert vee.join2(a, b) == 0b111


def test_principal_filters_and_generators(m3):
    ps = principal_filters(m3)
    # one per element plus the empty filter
    assert len(ps) == m3.n + 1
    assert Filter(m3.principal(1), m3).generator == 1
    assert Filter(0, m3).generator is None


def test_m3_complex_algebra_is_m3(m3):
    ca = complex_algebra(m3)
    # filters of a finite lattice are principal or empty, so the algebra has n + 1 elements
    assert len(ca.filters) == 6
    props = lattice_props(lattice_structure(m3.poset))
    assert not props.distributive and props.modular


def test_chain_is_distributive():
    assert lattice_props(lattice_structure(chain(4).poset)).distributive


def test_complex_algebra_ops(m3):
    ca = complex_algebra(m3)
    L = ca.lattice
    for i, a in enumerate(ca.filters):
        for j, b in enumerate(ca.filters):
            assert ca.filters[L.meet[i][j]] == a & b
            assert ca.filters[L.join[i][j]] == m3.join2(a, b)


def test_identity_is_L_morphism(m3):
    assert is_L_morphism(list(range(m3.n)), m3, m3)
    with pytest.raises(NotTotal):
        is_L_morphism([0], m3, m3)
