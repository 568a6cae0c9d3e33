import itertools

import pytest

from conftest import brute_filters, chain
from filterlogic.duality import (
    InvariantViolation, double_dual_check, dual_frame, f2_completion, filter_completion,
    frame_double_dual_check, is_tight, lattice_iso_report, modal_complex_algebra,
    modal_dual, modal_round_trip,
)
from filterlogic.enumeration import enumerate_frames
from filterlogic.order import lattice_props, lattice_structure, validate_poset
from filterlogic.semantics import ModalLattice, ModalLFrame, box_dia

LATTICES_6 = [lattice_structure(sl.poset) for n in range(1, 7)
              for sl in enumerate_frames(n, "lattice", up_to_iso=True)]


def L(sl):
    return lattice_structure(sl.poset)


def iso_exists(A, B):
    if A.n != B.n:
        return False
    return any(lattice_iso_report(p, A, B).is_iso for p in itertools.permutations(range(B.n)))


def test_two_element_dual():
    dr = dual_frame(L(chain(2)))
    assert dr.dual.n == 1
    assert dr.theta == (0, 1)


def test_chain3_dual():
    dr = dual_frame(L(chain(3)))
    assert dr.filters == (0b100, 0b110)
    assert dr.dual.leq(0, 1) and not dr.dual.leq(1, 0)


def test_m3_dual(m3):
    dr = dual_frame(L(m3))
    assert sorted(dr.dual.labels) == ["^1", "^a", "^b", "^c"]
    # under inclusion up(1) = {1} is the least filter, so it is the bottom point
    assert dr.dual.bottom == dr.dual.labels.index("^1")
    assert dr.dual.top is None


@pytest.mark.parametrize("A", LATTICES_6, ids=lambda a: f"n{a.n}")
def test_double_dual(A):
    assert double_dual_check(A).is_iso


def test_double_dual_m3_join_is_filter_join(m3):
    A = L(m3)
    dr = dual_frame(A)
    assert dr.theta[A.join[1][2]] == dr.dual.join2(dr.theta[1], dr.theta[2]) == dr.dual.full


@pytest.mark.parametrize("n", range(1, 6))
def test_frame_double_dual(n):
    for sl in enumerate_frames(n, "semilattice", up_to_iso=True):
        assert frame_double_dual_check(sl).is_iso


def test_iso_report_witnesses(m3):
    A = L(m3)
    assert not lattice_iso_report([0, 0, 2, 3, 4], A, A).is_iso
    assert "collision" in lattice_iso_report([0, 0, 2, 3, 4], A, A).witness


def test_completions_coincide_finitely():
    for A in LATTICES_6:
        for c in (filter_completion(A), f2_completion(A)):
            assert lattice_iso_report(c.embed, A, c.lattice).is_iso
            assert lattice_props(c.lattice) == lattice_props(A)


def test_n5_completion_keeps_non_modularity():
    n5 = lattice_structure(validate_poset(
        ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")]))
    assert not lattice_props(n5).modular
    assert not lattice_props(f2_completion(n5).lattice).modular


def test_modal_complex_algebra_identity_on_chain3():
    fr = ModalLFrame.make(chain(3), [(0, 0), (1, 1), (2, 2)])
    ml = modal_complex_algebra(fr)
    assert ml.lat.n == 4
    assert ml.box == ml.dia == tuple(range(4))
    assert not ml.violations()


def test_modal_dual_single_point():
    A = L(chain(2))
    fr, dr = modal_dual(ModalLattice(A, (0, 1), (0, 1)))
    assert fr.n == 1 and fr.related(0, 0)


def test_modal_dual_rejects_bad_table():
    A = L(chain(2))
    with pytest.raises(InvariantViolation):
        modal_dual(ModalLattice(A, (0, 1), (1, 1)))


def test_chain2_round_trip(chain2):
    fr = ModalLFrame.make(chain2, [(0, 1), (1, 1)])
    ml = modal_complex_algebra(fr)
    assert not ml.violations()
    assert modal_round_trip(fr).is_iso


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dual_relation_satisfies_theta_equations(n):
    # modal_dual raises on failure, so a clean run is the check
    for fr in enumerate_frames(n, "modal"):
        g, dr = modal_dual(modal_complex_algebra(fr))
        assert g.report.ok and g.report.principal_ok


def test_non_tight_frame_is_not_recovered():
    # 0<1<2: no filter separates 0 and 1 under R, so R_A adds 0 R_A 1
    fr = ModalLFrame.make(chain(3), [(0, 0), (0, 2), (1, 2), (2, 2)])
    assert fr.report.ok
    assert not is_tight(fr)
    rep = modal_round_trip(fr)
    assert not rep.is_iso and rep.witness == "relation at (0,1) not preserved"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trip_exactly_on_tight_frames(n):
    for fr in enumerate_frames(n, "modal"):
        assert modal_round_trip(fr).is_iso == is_tight(fr)


def test_tightness_is_brute_force():
    for fr in enumerate_frames(2, "modal"):
        fs = brute_filters(fr.sl)
        want = all(
            fr.related(x, y) == all(
                (not box_dia(fr, a)[0] >> x & 1 or a >> y & 1)
                and (not a >> y & 1 or box_dia(fr, a)[1] >> x & 1) for a in fs)
            for x in range(fr.n) for y in range(fr.n))
        assert is_tight(fr) == want


def test_topological_families_coincide_finitely():
    from filterlogic.duality import clopen_filters, closed_filters, saturated_filters
    for sl in enumerate_frames(4, "semilattice", up_to_iso=True):
        fs = [f.mask for f in clopen_filters(sl)]
        assert fs == [f.mask for f in closed_filters(sl)] == [f.mask for f in saturated_filters(sl)]
        # every nonempty filter is the up-set of its meet
        assert all(m == 0 or sl.principal(sl.meet_all(m)) == m for m in fs)
