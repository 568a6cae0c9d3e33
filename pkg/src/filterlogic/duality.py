"""Finite dualities: dual frames of (modal) lattices, the maps theta and eta,
filter and double-filter completions, and the relation R_A.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .order import (
    BoundedLattice, MeetSemilattice, Poset, all_filters, bits, complex_algebra,
    meet_structure,
)
from .semantics import (
    FrameConditionViolated, ModalLattice, ModalLFrame, box_dia, valuation_space,
)

__all__ = [
    "InvariantViolation", "DualityResult", "IsoReport", "Completion",
    "dual_frame", "double_dual_check", "frame_double_dual_check",
    "filter_completion", "f2_completion", "modal_complex_algebra", "modal_dual",
    "modal_round_trip", "lattice_iso_report", "lattice_from_table", "is_tight",
    "clopen_filters", "closed_filters", "saturated_filters",
]


class InvariantViolation(ValueError):
    def __init__(self, witness):
        super().__init__(f"invariant fails: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class DualityResult:
    """``filters[i]`` is the filter of A (mask over A) that is dual point ``i``."""

    dual: MeetSemilattice
    filters: tuple
    theta: tuple            # A element -> mask over the dual carrier
    modal: tuple | None = None


@dataclass(frozen=True)
class IsoReport:
    is_iso: bool
    map: tuple
    witness: str | None = None


@dataclass(frozen=True)
class Completion:
    lattice: BoundedLattice
    embed: tuple
    kind: str
    sets: tuple = ()        # the filters making up the completion, as masks


def _sl_from_sets(masks: Sequence[int], labels) -> MeetSemilattice:
    up = []
    for a in masks:
        u = 0
        for k, b in enumerate(masks):
            if a & ~b == 0:
                u |= 1 << k
        up.append(u)
    return meet_structure(Poset(tuple(labels), tuple(up)))


def lattice_from_table(labels, leq, meet, join) -> BoundedLattice:
    """Assemble a BoundedLattice from an order predicate and operation tables."""
    n = len(labels)
    up = tuple(sum(1 << j for j in range(n) if leq(i, j)) for i in range(n))
    p = Poset(tuple(labels), up)
    top = next(i for i in range(n) if up[i] == 1 << i)
    bottom = next(i for i in range(n) if up[i] == (1 << n) - 1)
    return BoundedLattice(MeetSemilattice(p, tuple(map(tuple, meet))), tuple(map(tuple, join)), top, bottom)


# On a finite carrier the topology generated by the theta-images is discrete,
# so every filter is clopen, closed and saturated, and every nonempty filter is
# principal.  The three families therefore coincide with all filters; the names
# exist so code written against the topological vocabulary has a home.
clopen_filters = all_filters
closed_filters = all_filters
saturated_filters = all_filters


def dual_frame(a: BoundedLattice) -> DualityResult:
    """Nonempty proper filters of ``a`` ordered by inclusion, with theta."""
    fs = [f.mask for f in all_filters(a.sl) if f.mask and f.mask != a.sl.full]
    labels = []
    for m in fs:
        g = a.sl.meet_all(m)
        labels.append("^" + str(a.labels[g]))
    dual = _sl_from_sets(fs, labels)
    theta = tuple(sum(1 << i for i, m in enumerate(fs) if m >> x & 1) for x in range(a.n))
    return DualityResult(dual, tuple(fs), theta)


def lattice_iso_report(f: Sequence[int], L1: BoundedLattice, L2: BoundedLattice) -> IsoReport:
    """Is ``f`` a bijective bounded-lattice homomorphism ``L1 -> L2``?"""
    f = tuple(f)
    if L1.n != L2.n:
        return IsoReport(False, f, f"sizes differ: {L1.n} vs {L2.n}")
    if len(set(f)) != len(f):
        dup = next(x for x in range(len(f)) if f.index(f[x]) != x)
        return IsoReport(False, f, f"collision at element {dup}")
    if f[L1.top] != L2.top or f[L1.bottom] != L2.bottom:
        return IsoReport(False, f, "bounds not preserved")
    for x in range(L1.n):
        for y in range(L1.n):
            if f[L1.meet[x][y]] != L2.meet[f[x]][f[y]]:
                return IsoReport(False, f, f"meet of ({x},{y}) not preserved")
            if f[L1.join[x][y]] != L2.join[f[x]][f[y]]:
                return IsoReport(False, f, f"join of ({x},{y}) not preserved")
            if L1.leq(x, y) != L2.leq(f[x], f[y]):
                return IsoReport(False, f, f"order of ({x},{y}) not reflected")
    return IsoReport(True, f)


def double_dual_check(a: BoundedLattice) -> IsoReport:
    dr = dual_frame(a)
    ca = complex_algebra(dr.dual)
    idx = ca.index
    fmap = []
    for x in range(a.n):
        t = dr.theta[x]
        if t not in idx:
            return IsoReport(False, tuple(fmap), f"theta({a.labels[x]}) is not a filter")
        fmap.append(idx[t])
    rep = lattice_iso_report(fmap, a, ca.lattice)
    if not rep.is_iso:
        return rep
    if len(ca.filters) != a.n:
        return IsoReport(False, tuple(fmap), "some filter of the dual is missed")
    dual = dr.dual
    for x in range(a.n):
        for y in range(a.n):
            if dr.theta[a.join[x][y]] != dual.join2(dr.theta[x], dr.theta[y]):
                return IsoReport(False, tuple(fmap), f"theta(join) != filter join at ({x},{y})")
            if dr.theta[a.meet[x][y]] != dr.theta[x] & dr.theta[y]:
                return IsoReport(False, tuple(fmap), f"theta(meet) != intersection at ({x},{y})")
    return rep


def frame_double_dual_check(sl: MeetSemilattice) -> IsoReport:
    """eta : X -> nonempty proper filters of the complex algebra, x -> {a : x in a}."""
    ca = complex_algebra(sl)
    dr = dual_frame(ca.lattice)
    pos = {m: i for i, m in enumerate(dr.filters)}
    eta = []
    for x in range(sl.n):
        e = sum(1 << k for k, m in enumerate(ca.filters) if m >> x & 1)
        if e not in pos:
            return IsoReport(False, tuple(eta), f"eta({sl.labels[x]}) is not a nonempty proper filter")
        eta.append(pos[e])
    if len(set(eta)) != sl.n:
        return IsoReport(False, tuple(eta), "eta is not injective")
    if len(dr.filters) != sl.n:
        return IsoReport(False, tuple(eta), "some dual point is missed")
    d = dr.dual
    for x in range(sl.n):
        for y in range(sl.n):
            if sl.leq(x, y) != d.leq(eta[x], eta[y]):
                return IsoReport(False, tuple(eta), f"order of ({x},{y}) not preserved")
            if eta[sl.meet[x][y]] != d.meet[eta[x]][eta[y]]:
                return IsoReport(False, tuple(eta), f"meet of ({x},{y}) not preserved")
    return IsoReport(True, tuple(eta))


def filter_completion(a: BoundedLattice) -> Completion:
    """Nonempty filters under reverse inclusion; meet is filter join, join is intersection."""
    sl = a.sl
    fs = [f.mask for f in all_filters(sl) if f.mask]
    idx = {m: k for k, m in enumerate(fs)}
    labels = ["{" + ",".join(str(a.labels[i]) for i in bits(m)) + "}" for m in fs]
    meet = [[idx[sl.join2(x, y)] for y in fs] for x in fs]
    join = [[idx[x & y] for y in fs] for x in fs]
    lat = lattice_from_table(labels, lambda i, j: fs[j] & ~fs[i] == 0, meet, join)
    embed = tuple(idx[sl.principal(x)] for x in range(a.n))
    return Completion(lat, embed, "FilterCompletion", tuple(fs))


def f2_completion(a: BoundedLattice) -> Completion:
    dr = dual_frame(a)
    ca = complex_algebra(dr.dual)
    embed = tuple(ca.index[t] for t in dr.theta)
    return Completion(ca.lattice, embed, "F2Completion", ca.filters)


def modal_complex_algebra(frame: ModalLFrame, vclass: str = "all") -> ModalLattice:
    principal = vclass in ("principal", "PrincipalFilters")
    frame.require(principal=principal)
    masks = valuation_space(frame.sl, vclass)
    ca = complex_algebra(frame.sl, masks)
    bx, dm = [], []
    for m in ca.filters:
        b, d = box_dia(frame, m)
        if b not in ca.index or d not in ca.index:
            raise FrameConditionViolated(frame.report, "closure of the filter family under box/dia")
        bx.append(ca.index[b])
        dm.append(ca.index[d])
    return ModalLattice(ca.lattice, tuple(bx), tuple(dm))


def modal_dual(m: ModalLattice):
    """Dual modal frame with ``p R_A q`` iff ``box^-1(p) <= q <= dia^-1(p)``."""
    bad = m.violations()
    if bad:
        raise InvariantViolation(bad[0])
    a = m.lat
    dr = dual_frame(a)
    fs = dr.filters

    def pre(table, p):
        return sum(1 << x for x in range(a.n) if p >> table[x] & 1)

    rows = []
    for p in fs:
        bi, di = pre(m.box, p), pre(m.dia, p)
        rows.append(sum(1 << j for j, q in enumerate(fs) if bi & ~q == 0 and q & ~di == 0))
    frame = ModalLFrame(dr.dual, tuple(rows))
    for x in range(a.n):
        b, d = box_dia(frame, dr.theta[x])
        if b != dr.theta[m.box[x]]:
            raise InvariantViolation(f"[R_A]theta({a.labels[x]}) != theta(box {a.labels[x]})")
        if d != dr.theta[m.dia[x]]:
            raise InvariantViolation(f"<R_A>theta({a.labels[x]}) != theta(dia {a.labels[x]})")
    dr = DualityResult(dr.dual, dr.filters, dr.theta, tuple(rows))
    return frame, dr


def modal_round_trip(frame: ModalLFrame, vclass: str = "all") -> IsoReport:
    """eta maps ``frame`` onto the dual of its modal complex algebra, preserving order and R."""
    ml = modal_complex_algebra(frame, vclass)
    masks = valuation_space(frame.sl, vclass)
    g, dr = modal_dual(ml)
    if not g.report.ok:
        return IsoReport(False, (), f"dual fails modal frame conditions {g.report.failures()}")
    if not g.report.principal_ok:
        return IsoReport(False, (), f"dual fails principal conditions {g.report.failures(True)}")
    pos = {f: i for i, f in enumerate(dr.filters)}
    eta = []
    for x in range(frame.n):
        e = sum(1 << k for k, f in enumerate(masks) if f >> x & 1)
        if e not in pos:
            return IsoReport(False, tuple(eta), f"eta({x}) is not a dual point")
        eta.append(pos[e])
    if len(set(eta)) != frame.n or len(dr.filters) != frame.n:
        return IsoReport(False, tuple(eta), "eta is not a bijection")
    for x in range(frame.n):
        for y in range(frame.n):
            if frame.sl.leq(x, y) != g.sl.leq(eta[x], eta[y]):
                return IsoReport(False, tuple(eta), f"order of ({x},{y}) not preserved")
            if frame.related(x, y) != g.related(eta[x], eta[y]):
                return IsoReport(False, tuple(eta), f"relation at ({x},{y}) not preserved")
    return IsoReport(True, tuple(eta))


def is_tight(frame: ModalLFrame, vclass: str = "all") -> bool:
    """``xRy`` iff for every filter a: x in [R]a implies y in a, and y in a implies x in <R>a.

    This is what the dual of a modal lattice always satisfies; frames without
    it cannot be recovered from their complex algebra.
    """
    tabs = [(a, *box_dia(frame, a)) for a in valuation_space(frame.sl, vclass)]
    for x in range(frame.n):
        for y in range(frame.n):
            t = all((not b >> x & 1 or a >> y & 1) and (not a >> y & 1 or d >> x & 1)
                    for a, b, d in tabs)
            if t != frame.related(x, y):
                return False
    return True
