"""Truth sets in (modal) L-models, lattice evaluation, and frame validity.

Truth sets are bit masks over the frame carrier.  A relation ``R`` is kept as
a tuple of row masks: bit ``j`` of ``rows[i]`` is set iff ``i R j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Mapping

import numpy as np

from .order import (
    BoundedLattice, MeetSemilattice, NotTotal, bits, is_filter, is_L_morphism,
    all_filters, to_mask,
)
from .syntax import (
    And, Bot, Box, ConsequencePair, Formula, Or, Prop, Top, letters, is_positive,
)

__all__ = [
    "MissingLetter", "FrameConditionViolated", "Infeasible", "ModalOnPlainLattice",
    "ConditionReport", "ModalLFrame", "LModel", "ModalLModel", "ModalLattice",
    "Witness", "Verdict",
    "relation_rows", "modal_frame_check", "eval_model", "eval_frame",
    "eval_in_lattice", "frame_validity", "valuation_space", "box_dia",
    "is_bounded_L_morphism", "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**7


class MissingLetter(KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no value for letter {self.name!r}"


class FrameConditionViolated(ValueError):
    def __init__(self, report, what="modal frame conditions"):
        super().__init__(f"{what} fail: {report.failures(principal='principal' in what)}")
        self.report = report


class Infeasible(RuntimeError):
    pass


class ModalOnPlainLattice(TypeError):
    pass


def relation_rows(n: int, R) -> tuple:
    """Normalize a relation given as pairs, a boolean matrix, or row masks."""
    if isinstance(R, np.ndarray):
        if R.shape != (n, n):
            raise ValueError(f"relation matrix must be {n}x{n}")
        return tuple(int(sum(1 << j for j in range(n) if R[i, j])) for i in range(n))
    R = list(R)
    if len(R) == n and all(isinstance(r, (int, np.integer)) for r in R):
        rows = tuple(int(r) for r in R)
    else:
        rows = [0] * n
        for i, j in R:
            rows[i] |= 1 << j
        rows = tuple(rows)
    if any(r >> n for r in rows):
        raise ValueError("relation refers to a state outside the carrier")
    return rows


@dataclass(frozen=True)
class ConditionReport:
    """``conditions[k] = (ok, counterexample)`` for conditions 1..5; ``principal`` for 0..5."""

    conditions: dict
    principal: dict

    @property
    def ok(self) -> bool:
        return all(v[0] for v in self.conditions.values())

    @property
    def principal_ok(self) -> bool:
        return all(v[0] for v in self.principal.values())

    def failures(self, principal=False):
        src = self.principal if principal else self.conditions
        return {k: v[1] for k, v in src.items() if not v[0]}


def _first(gen):
    for w in gen:
        return w
    return None


def modal_frame_check(sl: MeetSemilattice, R) -> ConditionReport:
    n = sl.n
    rows = relation_rows(n, R)
    up, down = sl.poset.up, sl.poset.down
    mt = sl.meet

    c1 = _first((x, y, z) for x in range(n) for y in bits(up[x]) for z in bits(rows[y])
                if not rows[x] & down[z])
    c2 = _first((x, y, w) for x in range(n) for y in bits(up[x]) for w in bits(rows[x])
                if not rows[y] & up[w])
    c3 = _first((x, y, z) for x in range(n) for y in range(n) for z in bits(rows[mt[x][y]])
                if not sl.meetset(rows[x], rows[y]) & down[z])
    c4 = _first((x, y, v, w) for x in range(n) for y in range(n)
                for v in bits(rows[x]) for w in bits(rows[y])
                if not rows[mt[x][y]] >> mt[v][w] & 1)
    c5 = _first((x,) for x in range(n) if not rows[x])
    conds = {k: (w is None, w) for k, w in zip(range(1, 6), (c1, c2, c3, c4, c5))}

    # principal frame (0): nonempty meets always exist in a finite semilattice;
    # binary joins are required for pairs with a common upper bound
    c0 = _first((x, y) for x in range(n) for y in range(x + 1, n)
                if up[x] & up[y] and _least_of(sl, up[x] & up[y]) is None)
    p3 = p4 = None
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            m = idx[0]
            ms = rows[idx[0]]
            for i in idx[1:]:
                m = mt[m][i]
                ms = sl.meetset(ms, rows[i])
            target = rows[m]
            if p4 is None and ms & ~target:
                p4 = (idx, bits(ms & ~target)[0])
            if p3 is None:
                bad = target & ~sl.upclose(ms)
                if bad:
                    p3 = (idx, bits(bad)[0])
        if p3 is not None and p4 is not None:
            break
    principal = {0: (c0 is None, c0), 1: conds[1], 2: conds[2], 3: (p3 is None, p3),
                 4: (p4 is None, p4), 5: conds[5]}
    return ConditionReport(conds, principal)


def _least_of(sl, cand):
    for i in bits(cand):
        if sl.poset.up[i] & cand == cand:
            return i
    return None


@dataclass(frozen=True)
class ModalLFrame:
    sl: MeetSemilattice
    rows: tuple

    @classmethod
    def make(cls, sl: MeetSemilattice, R) -> "ModalLFrame":
        return cls(sl, relation_rows(sl.n, R))

    @property
    def n(self) -> int:
        return self.sl.n

    @cached_property
    def report(self) -> ConditionReport:
        return modal_frame_check(self.sl, self.rows)

    def related(self, i, j) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.rows[i])]

    def require(self, principal=False):
        if not self.report.ok:
            raise FrameConditionViolated(self.report)
        if principal and not self.report.principal_ok:
            raise FrameConditionViolated(self.report, "principal modal frame conditions")
        return self


def _valuation_masks(sl, valuation: Mapping) -> dict:
    out = {}
    for k, v in valuation.items():
        m = to_mask(v)
        if not is_filter(sl, m):
            raise ValueError(f"valuation of {k!r} is not a filter")
        out[k] = m
    return out


@dataclass(frozen=True)
class LModel:
    sl: MeetSemilattice
    valuation: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "valuation", _valuation_masks(self.sl, self.valuation))


@dataclass(frozen=True)
class ModalLModel:
    frame: ModalLFrame
    valuation: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "valuation", _valuation_masks(self.frame.sl, self.valuation))

    @property
    def sl(self):
        return self.frame.sl


def box_dia(frame: ModalLFrame, a) -> tuple[int, int]:
    """``([R]a, <R>a)`` as masks."""
    a = to_mask(a)
    bx = dm = 0
    for i, r in enumerate(frame.rows):
        if r & ~a == 0:
            bx |= 1 << i
        if r & a:
            dm |= 1 << i
    return bx, dm


def eval_frame(sl: MeetSemilattice, rows, val: Mapping[str, int], f: Formula) -> int:
    """Truth set of ``f`` with no precondition checks (``rows`` may be None)."""
    if isinstance(f, Prop):
        try:
            return val[f.name]
        except KeyError:
            raise MissingLetter(f.name) from None
    if isinstance(f, Top):
        return sl.full
    if isinstance(f, Bot):
        return 0
    if isinstance(f, And):
        return eval_frame(sl, rows, val, f.l) & eval_frame(sl, rows, val, f.r)
    if isinstance(f, Or):
        a = eval_frame(sl, rows, val, f.l)
        b = eval_frame(sl, rows, val, f.r)
        return a | b | sl.upclose(sl.meetset(a, b))
    if rows is None:
        raise TypeError("modal formula needs a relation")
    a = eval_frame(sl, rows, val, f.child)
    out = 0
    if isinstance(f, Box):
        for i, r in enumerate(rows):
            if r & ~a == 0:
                out |= 1 << i
    else:
        for i, r in enumerate(rows):
            if r & a:
                out |= 1 << i
    return out


def eval_model(m, f: Formula) -> int:
    """Truth set of ``f`` in an LModel or ModalLModel, as a bit mask."""
    if isinstance(m, ModalLModel):
        m.frame.require()
        return eval_frame(m.sl, m.frame.rows, m.valuation, f)
    if not is_positive(f):
        raise TypeError("modal formula evaluated in a model without a relation")
    return eval_frame(m.sl, None, m.valuation, f)


@dataclass(frozen=True)
class ModalLattice:
    lat: BoundedLattice
    box: tuple
    dia: tuple

    def violations(self) -> list[str]:
        """Failed defining equations, each with a witness; empty when valid."""
        l = self.lat
        mt, jn, bx, dm = l.meet, l.join, self.box, self.dia
        t, b = l.top, l.bottom
        out = []
        if bx[t] != t:
            out.append("box top = top")
        if dm[t] != t:
            out.append("dia top = top")
        if dm[b] != b:
            out.append("dia bot = bot")
        for x in range(l.n):
            for y in range(l.n):
                if bx[mt[x][y]] != mt[bx[x]][bx[y]]:
                    out.append(f"box({x} & {y}) = box {x} & box {y}")
                if not l.leq(dm[x], dm[jn[x][y]]):
                    out.append(f"dia {x} <= dia({x} | {y})")
                if not l.leq(mt[dm[x]][bx[y]], dm[mt[x][y]]):
                    out.append(f"dia {x} & box {y} <= dia({x} & {y})")
        return out


def eval_in_lattice(a, sigma: Mapping[str, int], f: Formula) -> int:
    lat = a.lat if isinstance(a, ModalLattice) else a
    if isinstance(f, Prop):
        try:
            return sigma[f.name]
        except KeyError:
            raise MissingLetter(f.name) from None
    if isinstance(f, Top):
        return lat.top
    if isinstance(f, Bot):
        return lat.bottom
    if isinstance(f, And):
        return lat.meet[eval_in_lattice(a, sigma, f.l)][eval_in_lattice(a, sigma, f.r)]
    if isinstance(f, Or):
        return lat.join[eval_in_lattice(a, sigma, f.l)][eval_in_lattice(a, sigma, f.r)]
    if not isinstance(a, ModalLattice):
        raise ModalOnPlainLattice("modal formula evaluated in a plain lattice")
    v = eval_in_lattice(a, sigma, f.child)
    return a.box[v] if isinstance(f, Box) else a.dia[v]


@dataclass(frozen=True)
class Witness:
    valuation: dict
    state: int
    side: str = "lhs-holds-rhs-fails"


@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: Witness | None = None
    checked: int = 0


def valuation_space(sl: MeetSemilattice, vclass: str = "all") -> list[int]:
    """Filter masks a letter may take, ascending."""
    fs = all_filters(sl)
    if vclass in ("all", "AllFilters"):
        return [f.mask for f in fs]
    if vclass in ("principal", "PrincipalFilters"):
        return [f.mask for f in fs if f.is_principal]
    raise ValueError(f"unknown valuation class {vclass!r}")


def _is_principal_class(vclass):
    return vclass in ("principal", "PrincipalFilters")


def frame_validity(frame, pair: ConsequencePair, vclass: str = "all",
                   budget: int = DEFAULT_BUDGET) -> Verdict:
    """Check ``[[lhs]] <= [[rhs]]`` under every valuation of the pair's letters.

    Valuations are visited lexicographically: letters in sorted order, the
    first letter most significant, each ranging over filter masks ascending.
    The reported state is the least index in ``[[lhs]] - [[rhs]]``.
    """
    if isinstance(frame, ModalLFrame):
        frame.require(principal=_is_principal_class(vclass))
        sl, rows = frame.sl, frame.rows
    else:
        if not is_positive(pair):
            raise TypeError("modal pair needs a modal L-frame")
        sl, rows = frame, None
    names = letters(pair)
    space = valuation_space(sl, vclass)
    cost = len(space) ** len(names) * max(sl.n, 1)
    if cost > budget:
        raise Infeasible(f"{len(space)}^{len(names)} valuations x {sl.n} states exceeds budget {budget}")
    count = 0
    for combo in product(space, repeat=len(names)):
        val = dict(zip(names, combo))
        count += 1
        bad = eval_frame(sl, rows, val, pair.lhs) & ~eval_frame(sl, rows, val, pair.rhs)
        if bad:
            return Verdict(False, Witness(val, bits(bad)[0]), count)
    return Verdict(True, None, count)


def is_bounded_L_morphism(f, F1: ModalLFrame, F2: ModalLFrame) -> bool:
    f = list(f)
    if len(f) != F1.n or any(not (0 <= v < F2.n) for v in f):
        raise NotTotal("map must send every state into the target frame")
    if not is_L_morphism(f, F1.sl, F2.sl):
        return False
    leq2 = F2.sl.leq
    for x in range(F1.n):
        for y in bits(F1.rows[x]):
            if not F2.related(f[x], f[y]):
                return False
        succ = bits(F1.rows[x])
        for z2 in bits(F2.rows[f[x]]):
            if not any(leq2(f[z], z2) for z in succ):
                return False
            if not any(leq2(z2, f[w]) for w in succ):
                return False
    return True
