"""Entailment in the free bounded lattice, derivation checking, countermodel search."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .enumeration import BOUNDS, BoundExceeded, enumerate_frames
from .semantics import frame_validity
from .syntax import (
    And, Bot, Box, ConsequencePair, Dia, Or, Prop, Top, TOP, BOT, is_positive,
    parse_pair, render_pair,
)

__all__ = [
    "ModalNotSupported", "UnknownRule", "ShapeMismatch", "Derivation", "RULES",
    "whitman_decide", "whitman_derivation", "check_derivation",
    "countermodel_search", "Countermodel", "some_val_derivations",
]


class ModalNotSupported(ValueError):
    pass


class UnknownRule(ValueError):
    def __init__(self, rule, path):
        super().__init__(f"unknown rule {rule!r} at node {path}")
        self.rule, self.path = rule, path


class ShapeMismatch(ValueError):
    def __init__(self, path, why):
        super().__init__(f"node {path}: {why}")
        self.path, self.why = path, why


def _meetands(s):
    return (s.l, s.r) if isinstance(s, And) else ()


def _joinands(t):
    return (t.l, t.r) if isinstance(t, Or) else ()


def whitman_decide(pair: ConsequencePair) -> bool:
    """Does ``lhs <= rhs`` hold in the free bounded lattice?"""
    if not is_positive(pair):
        raise ModalNotSupported("whitman_decide handles modality-free pairs only")
    memo = {}

    def leq(s, t):
        key = (s, t)
        if key in memo:
            return memo[key]
        if isinstance(s, Bot) or isinstance(t, Top):
            r = True
        elif isinstance(s, Or):
            r = leq(s.l, t) and leq(s.r, t)
        elif isinstance(t, And):
            r = leq(s, t.l) and leq(s, t.r)
        elif isinstance(s, Prop) and isinstance(t, Prop):
            r = s == t
        else:
            r = any(leq(x, t) for x in _meetands(s)) or any(leq(s, y) for y in _joinands(t))
        memo[key] = r
        return r

    return leq(pair.lhs, pair.rhs)


@dataclass(frozen=True)
class Derivation:
    conclusion: ConsequencePair
    rule: str
    premises: tuple = ()

    def to_json(self) -> dict:
        return {"conclusion": render_pair(self.conclusion), "rule": self.rule,
                "premises": [p.to_json() for p in self.premises]}

    @classmethod
    def from_json(cls, d) -> "Derivation":
        if isinstance(d, str):
            d = json.loads(d)
        return cls(parse_pair(d["conclusion"]), d["rule"],
                   tuple(cls.from_json(p) for p in d.get("premises", [])))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


def _cp(l, r):
    return ConsequencePair(l, r)


def whitman_derivation(pair: ConsequencePair):
    """A derivation of ``pair`` following the decision recursion, or None."""
    if not is_positive(pair):
        raise ModalNotSupported("whitman_derivation handles modality-free pairs only")
    memo = {}

    def d(s, t):
        key = (s, t)
        if key in memo:
            return memo[key]
        memo[key] = None
        c = _cp(s, t)
        out = None
        if isinstance(s, Bot):
            out = Derivation(c, "bot")
        elif isinstance(t, Top):
            out = Derivation(c, "top")
        elif isinstance(s, Or):
            a, b = d(s.l, t), d(s.r, t)
            out = Derivation(c, "disj-elim", (a, b)) if a and b else None
        elif isinstance(t, And):
            a, b = d(s, t.l), d(s, t.r)
            out = Derivation(c, "conj-intro", (a, b)) if a and b else None
        elif isinstance(s, Prop) and isinstance(t, Prop):
            out = Derivation(c, "refl") if s == t else None
        else:
            for x, rule in zip(_meetands(s), ("conj-elim-left", "conj-elim-right")):
                sub = d(x, t)
                if sub:
                    out = Derivation(c, "trans", (Derivation(_cp(s, x), rule), sub))
                    break
            if out is None:
                for y, rule in zip(_joinands(t), ("disj-intro-left", "disj-intro-right")):
                    sub = d(s, y)
                    if sub:
                        out = Derivation(c, "trans", (sub, Derivation(_cp(y, t), rule)))
                        break
        memo[key] = out
        return out

    return d(pair.lhs, pair.rhs)


def _axiom(test):
    return (0, test)


RULES = {
    # base logic
    "top": _axiom(lambda c: isinstance(c.rhs, Top)),
    "bot": _axiom(lambda c: isinstance(c.lhs, Bot)),
    "refl": _axiom(lambda c: c.lhs == c.rhs),
    "trans": (2, lambda c, a, b: a.lhs == c.lhs and a.rhs == b.lhs and b.rhs == c.rhs),
    "conj-elim-left": _axiom(lambda c: isinstance(c.lhs, And) and c.lhs.l == c.rhs),
    "conj-elim-right": _axiom(lambda c: isinstance(c.lhs, And) and c.lhs.r == c.rhs),
    "conj-intro": (2, lambda c, a, b: isinstance(c.rhs, And) and a.lhs == b.lhs == c.lhs
                   and a.rhs == c.rhs.l and b.rhs == c.rhs.r),
    "disj-intro-left": _axiom(lambda c: isinstance(c.rhs, Or) and c.rhs.l == c.lhs),
    "disj-intro-right": _axiom(lambda c: isinstance(c.rhs, Or) and c.rhs.r == c.lhs),
    "disj-elim": (2, lambda c, a, b: isinstance(c.lhs, Or) and a.rhs == b.rhs == c.rhs
                  and a.lhs == c.lhs.l and b.lhs == c.lhs.r),
    # modal logic
    "box-top": _axiom(lambda c: c == _cp(TOP, Box(TOP))),
    "dia-top": _axiom(lambda c: c == _cp(TOP, Dia(TOP))),
    "dia-bot": _axiom(lambda c: c == _cp(Dia(BOT), BOT)),
    "becker-box": (1, lambda c, a: isinstance(c.lhs, Box) and isinstance(c.rhs, Box)
                   and a == _cp(c.lhs.child, c.rhs.child)),
    "becker-dia": (1, lambda c, a: isinstance(c.lhs, Dia) and isinstance(c.rhs, Dia)
                   and a == _cp(c.lhs.child, c.rhs.child)),
    "box-linearity": _axiom(lambda c: isinstance(c.lhs, And) and isinstance(c.lhs.l, Box)
                            and isinstance(c.lhs.r, Box)
                            and c.rhs == Box(And(c.lhs.l.child, c.lhs.r.child))),
    "duality": _axiom(lambda c: isinstance(c.lhs, And) and isinstance(c.lhs.l, Dia)
                      and isinstance(c.lhs.r, Box)
                      and c.rhs == Dia(And(c.lhs.l.child, c.lhs.r.child))),
}


def check_derivation(d: Derivation, path: str = "0") -> bool:
    """Verify every node against its rule; raises on the first bad node."""
    if d.rule not in RULES:
        raise UnknownRule(d.rule, path)
    arity, test = RULES[d.rule]
    if len(d.premises) != arity:
        raise ShapeMismatch(path, f"rule {d.rule} takes {arity} premises, got {len(d.premises)}")
    for i, p in enumerate(d.premises):
        check_derivation(p, f"{path}.{i}")
    if not test(d.conclusion, *(p.conclusion for p in d.premises)):
        raise ShapeMismatch(path, f"conclusion {render_pair(d.conclusion)} does not instantiate {d.rule}")
    return True


def some_val_derivations() -> list[Derivation]:
    """Derivations of the modal validities listed for every modal L-frame."""
    p, q = Prop("p"), Prop("q")
    D = Derivation
    return [
        D(_cp(TOP, Box(TOP)), "box-top"),
        D(_cp(TOP, Dia(TOP)), "dia-top"),
        D(_cp(Dia(BOT), BOT), "dia-bot"),
        D(_cp(Box(And(p, q)), And(Box(p), Box(q))), "conj-intro", (
            D(_cp(Box(And(p, q)), Box(p)), "becker-box", (D(_cp(And(p, q), p), "conj-elim-left"),)),
            D(_cp(Box(And(p, q)), Box(q)), "becker-box", (D(_cp(And(p, q), q), "conj-elim-right"),)),
        )),
        D(_cp(Dia(p), Dia(Or(p, q))), "becker-dia", (D(_cp(p, Or(p, q)), "disj-intro-left"),)),
        D(_cp(And(Box(p), Box(q)), Box(And(p, q))), "box-linearity"),
        D(_cp(And(Dia(p), Box(q)), Dia(And(p, q))), "duality"),
    ]


@dataclass(frozen=True)
class Countermodel:
    frame: object
    valuation: dict
    state: int
    n: int


def countermodel_search(pair: ConsequencePair, max_n: int, modal: bool | None = None,
                        vclass: str = "all"):
    """First frame (by size, then canonical order) falsifying ``pair``, or None.

    Frames are taken up to isomorphism; validity does not depend on labels.
    """
    if modal is None:
        modal = not is_positive(pair)
    kind = "modal" if modal else "semilattice"
    if max_n > BOUNDS[kind]:
        raise BoundExceeded(f"max_n={max_n} exceeds the {kind} bound {BOUNDS[kind]}")
    for n in range(1, max_n + 1):
        for fr in enumerate_frames(n, kind, up_to_iso=True):
            if modal and vclass == "principal" and not fr.report.principal_ok:
                continue
            v = frame_validity(fr, pair, vclass)
            if not v.valid:
                return Countermodel(fr, v.witness.valuation, v.witness.state, n)
    return None
