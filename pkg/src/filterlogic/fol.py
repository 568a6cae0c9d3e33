"""First-order formulas over frames: AST, printer, parser, SMT-LIB export,
evaluation on finite structures, and a small simplifier.

Atoms read the order (``leq``), the modal relation (``r``), equality and unary
predicates ``P_name``.  ``ForallPred`` binds a predicate; it only appears in
second-order translations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Union

from .order import MeetSemilattice, all_filters
from .semantics import LModel, ModalLFrame, ModalLModel

__all__ = [
    "Leq", "Rel", "Eq", "Pred", "TrueF", "FalseF", "TRUE", "FALSE", "Not",
    "AndF", "OrF", "Implies", "Forall", "Exists", "ForallPred", "FOFormula",
    "conj", "disj", "forall", "exists", "free_vars", "bound_vars", "preds",
    "substitute_var", "render_fo", "parse_fo", "to_smt", "fo_eval",
    "compile_fo", "simplify", "UnboundVariable", "PredWithoutValuation",
    "FOSyntaxError", "Fresh", "has_shadowing",
]


@dataclass(frozen=True)
class Leq:
    a: str
    b: str


@dataclass(frozen=True)
class Rel:
    a: str
    b: str


@dataclass(frozen=True)
class Eq:
    a: str
    b: str


@dataclass(frozen=True)
class Pred:
    name: str
    var: str


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


TRUE = TrueF()
FALSE = FalseF()


@dataclass(frozen=True)
class Not:
    f: "FOFormula"


@dataclass(frozen=True)
class AndF:
    args: tuple


@dataclass(frozen=True)
class OrF:
    args: tuple


@dataclass(frozen=True)
class Implies:
    a: "FOFormula"
    b: "FOFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "FOFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "FOFormula"


@dataclass(frozen=True)
class ForallPred:
    name: str
    body: "FOFormula"


FOFormula = Union[Leq, Rel, Eq, Pred, TrueF, FalseF, Not, AndF, OrF, Implies,
                  Forall, Exists, ForallPred]
ATOMS = (Leq, Rel, Eq)


def conj(*fs) -> FOFormula:
    fs = tuple(fs)
    if not fs:
        return TRUE
    return fs[0] if len(fs) == 1 else AndF(fs)


def disj(*fs) -> FOFormula:
    fs = tuple(fs)
    if not fs:
        return FALSE
    return fs[0] if len(fs) == 1 else OrF(fs)


def forall(vs, body):
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


def exists(vs, body):
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


class Fresh:
    """Numbered variable names per prefix: ``y0, y1, ...``, ``w0, ...``."""

    def __init__(self):
        self._c = {}

    def __call__(self, prefix="y"):
        c = self._c.setdefault(prefix, count())
        return f"{prefix}{next(c)}"


# ---------------------------------------------------------------- traversal

def free_vars(f) -> set:
    if isinstance(f, ATOMS):
        return {f.a, f.b}
    if isinstance(f, Pred):
        return {f.var}
    if isinstance(f, (TrueF, FalseF)):
        return set()
    if isinstance(f, Not):
        return free_vars(f.f)
    if isinstance(f, (AndF, OrF)):
        return set().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Implies):
        return free_vars(f.a) | free_vars(f.b)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, ForallPred):
        return free_vars(f.body)
    raise TypeError(f)


def bound_vars(f) -> list:
    """Every first-order binder, in order (duplicates kept)."""
    out = []

    def go(g):
        if isinstance(g, (Forall, Exists)):
            out.append(g.var)
            go(g.body)
        elif isinstance(g, ForallPred):
            go(g.body)
        elif isinstance(g, Not):
            go(g.f)
        elif isinstance(g, (AndF, OrF)):
            for a in g.args:
                go(a)
        elif isinstance(g, Implies):
            go(g.a)
            go(g.b)

    go(f)
    return out


def has_shadowing(f) -> bool:
    """True if some binder re-binds a variable already bound above it."""
    def go(g, scope):
        if isinstance(g, (Forall, Exists)):
            if g.var in scope:
                return True
            return go(g.body, scope | {g.var})
        if isinstance(g, ForallPred):
            return go(g.body, scope)
        if isinstance(g, Not):
            return go(g.f, scope)
        if isinstance(g, (AndF, OrF)):
            return any(go(a, scope) for a in g.args)
        if isinstance(g, Implies):
            return go(g.a, scope) or go(g.b, scope)
        return False
    return go(f, frozenset())


def preds(f) -> set:
    if isinstance(f, Pred):
        return {f.name}
    if isinstance(f, Not):
        return preds(f.f)
    if isinstance(f, (AndF, OrF)):
        return set().union(*(preds(a) for a in f.args))
    if isinstance(f, Implies):
        return preds(f.a) | preds(f.b)
    if isinstance(f, (Forall, Exists, ForallPred)):
        return preds(f.body)
    return set()


def substitute_var(f, old: str, new: str):
    """Replace free occurrences of variable ``old`` by ``new`` (``new`` must not be captured)."""
    if isinstance(f, ATOMS):
        return type(f)(new if f.a == old else f.a, new if f.b == old else f.b)
    if isinstance(f, Pred):
        return Pred(f.name, new if f.var == old else f.var)
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Not):
        return Not(substitute_var(f.f, old, new))
    if isinstance(f, (AndF, OrF)):
        return type(f)(tuple(substitute_var(a, old, new) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute_var(f.a, old, new), substitute_var(f.b, old, new))
    if isinstance(f, (Forall, Exists)):
        if f.var == old:
            return f
        if f.var == new:
            raise ValueError(f"substituting {new} for {old} would be captured")
        return type(f)(f.var, substitute_var(f.body, old, new))
    if isinstance(f, ForallPred):
        return ForallPred(f.name, substitute_var(f.body, old, new))
    raise TypeError(f)


# ---------------------------------------------------------------- printing

def render_fo(f) -> str:
    """Plain quantifier syntax, e.g. ``forall x. exists y. (r(x,y) & leq(x,y))``."""
    if isinstance(f, Leq):
        return f"leq({f.a},{f.b})"
    if isinstance(f, Rel):
        return f"r({f.a},{f.b})"
    if isinstance(f, Eq):
        return f"eq({f.a},{f.b})"
    if isinstance(f, Pred):
        return f"P_{f.name}({f.var})"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Not):
        return "~" + _render_unit(f.f)
    if isinstance(f, AndF):
        return "(" + " & ".join(_render_unit(a) for a in f.args) + ")"
    if isinstance(f, OrF):
        return "(" + " | ".join(_render_unit(a) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"({_render_unit(f.a)} -> {_render_unit(f.b)})"
    if isinstance(f, Forall):
        return f"forall {f.var}. {render_fo(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {render_fo(f.body)}"
    if isinstance(f, ForallPred):
        return f"forall2 P_{f.name}. {render_fo(f.body)}"
    raise TypeError(f)


def _render_unit(f):
    # a quantifier as an operand gets parentheses so its scope stays put
    s = render_fo(f)
    return f"({s})" if isinstance(f, (Forall, Exists, ForallPred)) else s


class FOSyntaxError(SyntaxError):
    def __init__(self, position, expected):
        super().__init__(f"at position {position}: expected {expected}")
        self.position = position
        self.expected = expected


_FO_TOKEN = re.compile(r"\s*(->|[()~&|,.]|[A-Za-z_][A-Za-z0-9_]*)")


class _FOParser:
    def __init__(self, text):
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _FO_TOKEN.match(text, pos)
            if not m:
                raise FOSyntaxError(pos, "a token")
            self.toks.append((m.group(1), m.start(1)))
            pos = m.end()
        self.toks.append(("<eof>", len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, tok=None):
        t, p = self.toks[self.i]
        if tok is not None and t != tok:
            raise FOSyntaxError(p, repr(tok))
        self.i += 1
        return t

    def ident(self):
        t, p = self.toks[self.i]
        if not re.match(r"[A-Za-z_]", t):
            raise FOSyntaxError(p, "an identifier")
        self.i += 1
        return t

    def expr(self):
        t = self.peek()
        if t in ("forall", "exists", "forall2"):
            self.take()
            v = self.ident()
            self.take(".")
            body = self.expr()
            if t == "forall2":
                if not v.startswith("P_"):
                    raise FOSyntaxError(self.toks[self.i - 1][1], "a predicate name P_...")
                return ForallPred(v[2:], body)
            return (Forall if t == "forall" else Exists)(v, body)
        a = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(a, self.expr())
        return a

    def disj(self):
        xs = [self.conj()]
        while self.peek() == "|":
            self.take()
            xs.append(self.conj())
        return disj(*xs)

    def conj(self):
        xs = [self.unary()]
        while self.peek() == "&":
            self.take()
            xs.append(self.unary())
        return conj(*xs)

    def unary(self):
        t, p = self.toks[self.i]
        if t == "~":
            self.take()
            return Not(self.unary())
        if t == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        if t in ("forall", "exists", "forall2"):
            return self.expr()
        if t == "true":
            self.take()
            return TRUE
        if t == "false":
            self.take()
            return FALSE
        name = self.ident()
        self.take("(")
        a = self.ident()
        if name.startswith("P_"):
            self.take(")")
            return Pred(name[2:], a)
        self.take(",")
        b = self.ident()
        self.take(")")
        kinds = {"leq": Leq, "r": Rel, "eq": Eq}
        if name not in kinds:
            raise FOSyntaxError(p, "leq, r, eq or P_name")
        return kinds[name](a, b)

    def end(self):
        if self.peek() != "<eof>":
            raise FOSyntaxError(self.toks[self.i][1], "end of input")


def parse_fo(text: str):
    p = _FOParser(text)
    f = p.expr()
    p.end()
    return f


def _smt(f) -> str:
    if isinstance(f, Leq):
        return f"(leq {f.a} {f.b})"
    if isinstance(f, Rel):
        return f"(r {f.a} {f.b})"
    if isinstance(f, Eq):
        return f"(= {f.a} {f.b})"
    if isinstance(f, Pred):
        return f"(P_{f.name} {f.var})"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Not):
        return f"(not {_smt(f.f)})"
    if isinstance(f, AndF):
        return "(and " + " ".join(_smt(a) for a in f.args) + ")"
    if isinstance(f, OrF):
        return "(or " + " ".join(_smt(a) for a in f.args) + ")"
    if isinstance(f, Implies):
        return f"(=> {_smt(f.a)} {_smt(f.b)})"
    if isinstance(f, Forall):
        return f"(forall (({f.var} S)) {_smt(f.body)})"
    if isinstance(f, Exists):
        return f"(exists (({f.var} S)) {_smt(f.body)})"
    if isinstance(f, ForallPred):
        return _smt(f.body)
    raise TypeError(f)


def to_smt(f) -> str:
    """SMT-LIB2 script asserting ``f``; predicate quantifiers become free declarations."""
    lines = ["(declare-sort S 0)", "(declare-fun leq (S S) Bool)", "(declare-fun r (S S) Bool)"]
    for p in sorted(preds(f)):
        lines.append(f"(declare-fun P_{p} (S) Bool)")
    for v in sorted(free_vars(f)):
        lines.append(f"(declare-const {v} S)")
    lines.append("; leq is a partial order with binary meets")
    lines.append(f"(assert {_smt(f)})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- evaluation

class UnboundVariable(KeyError):
    def __init__(self, var):
        super().__init__(var)
        self.var = var

    def __str__(self):
        return f"variable {self.var!r} is not bound"


class PredWithoutValuation(ValueError):
    pass


def _structure(s):
    """(semilattice, relation rows or None, valuation dict or None)."""
    if isinstance(s, ModalLModel):
        return s.frame.sl, s.frame.rows, s.valuation
    if isinstance(s, LModel):
        return s.sl, None, s.valuation
    if isinstance(s, ModalLFrame):
        return s.sl, s.rows, None
    if isinstance(s, MeetSemilattice):
        return s, None, None
    raise TypeError(f"cannot evaluate on {type(s).__name__}")


def compile_fo(structure, f, free=(), pred_range="subsets"):
    """Compile ``f`` into ``fn(env_list) -> bool`` with slots for ``free`` in order.

    ``pred_range`` says what a ``ForallPred`` quantifier ranges over:
    ``"subsets"`` (every subset of the carrier) or ``"filters"``.
    """
    sl, rows, val = _structure(structure)
    n = sl.n
    up = sl.poset.up
    rng = range(n)
    slots = {}
    nslots = [0]

    def new_slot():
        nslots[0] += 1
        return nslots[0] - 1

    for v in free:
        slots[v] = new_slot()
    # predicate values live in a mutable dict; bound predicates shadow the valuation
    pvals = dict(val) if val is not None else {}
    bound_preds = set()

    def slot(v, scope):
        if v in scope:
            return scope[v]
        raise UnboundVariable(v)

    def go(g, scope):
        if isinstance(g, Leq):
            a, b = slot(g.a, scope), slot(g.b, scope)
            return lambda e: (up[e[a]] >> e[b]) & 1 == 1
        if isinstance(g, Rel):
            if rows is None:
                raise TypeError("relation atom on a structure without R")
            a, b = slot(g.a, scope), slot(g.b, scope)
            return lambda e: (rows[e[a]] >> e[b]) & 1 == 1
        if isinstance(g, Eq):
            a, b = slot(g.a, scope), slot(g.b, scope)
            return lambda e: e[a] == e[b]
        if isinstance(g, Pred):
            if g.name not in pvals and g.name not in bound_preds:
                raise PredWithoutValuation(f"no valuation for P_{g.name}")
            a = slot(g.var, scope)
            name = g.name
            return lambda e: (pvals[name] >> e[a]) & 1 == 1
        if isinstance(g, TrueF):
            return lambda e: True
        if isinstance(g, FalseF):
            return lambda e: False
        if isinstance(g, Not):
            c = go(g.f, scope)
            return lambda e: not c(e)
        if isinstance(g, AndF):
            cs = [go(a, scope) for a in g.args]
            return lambda e: all(c(e) for c in cs)
        if isinstance(g, OrF):
            cs = [go(a, scope) for a in g.args]
            return lambda e: any(c(e) for c in cs)
        if isinstance(g, Implies):
            ca, cb = go(g.a, scope), go(g.b, scope)
            return lambda e: (not ca(e)) or cb(e)
        if isinstance(g, (Forall, Exists)):
            s = new_slot()
            c = go(g.body, {**scope, g.var: s})
            if isinstance(g, Forall):
                def q(e, s=s, c=c):
                    for i in rng:
                        e[s] = i
                        if not c(e):
                            return False
                    return True
            else:
                def q(e, s=s, c=c):
                    for i in rng:
                        e[s] = i
                        if c(e):
                            return True
                    return False
            return q
        if isinstance(g, ForallPred):
            name = g.name
            was_bound = name in bound_preds
            bound_preds.add(name)
            c = go(g.body, scope)
            if not was_bound:
                bound_preds.discard(name)
            if pred_range == "filters":
                space = [x.mask for x in all_filters(sl)]
            else:
                space = range(1 << n)

            def qp(e):
                saved = pvals.get(name)
                try:
                    for m in space:
                        pvals[name] = m
                        if not c(e):
                            return False
                    return True
                finally:
                    if saved is None:
                        pvals.pop(name, None)
                    else:
                        pvals[name] = saved
            return qp
        raise TypeError(g)

    fn = go(f, dict(slots))
    size = nslots[0]

    def run(env_values=()):
        e = [0] * max(size, 1)
        for i, v in enumerate(env_values):
            e[i] = v
        return fn(e)

    return run


def fo_eval(structure, f, env=None, pred_range="subsets") -> bool:
    """Tarski truth of ``f`` in a finite frame or model; ``env`` maps free variables to states."""
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    names = sorted(env)
    run = compile_fo(structure, f, names, pred_range)
    return run([env[v] for v in names])


# ---------------------------------------------------------------- simplifier

def _flatten(kind, args):
    out = []
    for a in args:
        if isinstance(a, kind):
            out.extend(a.args)
        else:
            out.append(a)
    return out


def _dedupe(xs):
    seen = set()
    out = []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _conjuncts(f):
    return list(f.args) if isinstance(f, AndF) else [f]


def simplify(f):
    """Sound rewrites only: constant folding, reflexivity, flattening,
    vacuous quantifiers, one-point rules for equality, and
    ``forall w. (leq(w,v) -> leq(w,u))`` to ``leq(v,u)``.
    """
    prev = None
    while prev != f:
        prev = f
        f = _simp(f)
    return f


def _simp(f):
    if isinstance(f, (Leq, Eq)):
        return TRUE if f.a == f.b else f
    if isinstance(f, (Rel, Pred, TrueF, FalseF)):
        return f
    if isinstance(f, Not):
        g = _simp(f.f)
        if isinstance(g, TrueF):
            return FALSE
        if isinstance(g, FalseF):
            return TRUE
        if isinstance(g, Not):
            return g.f
        return Not(g)
    if isinstance(f, AndF):
        args = _dedupe(_flatten(AndF, [_simp(a) for a in f.args]))
        if any(isinstance(a, FalseF) for a in args):
            return FALSE
        args = [a for a in args if not isinstance(a, TrueF)]
        return conj(*args)
    if isinstance(f, OrF):
        args = _dedupe(_flatten(OrF, [_simp(a) for a in f.args]))
        if any(isinstance(a, TrueF) for a in args):
            return TRUE
        args = [a for a in args if not isinstance(a, FalseF)]
        return disj(*args)
    if isinstance(f, Implies):
        a, b = _simp(f.a), _simp(f.b)
        if isinstance(a, FalseF) or isinstance(b, TrueF):
            return TRUE
        if isinstance(a, TrueF):
            return b
        if isinstance(b, FalseF):
            return _simp(Not(a))
        if b in _conjuncts(a):
            return TRUE
        if isinstance(b, AndF):
            # (a -> b1 & b2) keeps shape; drop conjuncts already assumed
            rest = [x for x in b.args if x not in _conjuncts(a)]
            if len(rest) < len(b.args):
                return Implies(a, conj(*rest)) if rest else TRUE
        if isinstance(b, OrF) and any(x in _conjuncts(a) for x in b.args):
            return TRUE
        return Implies(a, b)
    if isinstance(f, (Forall, Exists)):
        body = _simp(f.body)
        v = f.var
        if v not in free_vars(body):
            return body          # carriers are nonempty
        if isinstance(f, Forall):
            # forall w. (leq(w,v) -> leq(w,u))  ==>  leq(v,u)
            if (isinstance(body, Implies) and isinstance(body.a, Leq) and isinstance(body.b, Leq)
                    and body.a.a == v and body.b.a == v and body.a.b != v and body.b.b != v):
                return Leq(body.a.b, body.b.b)
            # forall w. (w = t -> phi)  ==>  phi[t/w]
            if isinstance(body, Implies):
                t = _one_point(v, _conjuncts(body.a))
                if t is not None:
                    rest = [c for c in _conjuncts(body.a) if not _is_eq_to(c, v, t)]
                    try:
                        return substitute_var(Implies(conj(*rest), body.b), v, t)
                    except ValueError:
                        pass
            if isinstance(body, AndF):
                return conj(*(Forall(v, a) if v in free_vars(a) else a for a in body.args))
            return Forall(v, body)
        # exists w. (w = t & phi)  ==>  phi[t/w]
        cs = _conjuncts(body)
        t = _one_point(v, cs)
        if t is not None:
            rest = [c for c in cs if not _is_eq_to(c, v, t)]
            try:
                return substitute_var(conj(*rest), v, t)
            except ValueError:
                pass
        if isinstance(body, OrF):
            return disj(*(Exists(v, a) if v in free_vars(a) else a for a in body.args))
        if isinstance(body, AndF):
            inner = [a for a in body.args if v in free_vars(a)]
            outer = [a for a in body.args if v not in free_vars(a)]
            if outer:
                return conj(*outer, Exists(v, conj(*inner)))
        return Exists(v, body)
    if isinstance(f, ForallPred):
        return ForallPred(f.name, _simp(f.body))
    raise TypeError(f)


def _is_eq_to(c, v, t):
    return isinstance(c, Eq) and {c.a, c.b} == {v, t}


def _one_point(v, cs):
    for c in cs:
        if isinstance(c, Eq) and c.a != c.b and v in (c.a, c.b):
            return c.b if c.a == v else c.a
    return None
