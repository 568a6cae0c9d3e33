"""Translations into first-order logic and first-order correspondents.

The correspondent of a pair ``lhs <= rhs`` is computed as follows.

1. Letters that occur only in ``rhs`` are replaced by ``bot`` (truth sets
   grow with the valuation, so the empty filter is the hardest case), and
   ``top``/``bot`` are eliminated from ``lhs`` by lattice identities.
2. The translation of ``lhs`` is unfolded into a disjunction of blocks.  A
   block is a list of existentially bound variables, relational atoms
   (``r``, ``abovemeet``) and boxed atoms ``(letter, variable, depth)``.
3. For each block every letter gets its least filter making the boxed atoms
   true (``sigma``); it is substituted into the translation of ``rhs``.
4. Each block contributes ``forall Y. (REL -> st_x(rhs)[sigma])``; the
   correspondent is their conjunction, with ``x`` free.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .fol import (
    AndF, Eq, Exists, FALSE, Fresh, Forall, ForallPred, Implies, Leq, OrF, Pred,
    Rel, conj, disj, exists, fo_eval, forall, free_vars, simplify, Not,
)
from .semantics import frame_validity
from .syntax import (
    And, Bot, Box, ConsequencePair, Dia, Or, Prop, Top, TOP, BOT, boxed_atom,
    classify_antecedent, letters,
)

__all__ = [
    "EmptyBound", "NotSahlqvist", "abovemeet", "meet_is", "standard_translation",
    "isfil", "second_order_translation", "normalize_pair", "sahlqvist_correspondent",
    "close", "CorrespondenceReport", "correspondence_check", "so_expansion_check",
    "fo_equivalent", "hand_forms",
]


class EmptyBound(ValueError):
    pass


class NotSahlqvist(ValueError):
    def __init__(self, antecedent):
        super().__init__(f"antecedent is not a Sahlqvist antecedent: {antecedent}")
        self.antecedent = antecedent


def abovemeet(x: str, ys, fresh: Fresh | None = None):
    """``forall w. ((w <= y1 & ... & w <= yk) -> w <= x)``."""
    ys = list(ys)
    if not ys:
        raise EmptyBound("abovemeet needs at least one bound")
    fresh = fresh or Fresh()
    w = fresh("w")
    while w == x or w in ys:
        w = fresh("w")
    return Forall(w, Implies(conj(*(Leq(w, y) for y in ys)), Leq(w, x)))


def meet_is(x: str, ys, fresh: Fresh | None = None):
    """``x`` equals the meet of ``ys``."""
    return conj(*(Leq(x, y) for y in ys), abovemeet(x, ys, fresh))


def standard_translation(f, x: str = "x", fresh: Fresh | None = None):
    fresh = fresh or Fresh()

    def st(g, v):
        if isinstance(g, Prop):
            return Pred(g.name, v)
        if isinstance(g, Top):
            return Eq(v, v)
        if isinstance(g, Bot):
            return Not(Eq(v, v))
        if isinstance(g, And):
            return conj(st(g.l, v), st(g.r, v))
        if isinstance(g, Or):
            a, b = st(g.l, v), st(g.r, v)
            y, z = fresh("y"), fresh("y")
            third = Exists(y, Exists(z, conj(abovemeet(v, [y, z], fresh), st(g.l, y), st(g.r, z))))
            return disj(a, b, third)
        y = fresh("y")
        if isinstance(g, Box):
            return Forall(y, Implies(Rel(v, y), st(g.child, y)))
        if isinstance(g, Dia):
            return Exists(y, conj(Rel(v, y), st(g.child, y)))
        raise TypeError(g)

    return st(f, x)


def isfil(p: str, fresh: Fresh | None = None):
    fresh = fresh or Fresh()
    a, b, c = fresh("u"), fresh("u"), fresh("u")
    return Forall(a, Forall(b, Forall(c, Implies(
        conj(Pred(p, b), Pred(p, c), abovemeet(a, [b, c], fresh)), Pred(p, a)))))


def second_order_translation(pair: ConsequencePair, fresh: Fresh | None = None):
    fresh = fresh or Fresh()
    ps = letters(pair)
    lhs = standard_translation(pair.lhs, "x", fresh)
    rhs = standard_translation(pair.rhs, "x", fresh)
    body = Forall("x", Implies(conj(*(isfil(p, fresh) for p in ps), lhs), rhs))
    for p in reversed(ps):
        body = ForallPred(p, body)
    return body


# ---------------------------------------------------------------- normalization

def _subst_bot(f, names):
    if isinstance(f, Prop):
        return BOT if f.name in names else f
    if isinstance(f, (And, Or)):
        return type(f)(_subst_bot(f.l, names), _subst_bot(f.r, names))
    if isinstance(f, (Box, Dia)):
        return type(f)(_subst_bot(f.child, names))
    return f


def _fold(f):
    """Eliminate top/bot by lattice identities and the modal laws valid on every
    modal L-frame (box top = top, dia top = top, dia bot = bot)."""
    if isinstance(f, (And, Or)):
        l, r = _fold(f.l), _fold(f.r)
        if isinstance(f, And):
            if isinstance(l, Bot) or isinstance(r, Bot):
                return BOT
            if isinstance(l, Top):
                return r
            if isinstance(r, Top):
                return l
        else:
            if isinstance(l, Top) or isinstance(r, Top):
                return TOP
            if isinstance(l, Bot):
                return r
            if isinstance(r, Bot):
                return l
        return type(f)(l, r)
    if isinstance(f, (Box, Dia)):
        c = _fold(f.child)
        if isinstance(c, Top):
            return TOP
        if isinstance(c, Bot) and isinstance(f, Dia):
            return BOT
        return type(f)(c)
    return f


def normalize_pair(pair: ConsequencePair) -> ConsequencePair:
    only_rhs = set(letters(pair.rhs)) - set(letters(pair.lhs))
    return ConsequencePair(_fold(pair.lhs), _subst_bot(pair.rhs, only_rhs))


# ---------------------------------------------------------------- blocks

@dataclass
class _Block:
    vars: list = field(default_factory=list)
    rel: list = field(default_factory=list)
    atoms: list = field(default_factory=list)      # (letter, var, depth)

    def merge(self, other):
        return _Block(self.vars + other.vars, self.rel + other.rel, self.atoms + other.atoms)


def _blocks(f, v, fresh):
    """Disjunctive blocks equivalent to the translation of a Sahlqvist antecedent at ``v``."""
    if isinstance(f, Top):
        return [_Block()]
    if isinstance(f, Bot):
        return []
    b = boxed_atom(f)
    if b is not None:
        return [_Block(atoms=[(b[0], v, b[1])])]
    if isinstance(f, And):
        ls = _blocks(f.l, v, fresh)
        rs = _blocks(f.r, v, fresh)
        return [a.merge(c) for a in ls for c in rs]
    if isinstance(f, Or):
        out = _blocks(f.l, v, fresh) + _blocks(f.r, v, fresh)
        y, z = fresh("y"), fresh("y")
        ls = _blocks(f.l, y, fresh)
        rs = _blocks(f.r, z, fresh)
        head = _Block([y, z], [abovemeet(v, [y, z], fresh)])
        out += [head.merge(a).merge(c) for a in ls for c in rs]
        return out
    if isinstance(f, Dia):
        y = fresh("y")
        return [_Block([y], [Rel(v, y)]).merge(a) for a in _blocks(f.child, y, fresh)]
    raise NotSahlqvist(f)


def _chain(z, n, w, fresh):
    """``z R^n w`` as an existential chain (``R^0`` is equality)."""
    if n == 0:
        return Eq(z, w)
    mids = [fresh("v") for _ in range(n - 1)]
    path = [z] + mids + [w]
    return exists(mids, conj(*(Rel(a, b) for a, b in zip(path, path[1:]))))


def _sigma(occ, modal):
    """Build ``u -> formula`` for the least filter satisfying the boxed atoms ``occ``."""
    if not occ:
        return lambda u, fresh: FALSE
    if not modal:
        zs = [z for z, _ in occ]
        return lambda u, fresh: abovemeet(u, zs, fresh)

    def inst(u, fresh):
        alts = []
        for k in range(1, len(occ) + 1):
            for S in combinations(occ, k):
                ws = [fresh("v") for _ in S]
                body = conj(*(_chain(z, n, w, fresh) for (z, n), w in zip(S, ws)),
                            abovemeet(u, ws, fresh))
                alts.append(exists(ws, body))
        return disj(*alts)
    return inst


def _apply_sigma(f, sig, fresh):
    if isinstance(f, Pred):
        return sig[f.name](f.var, fresh)
    if isinstance(f, Not):
        return Not(_apply_sigma(f.f, sig, fresh))
    if isinstance(f, (AndF, OrF)):
        return type(f)(tuple(_apply_sigma(a, sig, fresh) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_apply_sigma(f.a, sig, fresh), _apply_sigma(f.b, sig, fresh))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _apply_sigma(f.body, sig, fresh))
    return f


def sahlqvist_correspondent(pair: ConsequencePair, simplified: bool = True):
    """First-order formula in the free variable ``x`` locally equivalent to ``pair``."""
    norm = normalize_pair(pair)
    cls = classify_antecedent(norm.lhs)
    if cls.tag == "NotSahlqvist":
        raise NotSahlqvist(pair.lhs)
    fresh = Fresh()
    blocks = _blocks(norm.lhs, "x", fresh)
    rhs_letters = letters(norm.rhs)
    parts = []
    for b in blocks:
        sig = {}
        for p in rhs_letters:
            occ = [(z, n) for (q, z, n) in b.atoms if q == p]
            sig[p] = _sigma(occ, modal=any(n > 0 for _, n in occ))
        st = standard_translation(norm.rhs, "x", fresh)
        body = _apply_sigma(st, sig, fresh)
        parts.append(forall(b.vars, Implies(conj(*b.rel), body)))
    out = conj(*parts)
    return simplify(out) if simplified else out


def close(f, var="x"):
    return Forall(var, f) if var in free_vars(f) else f


# ---------------------------------------------------------------- checking

@dataclass
class CorrespondenceReport:
    pair: ConsequencePair
    correspondent: object
    frames_checked: int
    equivalent: bool
    discrepancy: tuple | None = None     # (frame index, "validity-without-fo" | "fo-without-validity")

    def summary(self) -> str:
        s = f"{self.pair}: {self.frames_checked} frames, equivalent={self.equivalent}"
        if self.discrepancy:
            s += f", first discrepancy at frame {self.discrepancy[0]} ({self.discrepancy[1]})"
        return s


def correspondence_check(pair: ConsequencePair, frames, correspondent=None) -> CorrespondenceReport:
    corr = correspondent if correspondent is not None else sahlqvist_correspondent(pair)
    closed = close(corr)
    checked = 0
    for i, fr in enumerate(frames):
        checked += 1
        v = frame_validity(fr, pair).valid
        c = fo_eval(fr, closed)
        if v != c:
            why = "validity-without-fo" if v else "fo-without-validity"
            return CorrespondenceReport(pair, corr, checked, False, (i, why))
    return CorrespondenceReport(pair, corr, checked, True)


def so_expansion_check(pair: ConsequencePair, frame, pred_range="subsets") -> bool:
    """Does the second-order translation, expanded over predicate values, agree with validity?"""
    so = second_order_translation(pair)
    return fo_eval(frame, so, pred_range=pred_range) == frame_validity(frame, pair).valid


def fo_equivalent(f, g, frames):
    """First frame index where closed ``f`` and ``g`` disagree, or None."""
    f, g = close(f), close(g)
    for i, fr in enumerate(frames):
        if fo_eval(fr, f) != fo_eval(fr, g):
            return i
    return None


def hand_forms() -> dict:
    """Closed first-order conditions written out by hand, keyed by pair text."""
    fr = Fresh()
    am = lambda x, ys: abovemeet(x, ys, fr)
    distr = forall(["x", "y", "y1"], Implies(am("x", ["y", "y1"]), disj(
        Leq("y", "x"), Leq("y1", "x"),
        exists(["z", "z1"], conj(meet_is("x", ["z", "z1"], fr), Leq("y", "z"), Leq("y1", "z1"))))))
    modular = forall(["x", "y", "z"], Implies(am("x", ["y", "z"]), disj(
        Leq("y", "x"), Leq("z", "x"),
        exists(["s", "t"], conj(am("x", ["s", "t"]), Leq("y", "s"), Leq("z", "t"),
                               am("t", ["x", "y"]))))))
    refl_dia = Forall("x", Exists("y", conj(Rel("x", "y"), Leq("x", "y"))))
    refl_box = Forall("x", Exists("y", conj(Rel("x", "y"), Leq("y", "x"))))
    normal_dia = forall(["x", "y", "z", "z1"], Implies(conj(Rel("x", "y"), am("y", ["z", "z1"])), disj(
        Exists("v", conj(Rel("x", "v"), Leq("z", "v"))),
        Exists("v1", conj(Rel("x", "v1"), Leq("z1", "v1"))),
        exists(["v", "v1", "w", "w1"], conj(
            Leq("z", "v"), Leq("z1", "v1"), am("x", ["w", "w1"]), Rel("w", "v"), Rel("w1", "v1"))))))
    return {
        "p & (q | q2) <= p & q | p & q2": distr,
        "(p1 & p3 | p2) & p3 <= p1 & p3 | p2 & p3": modular,
        "p <= dia p": refl_dia,
        "box p <= p": refl_box,
        "dia (p | q) <= dia p | dia q": normal_dia,
    }
