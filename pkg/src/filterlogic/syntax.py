"""Formulas of the positive (modal) language, a parser and a printer.

Concrete syntax::

    top  bot  p  q2  phi & psi  phi | psi  box phi  dia phi  ( phi )
    pair:  lhs <= rhs

``box``/``dia`` bind tightest, then ``&``, then ``|``.  Binary connectives
associate to the left, so ``p & q & r`` is ``And(And(p, q), r)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Formula", "Prop", "Top", "Bot", "And", "Or", "Box", "Dia", "TOP", "BOT",
    "ConsequencePair", "FormulaSyntaxError",
    "parse_formula", "parse_pair", "render_formula", "render_pair", "sexpr",
    "letters", "is_positive", "depth", "size",
    "AntecedentClass", "classify_antecedent", "boxed_atom",
    "random_formula", "shallow_formulas",
]

KEYWORDS = {"top", "bot", "box", "dia"}
IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class Prop:
    name: str

    def __post_init__(self):
        if not IDENT.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"bad proposition name {self.name!r}")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Or:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Box:
    child: "Formula"


@dataclass(frozen=True)
class Dia:
    child: "Formula"


Formula = Union[Prop, Top, Bot, And, Or, Box, Dia]
TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class ConsequencePair:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return render_pair(self)


class FormulaSyntaxError(SyntaxError):
    def __init__(self, position: int, expected: str, text: str = ""):
        super().__init__(f"at position {position}: expected {expected}")
        self.position = position
        self.expected = expected
        self.text = text


_TOKEN = re.compile(r"\s*(?:(<=)|([&|()])|([a-zA-Z][a-zA-Z0-9_]*))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(pos, "a token", text)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, tok=None, expected=None):
        t = self.peek()
        if tok is not None and t != tok:
            raise FormulaSyntaxError(self.pos(), expected or repr(tok), self.text)
        self.i += 1
        return t

    def formula(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        t = self.peek()
        if t == "box":
            self.take()
            return Box(self.unary())
        if t == "dia":
            self.take()
            return Dia(self.unary())
        if t == "top":
            self.take()
            return TOP
        if t == "bot":
            self.take()
            return BOT
        if t == "(":
            self.take()
            f = self.formula()
            self.take(")", "')'")
            return f
        if IDENT.match(t) and t not in KEYWORDS:
            self.take()
            return Prop(t)
        raise FormulaSyntaxError(self.pos(), "a formula", self.text)

    def end(self):
        if self.peek() != "<eof>":
            raise FormulaSyntaxError(self.pos(), "end of input", self.text)


def parse_formula(text: str) -> Formula:
    """Parse a single formula.

    >>> parse_formula("p & (q | r)")
    And(l=Prop(name='p'), r=Or(l=Prop(name='q'), r=Prop(name='r')))
    """
    p = _Parser(text)
    f = p.formula()
    p.end()
    return f


def parse_pair(text: str) -> ConsequencePair:
    p = _Parser(text)
    lhs = p.formula()
    p.take("<=", "'<='")
    rhs = p.formula()
    p.end()
    return ConsequencePair(lhs, rhs)


# precedence levels: Or 0, And 1, unary/atoms 2
def _prec(f) -> int:
    if isinstance(f, Or):
        return 0
    if isinstance(f, And):
        return 1
    return 2


def render_formula(f: Formula) -> str:
    """Text with the fewest parentheses that still parses back to ``f``."""
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, (Box, Dia)):
        kw = "box" if isinstance(f, Box) else "dia"
        c = render_formula(f.child)
        if _prec(f.child) < 2:
            c = f"({c})"
        return f"{kw} {c}"
    op, lvl = (" | ", 0) if isinstance(f, Or) else (" & ", 1)
    ls = render_formula(f.l)
    rs = render_formula(f.r)
    if _prec(f.l) < lvl:
        ls = f"({ls})"
    if _prec(f.r) <= lvl:
        rs = f"({rs})"
    return ls + op + rs


def render_pair(pair: ConsequencePair) -> str:
    return f"{render_formula(pair.lhs)} <= {render_formula(pair.rhs)}"


def sexpr(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Box):
        return f"(box {sexpr(f.child)})"
    if isinstance(f, Dia):
        return f"(dia {sexpr(f.child)})"
    tag = "and" if isinstance(f, And) else "or"
    return f"({tag} {sexpr(f.l)} {sexpr(f.r)})"


def letters(*fs) -> list[str]:
    """Proposition names occurring in the formulas (or pairs), sorted."""
    out = set()

    def go(f):
        if isinstance(f, ConsequencePair):
            go(f.lhs)
            go(f.rhs)
        elif isinstance(f, Prop):
            out.add(f.name)
        elif isinstance(f, (And, Or)):
            go(f.l)
            go(f.r)
        elif isinstance(f, (Box, Dia)):
            go(f.child)

    for f in fs:
        go(f)
    return sorted(out)


def is_positive(f) -> bool:
    """True when no modality occurs."""
    if isinstance(f, ConsequencePair):
        return is_positive(f.lhs) and is_positive(f.rhs)
    if isinstance(f, (Box, Dia)):
        return False
    if isinstance(f, (And, Or)):
        return is_positive(f.l) and is_positive(f.r)
    return True


def depth(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + max(depth(f.l), depth(f.r))
    if isinstance(f, (Box, Dia)):
        return 1 + depth(f.child)
    return 0


def size(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + size(f.l) + size(f.r)
    if isinstance(f, (Box, Dia)):
        return 1 + size(f.child)
    return 1


@dataclass(frozen=True)
class AntecedentClass:
    tag: str                      # PositiveAny | SahlqvistAntecedent | NotSahlqvist
    boxed_atoms: tuple = ()       # ((name, depth), ...) left to right


def boxed_atom(f: Formula):
    """``(name, n)`` if ``f`` is box^n p, else None."""
    n = 0
    while isinstance(f, Box):
        f = f.child
        n += 1
    if isinstance(f, Prop):
        return f.name, n
    return None


def classify_antecedent(f: Formula) -> AntecedentClass:
    if is_positive(f):
        return AntecedentClass("PositiveAny")
    atoms = []

    def ok(g) -> bool:
        if isinstance(g, (Top, Bot)):
            return True
        b = boxed_atom(g)
        if b is not None:
            atoms.append(b)
            return True
        if isinstance(g, (And, Or)):
            return ok(g.l) and ok(g.r)
        if isinstance(g, Dia):
            return ok(g.child)
        return False

    if ok(f):
        return AntecedentClass("SahlqvistAntecedent", tuple(atoms))
    return AntecedentClass("NotSahlqvist")


def random_formula(rng, depth: int, names=("p", "q"), modal: bool = True) -> Formula:
    """A random formula of depth at most ``depth`` (``rng`` is a ``random.Random``)."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.1:
            return TOP
        if r < 0.2:
            return BOT
        return Prop(rng.choice(names))
    ops = ("and", "or", "box", "dia") if modal else ("and", "or")
    op = rng.choice(ops)
    if op == "and":
        return And(random_formula(rng, depth - 1, names, modal), random_formula(rng, depth - 1, names, modal))
    if op == "or":
        return Or(random_formula(rng, depth - 1, names, modal), random_formula(rng, depth - 1, names, modal))
    child = random_formula(rng, depth - 1, names, modal)
    return Box(child) if op == "box" else Dia(child)


def shallow_formulas(names=("p", "q"), modal: bool = True) -> list:
    """Every formula of depth at most 1 over ``names``."""
    atoms = [Prop(n) for n in names] + [TOP, BOT]
    out = list(atoms)
    for a in atoms:
        for b in atoms:
            out.append(And(a, b))
            out.append(Or(a, b))
    if modal:
        out += [Box(a) for a in atoms] + [Dia(a) for a in atoms]
    return out
