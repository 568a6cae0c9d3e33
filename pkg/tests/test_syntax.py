import random

import pytest
from hypothesis import given, settings, strategies as st

from filterlogic.syntax import (
    BOT, TOP, And, Box, ConsequencePair, Dia, FormulaSyntaxError, Or, Prop,
    classify_antecedent, depth, is_positive, letters, parse_formula, parse_pair,
    random_formula, render_formula, render_pair, sexpr, shallow_formulas, size,
)

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_precedence():
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("box p & q") == And(Box(p), q)
    assert parse_formula("dia box p") == Dia(Box(p))


def test_left_association():
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert parse_formula("p | q | r") == Or(Or(p, q), r)


def test_constants_and_parens():
    assert parse_formula("(top | bot)") == Or(TOP, BOT)


def test_render_minimal_parens():
    assert render_formula(And(p, Or(q, r))) == "p & (q | r)"
    assert render_formula(And(And(p, q), r)) == "p & q & r"
    assert render_formula(And(p, And(q, r))) == "p & (q & r)"
    assert render_formula(Box(And(p, q))) == "box (p & q)"
    assert render_formula(Or(And(p, q), r)) == "p & q | r"


def test_pair():
    pr = parse_pair("p & (q|q2) <= (p&q)|(p&q2)")
    assert isinstance(pr, ConsequencePair)
    assert render_pair(pr) == "p & (q | q2) <= p & q | p & q2"
    assert letters(pr) == ["p", "q", "q2"]


@pytest.mark.parametrize("text,pos", [("p &", 3), ("(p", 2), ("p q", 2), ("p $ q", 2), ("box", 3)])
def test_syntax_error_position(text, pos):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert e.value.position == pos


def test_pair_needs_arrow():
    with pytest.raises(FormulaSyntaxError):
        parse_pair("p & q")


def test_keywords_are_not_letters():
    with pytest.raises(ValueError):
        Prop("box")


def test_sexpr_and_measures():
    f = parse_formula("dia (p & box q)")
    assert sexpr(f) == "(dia (and p (box q)))"
    assert depth(f) == 3
    assert size(f) == 5
    assert not is_positive(f)
    assert is_positive(parse_formula("p | q & top"))


@pytest.mark.parametrize("text,tag", [
    ("p & (q | r)", "PositiveAny"),
    ("box box p & dia q", "SahlqvistAntecedent"),
    ("dia (box p | q)", "SahlqvistAntecedent"),
    ("box (p | q)", "NotSahlqvist"),
    ("box dia p", "NotSahlqvist"),
])
def test_classify(text, tag):
    assert classify_antecedent(parse_formula(text)).tag == tag


def test_boxed_atoms_in_order():
    c = classify_antecedent(parse_formula("box box p & dia q"))
    assert c.boxed_atoms == (("p", 2), ("q", 0))


def formulas():
    atoms = st.sampled_from([p, q, r, TOP, BOT])
    return st.recursive(atoms, lambda c: st.one_of(
        st.builds(And, c, c), st.builds(Or, c, c), st.builds(Box, c), st.builds(Dia, c)),
        max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip(f):
    assert parse_formula(render_formula(f)) == f


def test_round_trip_seeded():
    rng = random.Random(1)
    for _ in range(200):
        f = random_formula(rng, 5, ("p", "q", "r"))
        assert parse_formula(render_formula(f)) == f


def test_shallow_formulas_count():
    # 4 atoms, 32 binary, 8 modal
    assert len(shallow_formulas()) == 44
    assert all(depth(f) <= 1 for f in shallow_formulas())
