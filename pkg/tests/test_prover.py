import itertools
import json
import random

import pytest

from filterlogic.enumeration import BoundExceeded, enumerate_frames
from filterlogic.order import lattice_structure
from filterlogic.prover import (
    Derivation, ModalNotSupported, ShapeMismatch, UnknownRule, check_derivation,
    countermodel_search, some_val_derivations, whitman_decide, whitman_derivation,
)
from filterlogic.semantics import eval_frame, frame_validity
from filterlogic.syntax import (
    ConsequencePair, letters, parse_pair, random_formula, render_pair,
)

LATTICES_6 = [lattice_structure(sl.poset) for n in range(1, 7)
              for sl in enumerate_frames(n, "lattice", up_to_iso=True)]


def lattice_valid(pair):
    from filterlogic.semantics import eval_in_lattice
    names = letters(pair)
    for L in LATTICES_6:
        for vals in itertools.product(range(L.n), repeat=len(names)):
            s = dict(zip(names, vals))
            a, b = eval_in_lattice(L, s, pair.lhs), eval_in_lattice(L, s, pair.rhs)
            if not L.leq(a, b):
                return False
    return True


@pytest.mark.parametrize("text,want", [
    ("p <= p | q", True),
    ("p & (q | r) <= (p & q) | (p & r)", False),
    ("(p & q) | (p & r) <= p & (q | r)", True),
    ("p & (p | q) <= p", True),
    ("p <= p & (p | q)", True),
    ("top <= p | top", True),
    ("p <= bot", False),
])
def test_whitman_examples(text, want):
    assert whitman_decide(parse_pair(text)) is want


def test_whitman_exact_on_two_letters():
    # the free bounded lattice on two generators has six elements, so validity
    # in all lattices of size <= 6 decides the two-letter fragment exactly
    rng = random.Random(2)
    for _ in range(400):
        pair = ConsequencePair(random_formula(rng, 3, ("p", "q"), False),
                               random_formula(rng, 3, ("p", "q"), False))
        assert whitman_decide(pair) == lattice_valid(pair), render_pair(pair)


def test_whitman_sound_on_three_letters():
    rng = random.Random(4)
    for _ in range(150):
        pair = ConsequencePair(random_formula(rng, 3, ("p", "q", "r"), False),
                               random_formula(rng, 3, ("p", "q", "r"), False))
        if whitman_decide(pair):
            assert lattice_valid(pair), render_pair(pair)


def test_modal_rejected():
    with pytest.raises(ModalNotSupported):
        whitman_decide(parse_pair("box p <= p"))


def test_derivations_synthesized_and_checked():
    rng = random.Random(6)
    for _ in range(300):
        pair = ConsequencePair(random_formula(rng, 3, ("p", "q", "r"), False),
                               random_formula(rng, 3, ("p", "q", "r"), False))
        d = whitman_derivation(pair)
        assert (d is not None) == whitman_decide(pair)
        if d is not None:
            assert d.conclusion == pair
            assert check_derivation(d)
            assert check_derivation(Derivation.from_json(json.loads(json.dumps(d.to_json()))))


def test_check_derivation_examples():
    assert check_derivation(Derivation(parse_pair("p & q <= p"), "conj-elim-left"))
    t = Derivation(parse_pair("p <= p | q"), "trans", (
        Derivation(parse_pair("p <= p | q"), "disj-intro-left"),
        Derivation(parse_pair("p | q <= p | q"), "refl")))
    assert check_derivation(t)
    with pytest.raises(UnknownRule):
        check_derivation(Derivation(parse_pair("dia (p | q) <= dia p | dia q"), "dia-join"))


def test_shape_mismatch_path():
    bad = Derivation(parse_pair("p <= q"), "trans", (
        Derivation(parse_pair("p <= p | q"), "disj-intro-left"),
        Derivation(parse_pair("p | q <= q"), "conj-elim-left")))
    with pytest.raises(ShapeMismatch) as e:
        check_derivation(bad)
    assert e.value.path == "0.1"


def test_mutated_rule_names_rejected():
    for d in some_val_derivations():
        assert check_derivation(d)
        mutated = Derivation(d.conclusion, d.rule + "x", d.premises)
        with pytest.raises(UnknownRule):
            check_derivation(mutated)


def test_some_val_derivations_are_valid_on_frames():
    frames = [f for n in (1, 2, 3) for f in enumerate_frames(n, "modal", up_to_iso=True)]
    for d in some_val_derivations():
        for fr in frames:
            assert frame_validity(fr, d.conclusion).valid


def test_distributivity_countermodel():
    cm = countermodel_search(parse_pair("p & (q|q2) <= (p&q)|(p&q2)"), 5)
    assert cm is not None and cm.n == 4
    pair = parse_pair("p & (q|q2) <= (p&q)|(p&q2)")
    assert eval_frame(cm.frame, None, cm.valuation, pair.lhs) >> cm.state & 1
    assert not eval_frame(cm.frame, None, cm.valuation, pair.rhs) >> cm.state & 1


def test_no_countermodel_for_axiom():
    assert countermodel_search(parse_pair("p <= p | q"), 5) is None


def test_box_countermodel_golden():
    cm = countermodel_search(parse_pair("box p <= p"), 2)
    assert cm.frame.sl.poset.up == (0b11, 0b10)
    assert cm.frame.pairs() == [(0, 1), (1, 1)]
    assert cm.valuation == {"p": 0b10} and cm.state == 0


def test_countermodel_bound():
    with pytest.raises(BoundExceeded):
        countermodel_search(parse_pair("box p <= p"), 5)
