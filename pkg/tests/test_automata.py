"""Test weighted automata, their behaviour and the Kleene constructions."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleene_workbench import automata, ids, matrix, sampling, semiring
from kleene_workbench.automata import Letter, One, Prod, Scale, Star, Sum, Zero
from kleene_workbench.schemas import files
from kleene_workbench.series import Alphabet, TruncatedSeries, UnknownLetterError
from tests import strategies

BOOL = ids.BOOLEAN
NAT = ids.NAT_INF
AB = strategies.AB
A = Alphabet(("a",))


@pytest.fixture
def ab_star() -> automata.WeightedAutomaton:
    """The boolean automaton of (ab)*."""
    return automata.WeightedAutomaton.of(
        BOOL,
        AB,
        [1, 0],
        {"a": [[0, 1], [0, 0]], "b": [[0, 0], [1, 0]]},
        [1, 0],
        name="ab-star",
    )


def test_behavior(ab_star: automata.WeightedAutomaton) -> None:
    """The behaviour of (ab)*."""
    s = automata.behavior(ab_star, 4)
    assert s.to_dict() == {"eps": "1", "ab": "1", "abab": "1"}
    assert s.coeff(("a",)) == semiring.zero(BOOL)


def test_behavior_of_scalar_loop() -> None:
    """A weighted loop multiplies its weight per letter."""
    loop = automata.WeightedAutomaton.of(NAT, A, [1], {"a": [[2]]}, [1])
    assert automata.behavior(loop, 4).to_dict() == {"eps": "1", "a": "2", "aa": "4", "aaa": "8", "aaaa": "16"}


def test_behavior_via_star() -> None:
    """Behaviour through the matrix star."""
    loop = automata.WeightedAutomaton.of(BOOL, A, [1], {"a": [[1]]}, [1])
    assert automata.behavior_via_star(loop, 3).to_dict() == {"eps": "1", "a": "1", "aa": "1", "aaa": "1"}


def test_invalid_automaton() -> None:
    """Missing letters and mismatched vectors are rejected."""
    with pytest.raises(automata.InvalidAutomatonError, match=r"every letter"):
        automata.WeightedAutomaton.of(BOOL, AB, [1], {"a": [[1]]}, [1])
    with pytest.raises(automata.InvalidAutomatonError, match=r"final vector"):
        automata.WeightedAutomaton.of(BOOL, A, [1, 0], {"a": [[1, 0], [0, 1]]}, [1])


def test_combo(ab_star: automata.WeightedAutomaton) -> None:
    """Combinations read off one transition entry."""
    combo = ab_star.combo(0, 1)
    assert str(combo) == "1@a"
    assert combo.to_series(1) == TruncatedSeries.letter(BOOL, AB, 1, "a")
    assert str(ab_star.combo(0, 0)) == "0"


def test_equivalent(ab_star: automata.WeightedAutomaton) -> None:
    """Equivalence reports the first differing word."""
    assert automata.equivalent(ab_star, ab_star, 4).equivalent

    report = automata.equivalent(ab_star, automata.letter_automaton(BOOL, AB, "a"), 4)
    assert not report.equivalent
    assert report.word == "eps"
    assert (report.left, report.right) == ("1", "0")


def test_compile_letter_star() -> None:
    """Compiling a* gives the all-ones series."""
    compiled = automata.compile_expr(Star(Letter("a")), NAT, A)
    assert automata.behavior(compiled, 3).to_dict() == {"eps": "1", "a": "1", "aa": "1", "aaa": "1"}


def test_compile_constants() -> None:
    """Compiling 0 and e gives the zero and one series."""
    for instance in strategies.INSTANCES:
        assert automata.behavior(automata.compile_expr(Zero(), instance, AB), 2) == TruncatedSeries.zero(instance, AB, 2)
        assert automata.behavior(automata.compile_expr(One(), instance, AB), 2) == TruncatedSeries.one(instance, AB, 2)


def test_letter_automaton_over_tropical() -> None:
    """A letter automaton over tropical weights its letter with the unit 0."""
    compiled = automata.letter_automaton(ids.TROPICAL, AB, "b")
    assert automata.behavior(compiled, 2).to_dict() == {"b": "0"}


def test_unknown_letter() -> None:
    """Compiling a letter outside the alphabet fails."""
    with pytest.raises(UnknownLetterError):
        automata.compile_expr(Letter("c"), BOOL, AB)


def test_eval_one_is_identity() -> None:
    """The constant e evaluates to the identity matrix."""
    target = automata.MatrixAlgebra(NAT, 2)
    assert automata.eval_expr(One(), target, {}) == matrix.KMatrix.identity(NAT, 2)


def test_eval_missing_letter() -> None:
    """Evaluation needs a value for every letter."""
    with pytest.raises(automata.MissingLetterError):
        automata.eval_expr(Letter("a"), automata.MatrixAlgebra(NAT, 1), {})


def test_expr_size_and_str() -> None:
    """Expression size and rendering."""
    e = Sum(Prod(Letter("a"), Star(Letter("b"))), Scale(semiring.SemiringValue(NAT, 2), One()))
    assert automata.expr_size(e) == 7
    assert str(e) == "((a . (b)*) + 2@(e))"


def test_hsharp_of_letter() -> None:
    """Extending a letter morphism to a letter automaton."""
    h = {"a": matrix.KMatrix.of(NAT, [[2]]), "b": matrix.KMatrix.of(NAT, [[0]])}
    assert automata.hsharp(automata.letter_automaton(NAT, AB, "a"), 1, h) == matrix.KMatrix.of(NAT, [[2]])


def test_apply_morphism_shape(ab_star: automata.WeightedAutomaton) -> None:
    """Flattening an automaton under a matrix morphism."""
    h = {"a": matrix.KMatrix.identity(BOOL, 2), "b": matrix.KMatrix.identity(BOOL, 2)}
    flattened = automata.apply_morphism(ab_star, 2, h)
    assert flattened.transition.shape == (4, 4)
    assert flattened.initial.shape == (2, 4)
    assert flattened.value() == matrix.KMatrix.identity(BOOL, 2)
    with pytest.raises(automata.MissingLetterError):
        automata.apply_morphism(ab_star, 2, {"a": h["a"]})
    with pytest.raises(matrix.DimensionMismatchError):
        automata.apply_morphism(ab_star, 3, h)


@given(st.data())
def test_kleene_agreement(data: st.DataObject) -> None:
    """Compiled automata have the behaviour of their expressions."""
    instance = data.draw(strategies.instances())
    e = data.draw(strategies.expressions(instance))
    target = automata.SeriesAlgebra(instance, AB, 3)
    compiled = automata.compile_expr(e, instance, AB)
    assert automata.behavior(compiled, 3) == automata.eval_expr(e, target, target.letters())


@given(st.data())
def test_hsharp_matches_matrix_evaluation(data: st.DataObject) -> None:
    """The extended morphism agrees with evaluating the expression in matrices."""
    instance = data.draw(st.sampled_from(strategies.FINITE_INSTANCES))
    e = data.draw(strategies.expressions(instance, max_size=6))
    rng = data.draw(strategies.rngs())
    h = {letter: sampling.random_matrix(rng, instance, 2, 2) for letter in AB}
    compiled = automata.compile_expr(e, instance, AB)
    assert automata.hsharp(compiled, 2, h) == automata.eval_expr(e, automata.MatrixAlgebra(instance, 2), h)


@given(st.data())
def test_compositional_behavior(data: st.DataObject) -> None:
    """Behaviours of sum, product, star and scaled automata."""
    instance = data.draw(strategies.instances())
    a, b = data.draw(strategies.weighted_automata(instance)), data.draw(strategies.weighted_automata(instance))
    k = data.draw(strategies.values(instance))
    ba, bb = automata.behavior(a, 3), automata.behavior(b, 3)
    assert automata.behavior(automata.sum_automaton(a, b), 3) == ba + bb
    assert automata.behavior(automata.product_automaton(a, b), 3) == ba * bb
    assert automata.behavior(automata.star_automaton(a), 3) == ba.star()
    assert automata.behavior(automata.scale_automaton(k, a), 3) == ba.scale(k)


@given(st.data())
def test_behavior_via_star_agrees(data: st.DataObject) -> None:
    """Both behaviour computations agree."""
    instance = data.draw(strategies.instances())
    a = data.draw(strategies.weighted_automata(instance))
    assert automata.behavior_via_star(a, 3) == automata.behavior(a, 3)


@given(st.data())
def test_file_round_trip(data: st.DataObject) -> None:
    """Automata survive writing and reading their file."""
    instance = data.draw(strategies.instances())
    a = data.draw(strategies.weighted_automata(instance)).renamed("sample")
    text = automata.to_file(a).model_dump_json()
    assert automata.from_file(files.AutomatonFile.model_validate_json(text)) == a


def test_automaton_mismatch() -> None:
    """Automata over different instances cannot be combined."""
    with pytest.raises(automata.AutomatonMismatchError, match=r"boolean"):
        automata.letter_automaton(BOOL, AB, "a").check_compatible(automata.letter_automaton(NAT, AB, "a"))
