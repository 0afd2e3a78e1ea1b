"""Test level-set decompositions and omega powers."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleene_workbench import analysis, automata, enums, exceptions, ids, semiring, series, simulation
from kleene_workbench.automata import Letter, Scale, Sum
from kleene_workbench.semiring import INF, SemiringValue
from kleene_workbench.series import Alphabet, TruncatedSeries
from tests import strategies

BOOL = ids.BOOLEAN
NAT = ids.NAT_INF
CHAIN3 = ids.chain(3)
AB = strategies.AB


@pytest.fixture
def ab_star() -> automata.WeightedAutomaton:
    """The boolean automaton of (ab)*."""
    return automata.WeightedAutomaton.of(
        BOOL,
        AB,
        [1, 0],
        {"a": [[0, 1], [0, 0]], "b": [[0, 0], [1, 0]]},
        [1, 0],
    )


def words(dfa: analysis.LevelSetDfa, bound: int) -> list[str]:
    return [series.format_word(w, dfa.alphabet) for w in dfa.language(bound)]


def test_level_sets_of_ab_star(ab_star: automata.WeightedAutomaton) -> None:
    """The level-set DFA of (ab)* has three states and accepts (ab)*."""
    dfa = analysis.image_finite_analysis(ab_star)
    assert len(dfa.states) == 3
    assert dfa.values() == [semiring.zero(BOOL), semiring.one(BOOL)]

    d = analysis.decompose(ab_star)
    assert [part.value for part in d.parts] == [semiring.one(BOOL)]
    assert words(d.parts[0].acceptor, 4) == ["eps", "ab", "abab"]


def test_zero_behaviour_has_one_state() -> None:
    """The zero behaviour has a single state and no nonzero part."""
    zero = automata.zero_automaton(BOOL, AB)
    assert len(analysis.image_finite_analysis(zero).states) == 1
    d = analysis.decompose(zero)
    assert d.parts == ()
    assert analysis.reconstruct(d, 3) == TruncatedSeries.zero(BOOL, AB, 3)


def test_decompose_weighted_letters() -> None:
    """Each weighted letter gets its own level set."""
    e = Sum(Scale(SemiringValue(CHAIN3, 1), Letter("a")), Scale(SemiringValue(CHAIN3, 2), Letter("b")))
    a = automata.compile_expr(e, CHAIN3, AB)
    d = analysis.decompose(a)
    assert [(part.value.value, words(part.acceptor, 2)) for part in d.parts] == [(1, ["a"]), (2, ["b"])]
    assert analysis.reconstruct(d, 3) == automata.behavior(a, 3)


def test_decompose_with_zero_part(ab_star: automata.WeightedAutomaton) -> None:
    """The zero level set holds every rejected word."""
    d = analysis.decompose(ab_star, include_zero=True)
    assert [part.value for part in d.parts] == [semiring.zero(BOOL), semiring.one(BOOL)]
    assert words(d.parts[0].acceptor, 2) == ["a", "b", "aa", "ba", "bb"]


def test_decompose_infinite_carrier() -> None:
    """Decomposition needs a finite carrier."""
    with pytest.raises(semiring.InfiniteCarrierError):
        analysis.decompose(automata.letter_automaton(NAT, AB, "a"))


def test_dfa_simulates_automaton(ab_star: automata.WeightedAutomaton) -> None:
    """The level-set DFA simulates the analysed automaton."""
    dfa = analysis.image_finite_analysis(ab_star)
    d = dfa.to_automaton()
    assert simulation.check_simulation(d, ab_star, dfa.embedding()).valid
    assert automata.equivalent(d, ab_star, 4).equivalent


def test_dfa_file(ab_star: automata.WeightedAutomaton) -> None:
    """The DFA file stores states, transitions and outputs."""
    f = analysis.image_finite_analysis(ab_star).to_file()
    assert f.states == [[1, 0], [0, 1], [0, 0]]
    assert f.transitions == {"a": [1, 2, 2], "b": [2, 0, 2]}
    assert f.outputs == [1, 0, 0]


def test_dfa_run(ab_star: automata.WeightedAutomaton) -> None:
    """The DFA reads words and rejects unknown letters."""
    dfa = analysis.image_finite_analysis(ab_star)
    assert dfa.output(("a", "b")) == semiring.one(BOOL)
    assert dfa.output(("b",)) == semiring.zero(BOOL)
    with pytest.raises(series.UnknownLetterError):
        dfa.run(("c",))


@given(st.data())
def test_decomposition_reconstructs(data: st.DataObject) -> None:
    """Reassembling the level sets gives back the behaviour."""
    instance = data.draw(st.sampled_from(strategies.FINITE_INSTANCES))
    a = data.draw(strategies.weighted_automata(instance))
    d = analysis.decompose(a)
    assert analysis.reconstruct(d, 3) == automata.behavior(a, 3)

    seen: set[tuple[str, ...]] = set()
    for part in d.parts:
        level = set(part.acceptor.language(3))
        assert not seen & level
        seen |= level


def nat_series(coeffs: dict[str, semiring.Scalar], bound: int = 2) -> TruncatedSeries:
    result = TruncatedSeries.zero(NAT, AB, bound)
    for word, k in coeffs.items():
        result += series.char_word(NAT, AB, bound, tuple(word)).scale(SemiringValue(NAT, k))
    return result


def test_omega_power_of_one_plus_letter() -> None:
    """The omega power of 1 + a is 1 on eps and infinite elsewhere."""
    s = nat_series({"": 1, "a": 1})
    omega = analysis.omega_power(s)
    assert omega.coeff(()) == SemiringValue(NAT, 1)
    assert omega.coeff(("a",)) == SemiringValue(NAT, INF)
    assert omega.coeff(("a", "a")) == SemiringValue(NAT, INF)
    assert omega.coeff(("b",)) == SemiringValue(NAT, 0)


def test_omega_power_of_scalar() -> None:
    """The omega power of 2 is infinite."""
    omega = analysis.omega_power(nat_series({"": 2}))
    assert omega.to_dict() == {"eps": "inf"}


def test_omega_errors() -> None:
    """Proper series and other instances are rejected."""
    with pytest.raises(analysis.ProperSeriesError, match=r"star"):
        analysis.omega_power(nat_series({"a": 1}))
    with pytest.raises(analysis.OmegaUnsupportedError):
        analysis.omega_power(TruncatedSeries.one(BOOL, AB, 2))


def test_certify_omega() -> None:
    """Iterates certify the closed form of 1 + a."""
    report = analysis.certify_omega(nat_series({"": 1, "a": 1}))
    assert report.horizon == analysis.default_horizon(2)
    assert report.passed
    certificates = {entry.word: entry.certificate for entry in report.entries}
    assert certificates["eps"] is enums.Certificate.attained
    assert certificates["a"] is enums.Certificate.strict_growth
    assert certificates["b"] is enums.Certificate.attained


@pytest.mark.parametrize(
    ("bound", "certificate"),
    [
        (analysis.DEFAULT_DIVERGENCE_BOUND, enums.Certificate.strict_growth),
        (100, enums.Certificate.bound_crossed),
    ],
)
def test_certify_divergent_scalar(bound: int, certificate: enums.Certificate) -> None:
    """The certificate of a divergent scalar depends on the bound."""
    report = analysis.certify_omega(nat_series({"": 2}), bound=bound)
    assert report.entries[0].word == "eps"
    assert report.entries[0].value == "inf"
    assert report.entries[0].certificate is certificate


def test_certify_reaches_infinity() -> None:
    """An infinite constant term reaches infinity at once."""
    report = analysis.certify_omega(nat_series({"": INF}))
    assert report.entries[0].certificate is enums.Certificate.reached_infinity


def test_certify_horizon_must_be_positive() -> None:
    """The iteration horizon must be positive."""
    with pytest.raises(exceptions.BadParameterError, match=r"positive"):
        analysis.certify_omega(nat_series({"": 1}), horizon=0)


@given(st.data())
def test_omega_is_certified(data: st.DataObject) -> None:
    """Random nonproper series are certified."""
    s = data.draw(strategies.series(NAT, bound=2))
    if s.constant_term().is_zero:
        s += TruncatedSeries.one(NAT, AB, 2)
    assert analysis.certify_omega(s).passed


def test_single_letter_alphabet() -> None:
    """Omega powers over a one-letter alphabet."""
    s = TruncatedSeries.one(NAT, Alphabet(("x",)), 1) + TruncatedSeries.letter(NAT, Alphabet(("x",)), 1, "x")
    assert analysis.omega_power(s).to_dict() == {"eps": "1", "x": "inf"}
