"""Level sets of image-finite behaviours and omega powers of nat-inf series."""

from __future__ import annotations

import collections
import dataclasses
import logging
from typing import TYPE_CHECKING

from frozendict import frozendict

from kleene_workbench import enums, exceptions, ids, matrix, semiring
from kleene_workbench.automata import WeightedAutomaton
from kleene_workbench.schemas import files, reports
from kleene_workbench.series import Alphabet, TruncatedSeries, Word

if TYPE_CHECKING:
    from collections.abc import Iterator

logger = logging.getLogger(__name__)

DEFAULT_DIVERGENCE_BOUND = 10**6


class ProperSeriesError(exceptions.UnsupportedError):
    """Omega power requested for a proper series."""

    def __init__(self) -> None:
        super().__init__(
            "The series is proper (its constant term is 0); x = sx + r then has the unique solution s*r, use the star",
        )


class OmegaUnsupportedError(exceptions.UnsupportedError):
    def __init__(self, *, instance: ids.SemiringId) -> None:
        super().__init__(f"Omega powers are only available over {ids.NAT_INF}, not {instance}")


def default_horizon(bound: int) -> int:
    """Iteration horizon used when none is configured."""
    return 2 * bound + 8


@dataclasses.dataclass(frozen=True, slots=True)
class LevelSetDfa:
    """Deterministic automaton over the reachable vectors αM_w.

    States are numbered in breadth-first discovery order with state 0 = α.
    When ``accepting`` is set the DFA is the acceptor of one level set;
    otherwise it accepts every word.
    """

    instance: ids.SemiringId
    alphabet: Alphabet
    states: tuple[matrix.KMatrix, ...]
    transitions: frozendict[str, tuple[int, ...]]
    outputs: tuple[semiring.SemiringValue, ...]
    accepting: frozenset[int] | None = None

    def run(self, word: Word) -> int:
        self.alphabet.check_word(word)
        state = 0
        for letter in word:
            state = self.transitions[letter][state]
        return state

    def output(self, word: Word) -> semiring.SemiringValue:
        """Coefficient of ``word`` in the analysed behaviour."""
        return self.outputs[self.run(word)]

    def accepts(self, word: Word) -> bool:
        return self.accepting is None or self.run(word) in self.accepting

    def language(self, bound: int) -> Iterator[Word]:
        """Accepted words up to ``bound``, in length-lexicographic order."""
        return (word for word in self.alphabet.words(bound) if self.accepts(word))

    def values(self) -> list[semiring.SemiringValue]:
        """Distinct outputs in canonical order."""
        return [v for v in semiring.carrier(self.instance) or () if v in self.outputs]

    def acceptor(self, value: semiring.SemiringValue) -> LevelSetDfa:
        """The DFA accepting exactly the words whose coefficient is ``value``."""
        return dataclasses.replace(
            self,
            accepting=frozenset(i for i, out in enumerate(self.outputs) if out == value),
        )

    def embedding(self) -> matrix.KMatrix:
        """Matrix whose rows are the states; it is a simulation of the analysed automaton by this DFA."""
        return matrix.KMatrix(self.instance, tuple(state.entries[0] for state in self.states))

    def to_file(self) -> files.DfaFile:
        return files.DfaFile(
            semiring=str(self.instance),
            alphabet=list(self.alphabet),
            states=[[files.from_scalar(v.value) for v in state.entries[0]] for state in self.states],
            transitions={letter: list(self.transitions[letter]) for letter in self.alphabet},
            outputs=[files.from_scalar(v.value) for v in self.outputs],
        )

    def to_automaton(self, *, name: str | None = None) -> WeightedAutomaton:
        """The DFA as a weighted automaton with the outputs as final weights."""
        z, e = semiring.zero(self.instance), semiring.one(self.instance)
        n = len(self.states)
        return WeightedAutomaton(
            self.instance,
            self.alphabet,
            matrix.KMatrix(self.instance, (tuple(e if j == 0 else z for j in range(n)),)),
            frozendict(
                {
                    letter: matrix.KMatrix(
                        self.instance,
                        tuple(tuple(e if j == targets[i] else z for j in range(n)) for i in range(n)),
                    )
                    for letter, targets in self.transitions.items()
                },
            ),
            matrix.KMatrix(self.instance, tuple((out,) for out in self.outputs)),
            name,
        )


@dataclasses.dataclass(frozen=True, slots=True)
class DecompositionPart:
    value: semiring.SemiringValue
    acceptor: LevelSetDfa


@dataclasses.dataclass(frozen=True, slots=True)
class Decomposition:
    """Behaviour written as Σ k_i·(characteristic series of L_i) with disjoint L_i."""

    instance: ids.SemiringId
    alphabet: Alphabet
    parts: tuple[DecompositionPart, ...] = ()


def image_finite_analysis(a: WeightedAutomaton) -> LevelSetDfa:
    """Close {α} under v ↦ vM_a breadth-first, in alphabet order.

    Raises:
        InfiniteCarrierError: If the instance has an infinite carrier.
    """
    if semiring.carrier(a.instance) is None:
        raise semiring.InfiniteCarrierError(instance=a.instance, operation="enumerate reachable vectors")

    index: dict[matrix.KMatrix, int] = {a.alpha: 0}
    states = [a.alpha]
    targets: dict[str, list[int]] = {letter: [] for letter in a.alphabet}
    queue = collections.deque([a.alpha])
    while queue:
        v = queue.popleft()
        for letter in a.alphabet:
            w = v * a.transitions[letter]
            if w not in index:
                index[w] = len(states)
                states.append(w)
                queue.append(w)
            targets[letter].append(index[w])

    logger.debug("Level-set DFA with %d states", len(states))
    return LevelSetDfa(
        a.instance,
        a.alphabet,
        tuple(states),
        frozendict({letter: tuple(t) for letter, t in targets.items()}),
        tuple((v * a.beta)[0, 0] for v in states),
    )


def decompose(a: WeightedAutomaton, *, include_zero: bool = False) -> Decomposition:
    """One acceptor per nonzero coefficient value, in canonical value order."""
    dfa = image_finite_analysis(a)
    return Decomposition(
        a.instance,
        a.alphabet,
        tuple(
            DecompositionPart(value, dfa.acceptor(value))
            for value in dfa.values()
            if include_zero or not value.is_zero
        ),
    )


def reconstruct(d: Decomposition, bound: int) -> TruncatedSeries:
    """Σ k_i·(characteristic series of the i-th level set), truncated at ``bound``."""
    result = TruncatedSeries.zero(d.instance, d.alphabet, bound)
    for part in d.parts:
        result += TruncatedSeries.characteristic(d.instance, d.alphabet, bound, part.acceptor.language(bound)).scale(
            part.value,
        )
    return result


def omega_power(s: TruncatedSeries) -> TruncatedSeries:
    """sup_n sⁿ over nat-inf in closed form k^ω + k′·s₀⁺ with k = (s, ε) and s₀ the proper part.

    k^ω is 1 when k = 1 and ∞ otherwise; k′ is ∞ because k^ω ≥ 1.

    Raises:
        OmegaUnsupportedError: Outside nat-inf.
        ProperSeriesError: If (s, ε) = 0.
    """
    if s.instance != ids.NAT_INF:
        raise OmegaUnsupportedError(instance=s.instance)
    k = s.constant_term()
    if k.is_zero:
        raise ProperSeriesError
    k_omega = semiring.one(s.instance) if k == semiring.one(s.instance) else semiring.SemiringValue(s.instance, semiring.INF)
    k_prime = semiring.SemiringValue(s.instance, semiring.INF)
    s0 = s.proper_part()
    return TruncatedSeries.constant(k_omega, s.alphabet, s.bound) + (s0 * s0.star()).scale(k_prime)


def omega_iterates(s: TruncatedSeries, horizon: int) -> list[TruncatedSeries]:
    """The powers s¹, …, s^N."""
    iterates: list[TruncatedSeries] = []
    power = s
    for _ in range(horizon):
        iterates.append(power)
        power *= s
    return iterates


def _certify(
    target: semiring.SemiringValue,
    sequence: list[semiring.SemiringValue],
    bound: int,
) -> enums.Certificate:
    if target.value is not semiring.INF:
        return enums.Certificate.attained if sequence and sequence[-1] == target else enums.Certificate.failed
    if any(x.value is semiring.INF for x in sequence):
        return enums.Certificate.reached_infinity
    if any(semiring.finite(x.value) > bound for x in sequence):
        return enums.Certificate.bound_crossed
    if len(sequence) >= 2 and semiring.finite(sequence[-1].value) > semiring.finite(sequence[-2].value):  # ruff: ignore[magic-value-comparison]
        return enums.Certificate.strict_growth
    return enums.Certificate.failed


def certify_omega(
    s: TruncatedSeries,
    horizon: int | None = None,
    bound: int = DEFAULT_DIVERGENCE_BOUND,
) -> reports.OmegaReport:
    """Check the closed form against the iterates s¹, …, s^N on every word up to the truncation bound.

    Each coefficient sequence must be nondecreasing and dominated by the closed
    form. A finite value must be attained by step N. An infinite value is
    certified when an iterate is ∞, crosses ``bound``, or still grows strictly
    between steps N−1 and N; in nat-inf a coefficient sequence of sⁿ with
    (s, ε) ≥ 1 is either eventually constant or strictly increasing.
    """
    horizon = default_horizon(s.bound) if horizon is None else horizon
    if horizon < 1:
        msg = f"Iteration horizon must be positive, got {horizon}"
        raise exceptions.BadParameterError(msg)
    closed = omega_power(s)
    iterates = omega_iterates(s, horizon)
    monotone = all(x.leq(y) for x, y in zip(iterates, iterates[1:], strict=False))
    dominated = all(x.leq(closed) for x in iterates)
    entries = [
        reports.OmegaEntry(
            word=s.alphabet.format_word(word),
            value=str(closed.coeff(word)),
            certificate=_certify(closed.coeff(word), [x.coeff(word) for x in iterates], bound),
        )
        for word in s.alphabet.words(s.bound)
    ]
    logger.debug("Certified the omega power against %d iterates", horizon)
    return reports.OmegaReport(horizon=horizon, bound=bound, monotone=monotone, dominated=dominated, entries=entries)
