"""Simulations between automata: checking, composition, chains and bounded search.

A matrix X is a simulation A → B of automata A = (α, M, β) and B = (γ, N, δ)
when αX = γ, M_a X = X N_a for every letter a, and β = Xδ.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import itertools
import logging
from typing import TYPE_CHECKING

from kleene_workbench import analysis, automata, enums, exceptions, matrix, semiring
from kleene_workbench.schemas import reports

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from kleene_workbench import ids

logger = logging.getLogger(__name__)

DEFAULT_MAX_CANDIDATES = 2**20
STRONG_SHAPES = frozenset(
    {
        enums.MatrixShapeKind.functional,
        enums.MatrixShapeKind.dual_functional,
        enums.MatrixShapeKind.invertible_diagonal,
    },
)


class SearchLimitError(exceptions.UnsupportedError):
    """Search space larger than the configured limit."""

    def __init__(self, *, size: int, limit: int) -> None:
        super().__init__(f"Search space of {size} candidates exceeds the limit of {limit}")


class EndpointMismatchError(exceptions.BadParameterError):
    """Witnesses or chain links that do not meet."""

    def __init__(self, *, reason: str) -> None:
        super().__init__(f"Simulations do not compose: {reason}")


@dataclasses.dataclass(frozen=True, slots=True)
class SimulationWitness:
    """Matrix X claimed to simulate ``source`` by ``target``."""

    x: matrix.KMatrix
    source: automata.WeightedAutomaton
    target: automata.WeightedAutomaton

    def __post_init__(self) -> None:
        self.source.check_compatible(self.target)
        if self.x.shape != (self.source.dim, self.target.dim):
            raise matrix.DimensionMismatchError(
                operation="simulate with",
                left=self.x.shape,
                right=(self.source.dim, self.target.dim),
            )

    @property
    def shape(self) -> matrix.MatrixShape:
        return matrix.classify(self.x)

    @property
    def is_strong(self) -> bool:
        return bool(self.shape.matches & STRONG_SHAPES)


@dataclasses.dataclass(frozen=True, slots=True)
class ChainLink:
    """Next automaton of a chain and the witness joining it to the previous one.

    ``forward`` links have X: previous → next, ``backward`` links X: next → previous.
    """

    automaton: automata.WeightedAutomaton
    x: matrix.KMatrix
    orientation: enums.Orientation = enums.Orientation.forward


@dataclasses.dataclass(frozen=True, slots=True)
class SimulationChain:
    start: automata.WeightedAutomaton
    links: tuple[ChainLink, ...] = ()

    @property
    def end(self) -> automata.WeightedAutomaton:
        return self.links[-1].automaton if self.links else self.start

    def witnesses(self) -> list[SimulationWitness]:
        """One witness per link, oriented as the link states."""
        result = []
        previous = self.start
        for link in self.links:
            match link.orientation:
                case enums.Orientation.forward:
                    result.append(SimulationWitness(link.x, previous, link.automaton))
                case enums.Orientation.backward:
                    result.append(SimulationWitness(link.x, link.automaton, previous))
            previous = link.automaton
        return result


def _label(a: automata.WeightedAutomaton) -> str:
    return str(a)


def check_simulation(
    a: automata.WeightedAutomaton,
    b: automata.WeightedAutomaton,
    x: matrix.KMatrix,
) -> reports.SimulationReport:
    """Evaluate the three simulation conditions for X: A → B."""
    witness = SimulationWitness(x, a, b)
    return reports.SimulationReport(
        source=_label(a),
        target=_label(b),
        initial=a.alpha * x == b.alpha,
        transitions={letter: a.transitions[letter] * x == x * b.transitions[letter] for letter in a.alphabet},
        final=a.beta == x * b.beta,
        shape=witness.shape.kind,
    )


def is_simulation(witness: SimulationWitness) -> bool:
    return check_simulation(witness.source, witness.target, witness.x).valid


def compose(w1: SimulationWitness, w2: SimulationWitness) -> SimulationWitness:
    """A →X B and B →Y C give A →XY C."""
    if w1.target != w2.source:
        raise EndpointMismatchError(reason=f"{_label(w1.target)} is not {_label(w2.source)}")
    return SimulationWitness(w1.x * w2.x, w1.source, w2.target)


def preserves_behavior(a: automata.WeightedAutomaton, b: automata.WeightedAutomaton, bound: int) -> bool:
    return automata.equivalent(a, b, bound).equivalent


def verify_chain(chain: SimulationChain, bound: int) -> reports.ChainReport:
    """Check every link in its orientation and compare the end behaviours up to ``bound``."""
    try:
        witnesses = chain.witnesses()
    except matrix.DimensionMismatchError as exc:
        raise EndpointMismatchError(reason=str(exc)) from exc

    links = [check_simulation(w.source, w.target, w.x) for w in witnesses]
    broken = next((i for i, link in enumerate(links) if not link.valid), None)
    return reports.ChainReport(
        links=links,
        broken_link=broken,
        strong=all(w.is_strong for w in witnesses),
        bound=bound,
        behaviors_equal=preserves_behavior(chain.start, chain.end, bound),
    )


class _Search:
    """Row-by-row backtracking over X ∈ K^{m×n} in lexicographic order.

    A row i is fixed once it satisfies β_i = X_i δ; the row-i equations of
    M_a X = X N_a are checked as soon as every row they read is fixed, and
    αX = γ when the matrix is complete.
    """

    def __init__(self, a: automata.WeightedAutomaton, b: automata.WeightedAutomaton) -> None:
        self.a = a
        self.b = b
        self.m, self.n = a.dim, b.dim
        self.rows = [
            matrix.KMatrix.row_vector(values)
            for values in itertools.product(semiring.carrier(a.instance) or (), repeat=self.n)
        ]
        # ready[r]: (i, letter) pairs whose row equations read rows 0..r only
        self.ready: list[list[tuple[int, str]]] = [[] for _ in range(self.m)]
        for i in range(self.m):
            for letter, ma in a.transitions.items():
                reads = [k for k in range(self.m) if not ma[i, k].is_zero]
                self.ready[max([i, *reads])].append((i, letter))

    def row_ok(self, i: int, row: matrix.KMatrix) -> bool:
        return (row * self.b.beta)[0, 0] == self.a.beta[i, 0]

    def equations_ok(self, r: int, chosen: Sequence[matrix.KMatrix]) -> bool:
        for i, letter in self.ready[r]:
            ma, nb = self.a.transitions[letter], self.b.transitions[letter]
            lhs = _combine_rows(ma, i, chosen, self.b.instance, self.n)
            if lhs != chosen[i] * nb:
                return False
        return True

    def complete_ok(self, chosen: Sequence[matrix.KMatrix]) -> bool:
        return _combine_rows(self.a.alpha, 0, chosen, self.a.instance, self.n) == self.b.alpha

    def extend(self, chosen: list[matrix.KMatrix]) -> Iterable[matrix.KMatrix]:
        r = len(chosen)
        if r == self.m:
            if self.complete_ok(chosen):
                yield matrix.KMatrix(self.a.instance, tuple(row.entries[0] for row in chosen))
            return
        for row in self.rows:
            if not self.row_ok(r, row):
                continue
            chosen.append(row)
            if self.equations_ok(r, chosen):
                yield from self.extend(chosen)
            chosen.pop()

    def from_first_row(self, row: matrix.KMatrix) -> list[matrix.KMatrix]:
        if not self.row_ok(0, row):
            return []
        chosen = [row]
        if not self.equations_ok(0, chosen):
            return []
        return list(self.extend(chosen))


def _combine_rows(
    coefficients: matrix.KMatrix,
    i: int,
    rows: Sequence[matrix.KMatrix],
    instance: ids.SemiringId,
    width: int,
) -> matrix.KMatrix:
    """Σ_k coefficients[i, k]·rows[k], a row of width ``width``."""
    acc = matrix.KMatrix.zeros(instance, 1, width)
    for k, row in enumerate(rows):
        if not coefficients[i, k].is_zero:
            acc += row.scale(coefficients[i, k])
    return acc


def search_simulation(
    a: automata.WeightedAutomaton,
    b: automata.WeightedAutomaton,
    shape: enums.MatrixShapeKind | None = None,
    *,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    workers: int = 1,
) -> list[SimulationWitness]:
    """Every simulation X: A → B over a finite carrier, in lexicographic order of entries.

    The first row splits the search into independent parts that run on up to
    ``workers`` threads; results are merged in enumeration order.

    Raises:
        InfiniteCarrierError: If the instance has an infinite carrier.
        SearchLimitError: If the candidate space exceeds ``max_candidates``.
    """
    a.check_compatible(b)
    elements = semiring.carrier(a.instance)
    if elements is None:
        raise semiring.InfiniteCarrierError(instance=a.instance, operation="search simulations")
    size = len(elements) ** (a.dim * b.dim)
    if size > max_candidates:
        raise SearchLimitError(size=size, limit=max_candidates)

    search = _Search(a, b)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(search.from_first_row, search.rows))
    else:
        parts = [search.from_first_row(row) for row in search.rows]

    found = [SimulationWitness(x, a, b) for part in parts for x in part]
    logger.debug("Found %d simulations among %d candidates", len(found), size)
    if shape is not None:
        found = [w for w in found if shape in w.shape.matches]
    return found


def probe_properness(
    pairs: Iterable[tuple[automata.WeightedAutomaton, automata.WeightedAutomaton]],
    *,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    workers: int = 1,
) -> reports.ProbeReport:
    """Count equivalent pairs joined by one simulation, or by two through a level-set DFA.

    The level-set DFA D of A always simulates A by the matrix whose rows are its
    reachable vectors, so a simulation between D and B in either direction
    joins A and B in two steps. Pairs whose search space is too large are skipped.
    """
    samples = one_step = two_step = skipped = 0
    for a, b in pairs:
        samples += 1
        try:
            if search_simulation(a, b, max_candidates=max_candidates, workers=workers) or search_simulation(
                b, a, max_candidates=max_candidates, workers=workers
            ):
                one_step += 1
                continue
            d = analysis.image_finite_analysis(a).to_automaton()
            if search_simulation(d, b, max_candidates=max_candidates, workers=workers) or search_simulation(
                b, d, max_candidates=max_candidates, workers=workers
            ):
                two_step += 1
        except SearchLimitError:
            logger.debug("Skipped a pair of dimensions %d and %d", a.dim, b.dim)
            skipped += 1
    return reports.ProbeReport(
        samples=samples,
        one_step=one_step,
        two_step=two_step,
        unconnected=samples - one_step - two_step - skipped,
        skipped=skipped,
    )
