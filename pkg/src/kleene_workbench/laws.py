"""Named, seeded invariant suites covering every module.

A law samples its inputs from a per-trial random generator and returns a
:class:`Trial`, or ``None`` when the sampled inputs fall outside its
hypotheses. Trial seeds derive from (seed, law name, trial index) only, so
results do not depend on which other laws run or on thread scheduling.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import random
from typing import TYPE_CHECKING

from frozendict import frozendict

from kleene_workbench import analysis, automata, enums, exceptions, ids, matrix, sampling, semiring, series, simulation
from kleene_workbench.schemas import files, reports
from kleene_workbench.series import Alphabet, TruncatedSeries

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(__name__)

MAX_MATRIX_DIM = 5
MAX_LITERAL_DIM = 4
MAX_EXPR_SIZE = 12
SEARCH_LIMIT = 2**12


class UnknownSuiteError(exceptions.BadParameterError):
    def __init__(self, *, names: list[str]) -> None:
        super().__init__(f"Unknown suite(s): {', '.join(names)}")


@dataclasses.dataclass(frozen=True, slots=True)
class LawContext:
    instance: ids.SemiringId
    alphabet: Alphabet
    bound: int
    horizon: int
    divergence_bound: int = analysis.DEFAULT_DIVERGENCE_BOUND


@dataclasses.dataclass(frozen=True, slots=True)
class Trial:
    holds: bool
    inputs: dict[str, object]


type LawFn = Callable[[random.Random, LawContext], Trial | None]


@dataclasses.dataclass(frozen=True, slots=True)
class Law:
    name: str
    module: str
    fn: LawFn


REGISTRY: dict[str, Law] = {}


def law(name: str, module: str) -> Callable[[LawFn], LawFn]:
    """Register a law under ``name``."""

    def decorator(fn: LawFn) -> LawFn:
        REGISTRY[name] = Law(name, module, fn)
        return fn

    return decorator


def trial_rng(seed: int, name: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{name}:{index}")


def run_law(lw: Law, ctx: LawContext, *, trials: int, seed: int, workers: int = 1) -> reports.SuiteResult:
    """Run ``trials`` trials; the reproducer is the first failing trial by index."""

    def one(index: int) -> Trial | None:
        return lw.fn(trial_rng(seed, lw.name, index), ctx)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(one, range(trials)))
    else:
        outcomes = [one(index) for index in range(trials)]

    skipped = sum(1 for t in outcomes if t is None)
    passed = sum(1 for t in outcomes if t is not None and t.holds)
    failing = next(((i, t) for i, t in enumerate(outcomes) if t is not None and not t.holds), None)
    reproducer = None if failing is None else {"trial": failing[0], **failing[1].inputs}
    logger.info("Suite %s: %d/%d passed, %d skipped", lw.name, passed, trials, skipped)
    return reports.SuiteResult(name=lw.name, trials=trials, passed=passed, skipped=skipped, reproducer=reproducer)


def run_all(
    ctx: LawContext,
    *,
    trials: int,
    seed: int,
    workers: int = 1,
    names: list[str] | None = None,
) -> reports.AxiomsReport:
    """Run the named laws, or every registered law, in registration order.

    Raises:
        UnknownSuiteError: If a name is not registered.
    """
    if unknown := sorted(set(names or ()) - REGISTRY.keys()):
        raise UnknownSuiteError(names=unknown)
    selected = [lw for lw in REGISTRY.values() if not names or lw.name in names]
    return reports.AxiomsReport(
        semiring=str(ctx.instance),
        seed=seed,
        trials=trials,
        suites=[run_law(lw, ctx, trials=trials, seed=seed, workers=workers) for lw in selected],
    )


def _s(*values: object) -> list[str]:
    return [str(v) for v in values]


# Semiring


@law("star-axioms", "semiring")
def _star_axioms(rng: random.Random, ctx: LawContext) -> Trial:
    a, b = sampling.random_value(rng, ctx.instance), sampling.random_value(rng, ctx.instance)
    return Trial(semiring.check_star_axioms(a, b).passed, {"a": str(a), "b": str(b)})


@law("monotone-star", "semiring")
def _monotone_star(rng: random.Random, ctx: LawContext) -> Trial:
    a, b = sampling.random_value(rng, ctx.instance), sampling.random_value(rng, ctx.instance)
    if not a.leq(b):
        a, b = b, a
    return Trial(semiring.check_monotone_star(a, b), {"a": str(a), "b": str(b)})


@law("positivity", "semiring")
def _positivity(rng: random.Random, ctx: LawContext) -> Trial:
    s = sampling.random_value(rng, ctx.instance)
    return Trial(semiring.check_positivity(s), {"s": str(s)})


@law("order-preservation", "semiring")
def _order_preservation(rng: random.Random, ctx: LawContext) -> Trial:
    a, b, c = (sampling.random_value(rng, ctx.instance) for _ in range(3))
    if not a.leq(b):
        a, b = b, a
    return Trial(semiring.check_order_preservation(a, b, c), {"a": str(a), "b": str(b), "c": str(c)})


@law("semiring-axioms", "semiring")
def _semiring_axioms(rng: random.Random, ctx: LawContext) -> Trial:
    a, b, c = (sampling.random_value(rng, ctx.instance) for _ in range(3))
    z, e = semiring.zero(ctx.instance), semiring.one(ctx.instance)
    holds = (
        (a + b) + c == a + (b + c)
        and a + b == b + a
        and (a * b) * c == a * (b * c)
        and a * (b + c) == a * b + a * c
        and (a + b) * c == a * c + b * c
        and a + z == a
        and a * e == a == e * a
        and a * z == z == z * a
    )
    return Trial(holds, {"a": str(a), "b": str(b), "c": str(c)})


@law("least-pre-fixed-point", "semiring")
def _lpfp(rng: random.Random, ctx: LawContext) -> Trial:
    a, b, x = (sampling.random_value(rng, ctx.instance) for _ in range(3))
    holds = semiring.check_lpfp(a, b, x).passed and semiring.check_lpfp(a, b, x, dual=True).passed
    return Trial(holds, {"a": str(a), "b": str(b), "x": str(x)})


@law("order-coincidence", "semiring")
def _order(rng: random.Random, ctx: LawContext) -> Trial:
    a, b = sampling.random_value(rng, ctx.instance), sampling.random_value(rng, ctx.instance)
    holds = semiring.check_order_coincidence(a, b).coincide
    if (exhaustive := semiring.exhaustive_sum_order(a, b)) is not None:
        holds = holds and exhaustive == a.leq(b)
    if semiring.resolve(ctx.instance).profile.idempotent:
        holds = holds and semiring.check_idempotent_order(a, b)
    return Trial(holds, {"a": str(a), "b": str(b)})


@law("atomistic", "semiring")
def _atomistic(rng: random.Random, ctx: LawContext) -> Trial:
    # two families with equal sums: row and column sums of a 2x2 grid with at most 3 nonzero cells
    z = semiring.zero(ctx.instance)
    cells = [sampling.random_finite_value(rng, ctx.instance, 2) for _ in range(3)] + [z]
    rng.shuffle(cells)
    a = [cells[0] + cells[1], cells[2] + cells[3]]
    b = [cells[0] + cells[2], cells[1] + cells[3]]
    report = semiring.atomistic_witness(a, b, max_k=3)
    return Trial(report.found, {"a": _s(*a), "b": _s(*b)})


# Matrix


def _square(rng: random.Random, ctx: LawContext, high: int = MAX_MATRIX_DIM) -> matrix.KMatrix:
    n = rng.randint(1, high)
    return sampling.random_matrix(rng, ctx.instance, n, n)


@law("matrix-partition-invariance", "matrix")
def _partition(rng: random.Random, ctx: LawContext) -> Trial:
    m = _square(rng, ctx)
    canonical = m.star()
    holds = all(m.star(split=k) == canonical for k in range(1, m.rows))
    if m.rows <= MAX_LITERAL_DIM:
        holds = holds and m.star(literal=True) == canonical
    return Trial(holds, {"M": str(m)})


@law("matrix-fixed-point", "matrix")
def _matrix_fixed_point(rng: random.Random, ctx: LawContext) -> Trial:
    m = _square(rng, ctx)
    s, e = m.star(), matrix.KMatrix.identity(ctx.instance, m.rows)
    return Trial(s == m * s + e and s == s * m + e, {"M": str(m)})


@law("matrix-sum-product-star", "matrix")
def _matrix_sum_product(rng: random.Random, ctx: LawContext) -> Trial:
    n = rng.randint(1, MAX_MATRIX_DIM)
    a = sampling.random_matrix(rng, ctx.instance, n, n)
    b = sampling.random_matrix(rng, ctx.instance, n, n)
    e = matrix.KMatrix.identity(ctx.instance, n)
    sum_star = (a + b).star() == (a.star() * b).star() * a.star()
    product_star = (a * b).star() == e + a * (b * a).star() * b
    return Trial(sum_star and product_star, {"A": str(a), "B": str(b)})


@law("block-lower-triangular", "matrix")
def _lower_triangular(rng: random.Random, ctx: LawContext) -> Trial:
    n = rng.randint(2, MAX_MATRIX_DIM)
    k = rng.randint(1, n - 1)
    m = sampling.random_matrix(rng, ctx.instance, n, n)
    z = semiring.zero(ctx.instance)
    rows = [[z if i < k <= j else m[i, j] for j in range(n)] for i in range(n)]
    lower = matrix.KMatrix.from_block(ctx.instance, rows)
    s = lower.star()
    return Trial(all(s[i, j].is_zero for i in range(k) for j in range(k, n)), {"M": str(lower), "k": k})


@law("diagonal-star", "matrix")
def _diagonal_star(rng: random.Random, ctx: LawContext) -> Trial:
    d = sampling.random_diagonal(rng, ctx.instance, rng.randint(1, MAX_MATRIX_DIM))
    s = d.star()
    z = semiring.zero(ctx.instance)
    holds = all(s[i, j] == (d[i, i].star() if i == j else z) for i in range(d.rows) for j in range(d.cols))
    return Trial(holds, {"D": str(d)})


@law("functorial-star", "matrix")
def _functorial(rng: random.Random, ctx: LawContext) -> Trial:
    a, b, c = sampling.commuting_triple(rng, ctx.instance, rng.randint(1, 4))
    report = matrix.functorial_check(a, b, c)
    return Trial(report.premise and report.passed, {"A": str(a), "B": str(b), "C": str(c)})


# Series


def _series(rng: random.Random, ctx: LawContext, *, proper: bool = False) -> TruncatedSeries:
    return sampling.random_series(rng, ctx.instance, ctx.alphabet, ctx.bound, proper=proper)


@law("series-geometric-star", "series")
def _geometric(rng: random.Random, ctx: LawContext) -> Trial:
    r = _series(rng, ctx, proper=True)
    return Trial(r.star() == r.geometric_star(), {"r": r.to_dict()})


@law("series-nonproper-reduction", "series")
def _nonproper(rng: random.Random, ctx: LawContext) -> Trial:
    r = _series(rng, ctx)
    k_star = r.constant_term().star()
    rhs = r.proper_part().scale(k_star).star() * TruncatedSeries.constant(k_star, ctx.alphabet, ctx.bound)
    return Trial(r.star() == rhs, {"r": r.to_dict()})


@law("series-fixed-point", "series")
def _series_fixed_point(rng: random.Random, ctx: LawContext) -> Trial:
    r = _series(rng, ctx)
    s = r.star()
    return Trial(s == r * s + TruncatedSeries.one(ctx.instance, ctx.alphabet, ctx.bound), {"r": r.to_dict()})


@law("series-locality", "series")
def _locality(rng: random.Random, ctx: LawContext) -> Trial:
    r = _series(rng, ctx)
    length = rng.randint(0, ctx.bound)
    word = tuple(rng.choice(ctx.alphabet.letters) for _ in range(length))
    noise = sampling.random_series(rng, ctx.instance, ctx.alphabet, ctx.bound, density=0.5)
    changed = r.restrict(length)
    changed = TruncatedSeries(
        ctx.instance,
        ctx.alphabet,
        ctx.bound,
        frozendict({**changed.coeffs, **{w: v for w, v in noise.coeffs.items() if len(w) > length}}),
    )
    return Trial(r.star().coeff(word) == changed.star().coeff(word), {"r": r.to_dict(), "word": str(word)})


@law("series-truncation-coherence", "series")
def _truncation(rng: random.Random, ctx: LawContext) -> Trial:
    r, s = _series(rng, ctx), _series(rng, ctx)
    k = sampling.random_value(rng, ctx.instance)
    lower = rng.randint(0, ctx.bound)
    rl, sl = r.restrict(lower), s.restrict(lower)
    holds = (
        (r + s).restrict(lower) == rl + sl
        and (r * s).restrict(lower) == rl * sl
        and r.star().restrict(lower) == rl.star()
        and r.scale(k).restrict(lower) == rl.scale(k)
    )
    return Trial(holds, {"r": r.to_dict(), "s": s.to_dict(), "k": str(k), "lower": lower})


@law("series-order", "series")
def _series_order(rng: random.Random, ctx: LawContext) -> Trial:
    r, s = _series(rng, ctx), _series(rng, ctx)
    holds = r.leq(r + s) and s.leq(r + s)
    if semiring.resolve(ctx.instance).profile.idempotent:
        holds = holds and r.leq(s) == (r + s == s)
    return Trial(holds, {"r": r.to_dict(), "s": s.to_dict()})


@law("scalar-star", "series")
def _scalar_star(rng: random.Random, ctx: LawContext) -> Trial:
    k = sampling.random_value(rng, ctx.instance)
    return Trial(series.check_scalar_star(k, ctx.alphabet, ctx.bound).holds, {"k": str(k)})


# Automata


@law("kleene-agreement", "automata")
def _kleene(rng: random.Random, ctx: LawContext) -> Trial:
    e = sampling.random_expr(rng, ctx.instance, ctx.alphabet, rng.randint(1, MAX_EXPR_SIZE))
    target = automata.SeriesAlgebra(ctx.instance, ctx.alphabet, ctx.bound)
    compiled = automata.behavior(automata.compile_expr(e, ctx.instance, ctx.alphabet), ctx.bound)
    return Trial(compiled == automata.eval_expr(e, target, target.letters()), {"expr": str(e)})


@law("compositional-behavior", "automata")
def _compositional(rng: random.Random, ctx: LawContext) -> Trial:
    a = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 3))
    b = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 3))
    k = sampling.random_value(rng, ctx.instance)
    ba, bb = automata.behavior(a, ctx.bound), automata.behavior(b, ctx.bound)
    holds = (
        automata.behavior(automata.sum_automaton(a, b), ctx.bound) == ba + bb
        and automata.behavior(automata.product_automaton(a, b), ctx.bound) == ba * bb
        and automata.behavior(automata.scale_automaton(k, a), ctx.bound) == ba.scale(k)
        and automata.behavior(automata.star_automaton(a), ctx.bound) == ba.star()
    )
    return Trial(holds, {"A": automata.to_file(a).model_dump(), "B": automata.to_file(b).model_dump(), "k": str(k)})


@law("behavior-via-star", "automata")
def _via_star(rng: random.Random, ctx: LawContext) -> Trial:
    a = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 3))
    return Trial(
        automata.behavior(a, ctx.bound) == automata.behavior_via_star(a, ctx.bound),
        {"A": automata.to_file(a).model_dump()},
    )


@law("hsharp-well-defined", "automata")
def _hsharp(rng: random.Random, ctx: LawContext) -> Trial | None:
    if ctx.instance != ids.BOOLEAN:
        return None
    pair = sampling.equivalent_pair(rng, ctx.instance, ctx.alphabet, rng.randint(1, 8))
    h = {letter: sampling.random_matrix(rng, ctx.instance, 2, 2) for letter in ctx.alphabet}
    left = automata.hsharp(automata.compile_expr(pair.left, ctx.instance, ctx.alphabet), 2, h)
    right = automata.hsharp(automata.compile_expr(pair.right, ctx.instance, ctx.alphabet), 2, h)
    return Trial(left == right, {"left": str(pair.left), "right": str(pair.right), "h": {a: str(m) for a, m in h.items()}})


@law("automaton-round-trip", "automata")
def _round_trip(rng: random.Random, ctx: LawContext) -> Trial:
    a = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 4))
    text = automata.to_file(a).model_dump_json()
    return Trial(automata.from_file(files.AutomatonFile.model_validate_json(text)) == a, {"A": text})


# Simulation


@law("simulation-preserves-behavior", "simulation")
def _sim_preserves(rng: random.Random, ctx: LawContext) -> Trial:
    b = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 2))
    a, x = sampling.merge_automaton(rng, b, b.dim + rng.randint(0, 2))
    merged = simulation.SimulationWitness(x, a, b)
    holds = simulation.is_simulation(merged) and merged.is_strong and simulation.preserves_behavior(a, b, ctx.bound)
    inputs: dict[str, object] = {
        "A": automata.to_file(a).model_dump(),
        "B": automata.to_file(b).model_dump(),
        "X": str(x),
    }
    if semiring.carrier(ctx.instance) is None:
        return Trial(holds, inputs)

    # independent pair: equal behaviour is not built in
    c = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 2))
    d = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 2))
    inputs |= {"C": automata.to_file(c).model_dump(), "D": automata.to_file(d).model_dump()}
    found: list[simulation.SimulationWitness] = []
    for source, target in ((a, b), (c, d)):
        try:
            found += simulation.search_simulation(source, target, max_candidates=SEARCH_LIMIT)
        except simulation.SearchLimitError:
            continue
    holds = holds and all(
        simulation.is_simulation(w) and simulation.preserves_behavior(w.source, w.target, ctx.bound) for w in found
    )
    return Trial(holds, inputs)


@law("simulation-compose", "simulation")
def _sim_compose(rng: random.Random, ctx: LawContext) -> Trial:
    c = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 2))
    b, y = sampling.merge_automaton(rng, c, c.dim + rng.randint(0, 1))
    a, x = sampling.merge_automaton(rng, b, b.dim + rng.randint(0, 1))
    composed = simulation.compose(simulation.SimulationWitness(x, a, b), simulation.SimulationWitness(y, b, c))
    holds = simulation.is_simulation(composed) and enums.MatrixShapeKind.functional in composed.shape.matches
    return Trial(holds, {"X": str(x), "Y": str(y)})


@law("chain-preserves-behavior", "simulation")
def _chain(rng: random.Random, ctx: LawContext) -> Trial:
    b = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 2))
    a, x = sampling.merge_automaton(rng, b, b.dim + rng.randint(0, 2))
    c, y = sampling.merge_automaton(rng, b, b.dim + rng.randint(0, 2))
    chain = simulation.SimulationChain(
        a,
        (
            simulation.ChainLink(b, x, enums.Orientation.forward),
            simulation.ChainLink(c, y, enums.Orientation.backward),
        ),
    )
    report = simulation.verify_chain(chain, ctx.bound)
    return Trial(report.valid and report.strong and report.behaviors_equal, {"X": str(x), "Y": str(y)})


# Analysis


@law("decomposition-round-trip", "analysis")
def _decomposition(rng: random.Random, ctx: LawContext) -> Trial | None:
    if semiring.carrier(ctx.instance) is None:
        return None
    a = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 5))
    d = analysis.decompose(a)
    return Trial(analysis.reconstruct(d, ctx.bound) == automata.behavior(a, ctx.bound), {"A": automata.to_file(a).model_dump()})


@law("level-sets-partition", "analysis")
def _partition_words(rng: random.Random, ctx: LawContext) -> Trial | None:
    if semiring.carrier(ctx.instance) is None:
        return None
    a = sampling.random_automaton(rng, ctx.instance, ctx.alphabet, rng.randint(1, 4))
    acceptors = [part.acceptor for part in analysis.decompose(a, include_zero=True).parts]
    holds = all(sum(d.accepts(w) for d in acceptors) == 1 for w in ctx.alphabet.words(ctx.bound))
    return Trial(holds, {"A": automata.to_file(a).model_dump()})


def _nonproper_nat(rng: random.Random, ctx: LawContext) -> TruncatedSeries:
    s = sampling.random_series(rng, ctx.instance, ctx.alphabet, ctx.bound)
    k = sampling.random_value(rng, ctx.instance, nonzero=True)
    return s.proper_part() + TruncatedSeries.constant(k, ctx.alphabet, ctx.bound)


@law("omega-oracle", "analysis")
def _omega(rng: random.Random, ctx: LawContext) -> Trial | None:
    if ctx.instance != ids.NAT_INF:
        return None
    s = _nonproper_nat(rng, ctx)
    return Trial(analysis.certify_omega(s, ctx.horizon, ctx.divergence_bound).passed, {"s": s.to_dict()})


@law("omega-absorption", "analysis")
def _absorption(rng: random.Random, ctx: LawContext) -> Trial | None:
    if ctx.instance != ids.NAT_INF:
        return None
    s = _nonproper_nat(rng, ctx)
    r = sampling.random_series(rng, ctx.instance, ctx.alphabet, ctx.bound)
    u = sampling.random_series(rng, ctx.instance, ctx.alphabet, ctx.bound)
    t = s.star() * r + analysis.omega_power(s) * u
    return Trial(s * t + r == t, {"s": s.to_dict(), "r": r.to_dict(), "u": u.to_dict()})
