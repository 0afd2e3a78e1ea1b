"""One function per command; each returns the report to print and the exit status."""

from __future__ import annotations

import dataclasses
import json
import logging
import random
from typing import TYPE_CHECKING

from kleene_workbench import analysis, automata, laws, matrix, sampling, series, simulation
from kleene_workbench.cli import grammar
from kleene_workbench.schemas import files, reports

if TYPE_CHECKING:
    import pathlib

    from pydantic import BaseModel

    from kleene_workbench import config, enums

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1


@dataclasses.dataclass(frozen=True, slots=True)
class Outcome:
    """What a command prints: ``report`` with ``--json``, else ``lines``."""

    report: BaseModel
    lines: list[str]
    code: int = EXIT_OK

    def render(self, *, json_output: bool) -> str:
        return self.report.model_dump_json(indent=2) if json_output else "\n".join(self.lines)


def _expr(text: str, cfg: config.CliConfig) -> automata.RationalExpr:
    return grammar.parse_expr(text, cfg.semiring, cfg.alphabet)


def _compile(text: str, cfg: config.CliConfig) -> automata.WeightedAutomaton:
    return automata.compile_expr(_expr(text, cfg), cfg.semiring, cfg.alphabet)


def read_automaton(path: pathlib.Path) -> automata.WeightedAutomaton:
    return automata.from_file(files.AutomatonFile.model_validate_json(path.read_text()))


def read_witness(path: pathlib.Path) -> matrix.KMatrix:
    witness = files.WitnessFile.model_validate_json(path.read_text())
    return matrix.KMatrix.of(witness.instance, witness.scalars)


def _series_lines(s: series.TruncatedSeries) -> list[str]:
    return s.lines() or ["(all coefficients are 0)"]


def cmd_eval(text: str, cfg: config.CliConfig) -> Outcome:
    """Evaluate an expression in the series semiring and through its compiled automaton."""
    e = _expr(text, cfg)
    target = automata.SeriesAlgebra(cfg.semiring, cfg.alphabet, cfg.bound)
    value = automata.eval_expr(e, target, target.letters())
    compiled = automata.behavior(automata.compile_expr(e, cfg.semiring, cfg.alphabet), cfg.bound)
    agrees = value == compiled
    report = reports.EvalReport(
        expression=str(e),
        semiring=str(cfg.semiring),
        bound=cfg.bound,
        coefficients=value.to_dict(),
        compiled_agrees=agrees,
    )
    lines = _series_lines(value)
    if not agrees:
        lines.append("compiled automaton disagrees:")
        lines.extend(_series_lines(compiled))
    return Outcome(report, lines, EXIT_OK if agrees else EXIT_NEGATIVE)


def _equivalence_outcome(report: reports.EquivalenceReport) -> Outcome:
    if report.equivalent:
        return Outcome(report, [f"EQUIV up to L={report.bound}"])
    return Outcome(
        report,
        [f"DIFFER at {report.word}: {report.left} vs {report.right}"],
        EXIT_NEGATIVE,
    )


def cmd_equiv(left: str, right: str, cfg: config.CliConfig) -> Outcome:
    return _equivalence_outcome(automata.equivalent(_compile(left, cfg), _compile(right, cfg), cfg.bound))


def cmd_equiv_files(left: pathlib.Path, right: pathlib.Path, cfg: config.CliConfig) -> Outcome:
    return _equivalence_outcome(automata.equivalent(read_automaton(left), read_automaton(right), cfg.bound))


def cmd_compile(text: str, cfg: config.CliConfig, *, name: str | None = None) -> Outcome:
    """Compile an expression; the automaton JSON is printed in both output modes."""
    f = automata.to_file(_compile(text, cfg).renamed(name))
    return Outcome(f, [f.model_dump_json(indent=2)])


def _simulation_lines(report: reports.SimulationReport) -> list[str]:
    lines = [f"initial: {'ok' if report.initial else 'FAIL'}"]
    lines.extend(f"letter {letter}: {'ok' if ok else 'FAIL'}" for letter, ok in report.transitions.items())
    lines.append(f"final: {'ok' if report.final else 'FAIL'}")
    lines.append(f"shape: {report.shape}")
    lines.append("SIMULATION" if report.valid else "NOT A SIMULATION")
    return lines


def cmd_simcheck(source: pathlib.Path, target: pathlib.Path, witness: pathlib.Path, cfg: config.CliConfig) -> Outcome:
    a, b = read_automaton(source), read_automaton(target)
    report = simulation.check_simulation(a, b, read_witness(witness))
    logger.debug("Checked a simulation over %s", cfg.semiring)
    return Outcome(report, _simulation_lines(report), EXIT_OK if report.valid else EXIT_NEGATIVE)


def cmd_chain(path: pathlib.Path, cfg: config.CliConfig) -> Outcome:
    """Verify a chain of simulations read from a chain file."""
    f = files.ChainFile.model_validate_json(path.read_text())
    chain = simulation.SimulationChain(
        automata.from_file(f.start),
        tuple(
            simulation.ChainLink(
                automata.from_file(link.automaton),
                matrix.KMatrix.of(f.instance, [[files.to_scalar(x) for x in row] for row in link.matrix]),
                link.orientation,
            )
            for link in f.links
        ),
    )
    report = simulation.verify_chain(chain, cfg.bound)
    lines = []
    for index, link in enumerate(report.links):
        lines.append(f"link {index}: {'ok' if link.valid else 'FAIL'} ({link.shape})")
    lines.append(f"strong: {'yes' if report.strong else 'no'}")
    lines.append(f"behaviours equal up to L={cfg.bound}: {'yes' if report.behaviors_equal else 'no'}")
    lines.append("VALID CHAIN" if report.valid else f"BROKEN at link {report.broken_link}")
    return Outcome(report, lines, EXIT_OK if report.valid else EXIT_NEGATIVE)


def cmd_simsearch(
    source: pathlib.Path,
    target: pathlib.Path,
    cfg: config.CliConfig,
    *,
    shape: enums.MatrixShapeKind | None = None,
) -> Outcome:
    a, b = read_automaton(source), read_automaton(target)
    found = simulation.search_simulation(
        a,
        b,
        shape,
        max_candidates=cfg.max_candidates,
        workers=cfg.workers,
    )
    report = reports.SearchReport(
        source=str(a),
        target=str(b),
        shape=shape,
        witnesses=[[[str(v) for v in row] for row in w.x.entries] for w in found],
        strong=[w.is_strong for w in found],
    )
    lines = [f"{report.found} simulation(s)"]
    for index, w in enumerate(found):
        lines.append(f"X{index} ({w.shape.kind}{', strong' if w.is_strong else ''}):")
        lines.extend(f"  {' '.join(str(v) for v in row)}" for row in w.x.entries)
    return Outcome(report, lines, EXIT_OK if found else EXIT_NEGATIVE)


def cmd_decompose(path: pathlib.Path, cfg: config.CliConfig, *, dfa_out: pathlib.Path | None = None) -> Outcome:
    """Split an image-finite behaviour into level sets; optionally write the level-set DFA."""
    a = read_automaton(path)
    dfa = analysis.image_finite_analysis(a)
    if dfa_out is not None:
        dfa_out.write_text(dfa.to_file().model_dump_json(indent=2) + "\n")
    d = analysis.decompose(a)
    report = reports.DecomposeReport(
        semiring=str(a.instance),
        bound=cfg.bound,
        states=len(dfa.states),
        level_sets=[
            reports.LevelSet(
                value=str(part.value),
                words=[a.alphabet.format_word(w) for w in part.acceptor.language(cfg.bound)],
            )
            for part in d.parts
        ],
        reconstructs=analysis.reconstruct(d, cfg.bound) == automata.behavior(a, cfg.bound),
    )
    lines = [f"{len(report.level_sets)} level set(s), {report.states} DFA state(s)"]
    lines.extend(f"{entry.value}: {' '.join(entry.words) or '(no words up to L)'}" for entry in report.level_sets)
    return Outcome(report, lines)


def cmd_omega(text: str, cfg: config.CliConfig) -> Outcome:
    """Closed-form omega power of an expression's behaviour, certified against its iterates."""
    target = automata.SeriesAlgebra(cfg.semiring, cfg.alphabet, cfg.bound)
    s = automata.eval_expr(_expr(text, cfg), target, target.letters())
    report = analysis.certify_omega(s, cfg.effective_horizon, cfg.divergence_bound)
    lines = [f"{entry.word}: {entry.value} ({entry.certificate})" for entry in report.entries]
    if not report.passed:
        lines.append("CERTIFICATION FAILED")
    return Outcome(report, lines, EXIT_OK if report.passed else EXIT_NEGATIVE)


def cmd_axioms(cfg: config.CliConfig, *, suites: list[str] | None = None) -> Outcome:
    """Run every invariant suite, or the named ones."""
    ctx = laws.LawContext(cfg.semiring, cfg.alphabet, cfg.bound, cfg.effective_horizon, cfg.divergence_bound)
    report = laws.run_all(ctx, trials=cfg.trials, seed=cfg.seed, workers=cfg.workers, names=suites)
    lines = []
    for suite in report.suites:
        skipped = f", {suite.skipped} skipped" if suite.skipped else ""
        lines.append(f"{suite.name}: {suite.passed}/{suite.trials} passed{skipped}")
        if suite.reproducer is not None:
            lines.append(f"  reproducer: {json.dumps(suite.reproducer, sort_keys=True, default=str)}")
    lines.append("ALL SUITES PASS" if report.ok else "FAILURES")
    return Outcome(report, lines, EXIT_OK if report.ok else EXIT_NEGATIVE)


def cmd_probe(cfg: config.CliConfig, *, samples: int, size: int) -> Outcome:
    """Sample equivalent expression pairs and count those joined by one or two simulations."""
    rng = random.Random(f"{cfg.seed}:probe")
    pairs = []
    for _ in range(samples):
        pair = sampling.equivalent_pair(rng, cfg.semiring, cfg.alphabet, size)
        pairs.append(
            (
                automata.compile_expr(pair.left, cfg.semiring, cfg.alphabet),
                automata.compile_expr(pair.right, cfg.semiring, cfg.alphabet),
            ),
        )
    report = simulation.probe_properness(pairs, max_candidates=cfg.max_candidates, workers=cfg.workers)
    lines = [
        f"samples: {report.samples}",
        f"one step: {report.one_step}",
        f"two steps: {report.two_step}",
        f"unconnected: {report.unconnected}",
        f"skipped: {report.skipped}",
    ]
    return Outcome(report, lines)
