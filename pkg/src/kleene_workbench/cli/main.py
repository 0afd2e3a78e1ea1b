"""Kleene workbench command line."""

from __future__ import annotations

import argparse
import logging
import pathlib
import sys
from importlib import metadata
from typing import TYPE_CHECKING

import pydantic

from kleene_workbench import config, enums, exceptions
from kleene_workbench.cli import commands
from kleene_workbench.helpers import logs

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_SEMANTIC = 3

# first match wins
EXIT_CODES: list[tuple[type[Exception], int]] = [
    (exceptions.ParseError, EXIT_USAGE),
    (pydantic.ValidationError, EXIT_USAGE),
    (OSError, EXIT_USAGE),
    (exceptions.BadParameterError, EXIT_SEMANTIC),
    (exceptions.UnsupportedError, EXIT_SEMANTIC),
]

DESCRIPTION = """\
Inductive semirings, weighted automata and their algebraic laws, checked on exact instances.

Semirings: boolean, nat-inf, tropical-nat-inf, chain(n).
Exit codes: 0 success, 1 negative result, 2 parse or schema error, 3 semantic or unsupported.
"""

type Handler = Callable[[argparse.Namespace, config.CliConfig], commands.Outcome]

CONFIG_FLAGS = (
    "semiring",
    "alphabet",
    "bound",
    "seed",
    "trials",
    "max_candidates",
    "workers",
    "horizon",
    "divergence_bound",
    "json_output",
)


def exit_code_for(exc: Exception) -> int | None:
    return next((code for kind, code in EXIT_CODES if isinstance(exc, kind)), None)


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--semiring", help="boolean, nat-inf, tropical-nat-inf or chain(n) (default: nat-inf)")
    parser.add_argument("--alphabet", help="comma-separated letters (default: a,b)")
    parser.add_argument("--len", dest="bound", type=int, help="truncation bound L on word length")
    parser.add_argument("--seed", type=int, help="seed of every random choice")
    parser.add_argument("--trials", type=int, help="randomized trials per suite")
    parser.add_argument("--max-candidates", dest="max_candidates", type=int, help="size limit of searches")
    parser.add_argument("--workers", type=int, help=f"worker threads (default: ${config.WORKERS_ENV} or 1)")
    parser.add_argument("--horizon", type=int, help="iteration horizon of the omega check (default: 2L+8)")
    parser.add_argument("--divergence-bound", dest="divergence_bound", type=int, help="divergence test bound")
    parser.add_argument("--json", dest="json_output", action="store_true", default=None, help="print JSON reports")
    parser.add_argument("--log-level", dest="log_level", help="root log level, e.g. DEBUG")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="kleene",
        description=DESCRIPTION,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {metadata.version('kleene-workbench')}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("eval", lambda ns, cfg: commands.cmd_eval(ns.expr, cfg), "print the truncated behaviour of an expression")
    p.add_argument("expr")

    p = add("equiv", _equiv, "compare two expressions, or two automaton files, up to L")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--files", action="store_true", help="read LEFT and RIGHT as automaton JSON files")

    p = add("compile", _compile, "compile an expression to automaton JSON")
    p.add_argument("expr")
    p.add_argument("--name", help="automaton name")
    p.add_argument("--out", type=pathlib.Path, help="write to a file instead of stdout")

    p = add(
        "simcheck",
        lambda ns, cfg: commands.cmd_simcheck(ns.source, ns.target, ns.witness, cfg),
        "check a simulation matrix between two automata",
    )
    p.add_argument("source", type=pathlib.Path)
    p.add_argument("target", type=pathlib.Path)
    p.add_argument("witness", type=pathlib.Path)

    p = add("chain", lambda ns, cfg: commands.cmd_chain(ns.path, cfg), "verify a chain of simulations")
    p.add_argument("path", type=pathlib.Path)

    p = add(
        "simsearch",
        lambda ns, cfg: commands.cmd_simsearch(ns.source, ns.target, cfg, shape=ns.shape),
        "enumerate simulations over a finite semiring",
    )
    p.add_argument("source", type=pathlib.Path)
    p.add_argument("target", type=pathlib.Path)
    p.add_argument("--shape", type=enums.MatrixShapeKind, choices=list(enums.MatrixShapeKind))

    p = add(
        "decompose",
        lambda ns, cfg: commands.cmd_decompose(ns.path, cfg, dfa_out=ns.dfa_out),
        "split an image-finite behaviour into level sets",
    )
    p.add_argument("path", type=pathlib.Path)
    p.add_argument("--dfa-out", dest="dfa_out", type=pathlib.Path, help="write the level-set DFA as JSON")

    p = add("omega", lambda ns, cfg: commands.cmd_omega(ns.expr, cfg), "omega power of an expression over nat-inf")
    p.add_argument("expr")

    p = add(
        "axioms",
        lambda ns, cfg: commands.cmd_axioms(cfg, suites=ns.suite),
        "run the seeded invariant suites",
    )
    p.add_argument("--suite", action="append", help="run only this suite (repeatable)")

    p = add(
        "probe",
        lambda ns, cfg: commands.cmd_probe(cfg, samples=ns.samples, size=ns.size),
        "count equivalent pairs joined by one or two simulations",
    )
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--size", type=int, default=4, help="expression size")
    return parser


def _equiv(ns: argparse.Namespace, cfg: config.CliConfig) -> commands.Outcome:
    if ns.files:
        return commands.cmd_equiv_files(pathlib.Path(ns.left), pathlib.Path(ns.right), cfg)
    return commands.cmd_equiv(ns.left, ns.right, cfg)


def _compile(ns: argparse.Namespace, cfg: config.CliConfig) -> commands.Outcome:
    outcome = commands.cmd_compile(ns.expr, cfg, name=ns.name)
    if ns.out is not None:
        ns.out.write_text(outcome.render(json_output=True) + "\n")
        return commands.Outcome(outcome.report, [], outcome.code)
    return outcome


def make_config(ns: argparse.Namespace) -> config.CliConfig:
    return config.CliConfig.model_validate(
        {flag: value for flag in CONFIG_FLAGS if (value := getattr(ns, flag, None)) is not None},
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logs.configure_logging(ns.log_level)
    try:
        cfg = make_config(ns)
        outcome: commands.Outcome = ns.handler(ns, cfg)
    except Exception as exc:  # ruff: ignore[blind-except]
        if (code := exit_code_for(exc)) is None:
            raise
        logger.debug("Command failed", exc_info=exc)
        print(f"error: {exc}", file=sys.stderr)  # ruff: ignore[print]
        return code

    if text := outcome.render(json_output=cfg.json_output):
        print(text)  # ruff: ignore[print]
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
