"""Test the seeded invariant suites."""

from __future__ import annotations

import random

import pytest

from kleene_workbench import analysis, ids, laws
from tests import strategies

CONTEXTS = [
    laws.LawContext(instance, strategies.AB, 2, analysis.default_horizon(2)) for instance in strategies.INSTANCES
]


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda ctx: str(ctx.instance))
def test_all_suites_pass(ctx: laws.LawContext) -> None:
    """Every suite passes on every instance."""
    report = laws.run_all(ctx, trials=3, seed=42)
    assert [suite.name for suite in report.suites] == list(laws.REGISTRY)
    failing = {suite.name: suite.reproducer for suite in report.suites if not suite.ok}
    assert failing == {}
    assert report.ok


def test_suites_cover_every_module() -> None:
    """Every module has at least one suite."""
    assert {lw.module for lw in laws.REGISTRY.values()} == {
        "semiring",
        "matrix",
        "series",
        "automata",
        "simulation",
        "analysis",
    }


def test_finite_carrier_suites_skip_on_nat_inf() -> None:
    """Suites needing a finite carrier skip on nat-inf."""
    ctx = laws.LawContext(ids.NAT_INF, strategies.AB, 2, 8)
    report = laws.run_all(ctx, trials=2, seed=0, names=["decomposition-round-trip", "omega-oracle"])
    skipped = {suite.name: suite.skipped for suite in report.suites}
    assert skipped == {"decomposition-round-trip": 2, "omega-oracle": 0}


def test_omega_suites_skip_outside_nat_inf() -> None:
    """Omega suites skip outside nat-inf."""
    ctx = laws.LawContext(ids.BOOLEAN, strategies.AB, 2, 8)
    report = laws.run_all(ctx, trials=2, seed=0, names=["omega-oracle", "omega-absorption"])
    assert all(suite.skipped == 2 for suite in report.suites)
    assert report.ok


def test_unknown_suite() -> None:
    """Unknown suite names are rejected."""
    with pytest.raises(laws.UnknownSuiteError, match=r"no-such-suite"):
        laws.run_all(CONTEXTS[0], trials=1, seed=0, names=["star-axioms", "no-such-suite"])


def test_results_do_not_depend_on_selection_or_workers() -> None:
    """Suite results depend only on the seed."""
    ctx = CONTEXTS[3]
    alone = laws.run_all(ctx, trials=4, seed=9, names=["kleene-agreement"])
    together = laws.run_all(ctx, trials=4, seed=9, workers=3, names=["star-axioms", "kleene-agreement"])
    assert alone.suites[0] == together.suites[1]


def test_trial_rng_is_deterministic() -> None:
    """Trial generators depend only on seed, name and index."""
    assert laws.trial_rng(1, "star-axioms", 2).random() == laws.trial_rng(1, "star-axioms", 2).random()
    assert laws.trial_rng(1, "star-axioms", 2).random() != laws.trial_rng(1, "star-axioms", 3).random()


def _flaky(rng: random.Random, ctx: laws.LawContext) -> laws.Trial | None:
    x = rng.randrange(4)
    if x == 0:
        return None
    return laws.Trial(holds=x != 3, inputs={"x": x, "semiring": str(ctx.instance)})  # ruff: ignore[magic-value-comparison]


def test_reproducer_is_first_failing_trial() -> None:
    """The reproducer is the first failing trial."""
    lw = laws.Law("flaky", "test", _flaky)
    outcomes = [_flaky(laws.trial_rng(5, "flaky", i), CONTEXTS[0]) for i in range(20)]
    result = laws.run_law(lw, CONTEXTS[0], trials=20, seed=5, workers=2)

    assert result.skipped == sum(1 for t in outcomes if t is None)
    assert result.passed == sum(1 for t in outcomes if t is not None and t.holds)
    first = next((i for i, t in enumerate(outcomes) if t is not None and not t.holds), None)
    if first is None:
        assert result.ok
    else:
        assert result.reproducer == {"trial": first, "x": 3, "semiring": "boolean"}
