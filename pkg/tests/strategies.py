"""Hypothesis strategies built on the seeded generators of the sampling module."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from kleene_workbench import automata, ids, matrix, sampling, semiring
from kleene_workbench.series import Alphabet, TruncatedSeries

INSTANCES = (ids.BOOLEAN, ids.NAT_INF, ids.TROPICAL, ids.chain(3))
FINITE_INSTANCES = (ids.BOOLEAN, ids.chain(3))
AB = Alphabet(("a", "b"))


def instances() -> st.SearchStrategy[ids.SemiringId]:
    return st.sampled_from(INSTANCES)


def rngs() -> st.SearchStrategy[random.Random]:
    return st.integers(min_value=0, max_value=2**32).map(random.Random)


@st.composite
def values(draw: st.DrawFn, instance: ids.SemiringId) -> semiring.SemiringValue:
    return sampling.random_value(draw(rngs()), instance)


@st.composite
def square_matrices(draw: st.DrawFn, instance: ids.SemiringId, max_dim: int = 4) -> matrix.KMatrix:
    n = draw(st.integers(min_value=1, max_value=max_dim))
    return sampling.random_matrix(draw(rngs()), instance, n, n)


@st.composite
def series(
    draw: st.DrawFn,
    instance: ids.SemiringId,
    bound: int = 3,
    *,
    proper: bool = False,
) -> TruncatedSeries:
    return sampling.random_series(draw(rngs()), instance, AB, bound, proper=proper)


@st.composite
def expressions(draw: st.DrawFn, instance: ids.SemiringId, max_size: int = 8) -> automata.RationalExpr:
    size = draw(st.integers(min_value=1, max_value=max_size))
    return sampling.random_expr(draw(rngs()), instance, AB, size)


@st.composite
def weighted_automata(draw: st.DrawFn, instance: ids.SemiringId, max_dim: int = 3) -> automata.WeightedAutomaton:
    dim = draw(st.integers(min_value=1, max_value=max_dim))
    return sampling.random_automaton(draw(rngs()), instance, AB, dim)
