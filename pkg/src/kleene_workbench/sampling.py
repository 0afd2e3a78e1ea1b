"""Seeded random values, matrices, series, expressions and automata, and identity-preserving rewrites."""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, assert_never

from frozendict import frozendict

from kleene_workbench import automata, enums, matrix, semiring
from kleene_workbench.automata import One, Prod, RationalExpr, Scale, Star, Sum, Zero
from kleene_workbench.series import Alphabet, TruncatedSeries

if TYPE_CHECKING:
    import random

    from kleene_workbench import ids


def random_value(rng: random.Random, instance: ids.SemiringId, *, nonzero: bool = False) -> semiring.SemiringValue:
    """Small values; ∞ shows up now and then on the extended naturals."""
    sr = semiring.resolve(instance)
    while True:
        match instance.kind:
            case enums.SemiringKind.boolean | enums.SemiringKind.chain:
                x: semiring.Scalar = rng.choice(sr.carrier() or ())
            case enums.SemiringKind.nat_inf:
                x = semiring.INF if rng.random() < 0.1 else rng.randint(0, 3)  # ruff: ignore[magic-value-comparison]
            case enums.SemiringKind.tropical_nat_inf:
                x = semiring.INF if rng.random() < 0.2 else rng.randint(0, 5)  # ruff: ignore[magic-value-comparison]
            case _:  # pragma: no cover
                assert_never(instance.kind)
        if not nonzero or x != sr.zero:
            return semiring.SemiringValue(instance, x)


def random_finite_value(rng: random.Random, instance: ids.SemiringId, high: int) -> semiring.SemiringValue:
    """A finite value, at most ``high`` on the extended naturals."""
    if (elements := semiring.carrier(instance)) is not None:
        return rng.choice(elements)
    return semiring.SemiringValue(instance, rng.randint(0, high))


def random_matrix(
    rng: random.Random,
    instance: ids.SemiringId,
    rows: int,
    cols: int,
    *,
    density: float = 0.5,
) -> matrix.KMatrix:
    z = semiring.zero(instance)
    return matrix.KMatrix(
        instance,
        tuple(
            tuple(random_value(rng, instance, nonzero=True) if rng.random() < density else z for _ in range(cols))
            for _ in range(rows)
        ),
    )


def random_diagonal(rng: random.Random, instance: ids.SemiringId, n: int) -> matrix.KMatrix:
    z = semiring.zero(instance)
    diagonal = [random_value(rng, instance) for _ in range(n)]
    return matrix.KMatrix(instance, tuple(tuple(diagonal[i] if i == j else z for j in range(n)) for i in range(n)))


def permutation_matrix(rng: random.Random, instance: ids.SemiringId, n: int) -> matrix.KMatrix:
    z, e = semiring.zero(instance), semiring.one(instance)
    image = list(range(n))
    rng.shuffle(image)
    return matrix.KMatrix(instance, tuple(tuple(e if j == image[i] else z for j in range(n)) for i in range(n)))


def commuting_triple(
    rng: random.Random,
    instance: ids.SemiringId,
    n: int,
) -> tuple[matrix.KMatrix, matrix.KMatrix, matrix.KMatrix]:
    """Square A, B, C with AC = CB by construction.

    Uses one of: a permutation C with B = CᵀAC, a scalar multiple of I, a power
    of A with B = A, or the zero matrix.
    """
    a = random_matrix(rng, instance, n, n)
    match rng.randrange(4):
        case 0:
            c = permutation_matrix(rng, instance, n)
            return a, c.transpose() * a * c, c
        case 1:
            return a, a, matrix.KMatrix.identity(instance, n).scale(random_value(rng, instance))
        case 2:
            c = matrix.KMatrix.identity(instance, n)
            for _ in range(rng.randrange(3)):
                c *= a
            return a, a, c
        case _:
            return a, random_matrix(rng, instance, n, n), matrix.KMatrix.zeros(instance, n, n)


def random_series(
    rng: random.Random,
    instance: ids.SemiringId,
    alphabet: Alphabet,
    bound: int,
    *,
    proper: bool = False,
    density: float = 0.3,
) -> TruncatedSeries:
    coeffs = {
        word: random_value(rng, instance, nonzero=True)
        for word in alphabet.words(bound)
        if (word or not proper) and rng.random() < density
    }
    return TruncatedSeries(instance, alphabet, bound, frozendict(coeffs))


def random_expr(rng: random.Random, instance: ids.SemiringId, alphabet: Alphabet, size: int) -> RationalExpr:
    """Expression with at most ``size`` nodes."""
    if size <= 1:
        roll = rng.random()
        if roll < 0.1:  # ruff: ignore[magic-value-comparison]
            return Zero()
        if roll < 0.2:  # ruff: ignore[magic-value-comparison]
            return One()
        return automata.Letter(rng.choice(alphabet.letters))
    # binary nodes need two children of at least one node each
    match rng.randrange(4 if size > 2 else 2):  # ruff: ignore[magic-value-comparison]
        case 0:
            return Star(random_expr(rng, instance, alphabet, size - 1))
        case 1:
            return Scale(random_value(rng, instance), random_expr(rng, instance, alphabet, size - 1))
        case 2:
            left = rng.randint(1, size - 2)
            return Sum(random_expr(rng, instance, alphabet, left), random_expr(rng, instance, alphabet, size - 1 - left))
        case _:
            left = rng.randint(1, size - 2)
            return Prod(random_expr(rng, instance, alphabet, left), random_expr(rng, instance, alphabet, size - 1 - left))


def random_automaton(
    rng: random.Random,
    instance: ids.SemiringId,
    alphabet: Alphabet,
    dim: int,
    *,
    density: float = 0.4,
) -> automata.WeightedAutomaton:
    return automata.WeightedAutomaton(
        instance,
        alphabet,
        random_matrix(rng, instance, 1, dim, density=0.6),
        frozendict({letter: random_matrix(rng, instance, dim, dim, density=density) for letter in alphabet}),
        random_matrix(rng, instance, dim, 1, density=0.6),
    )


def merge_automaton(
    rng: random.Random,
    target: automata.WeightedAutomaton,
    dim: int,
) -> tuple[automata.WeightedAutomaton, matrix.KMatrix]:
    """Automaton A of dimension ``dim`` ≥ dim(B) with a functional simulation X: A → B.

    States of A map onto states of B by a random surjection f. Every weight
    B puts on a state j is carried in A by one random state of f⁻¹(j).
    """
    instance, n = target.instance, target.dim
    f = list(range(n)) + [rng.randrange(n) for _ in range(dim - n)]
    rng.shuffle(f)
    preimages = [[i for i in range(dim) if f[i] == j] for j in range(n)]
    z, e = semiring.zero(instance), semiring.one(instance)

    x = matrix.KMatrix(instance, tuple(tuple(e if f[i] == j else z for j in range(n)) for i in range(dim)))
    alpha = [z] * dim
    for j in range(n):
        alpha[rng.choice(preimages[j])] = target.alpha[0, j]
    transitions = {}
    for letter, nb in target.transitions.items():
        rows = [[z] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(n):
                rows[i][rng.choice(preimages[j])] = nb[f[i], j]
        transitions[letter] = matrix.KMatrix.from_block(instance, rows)
    a = automata.WeightedAutomaton(
        instance,
        target.alphabet,
        matrix.KMatrix.row_vector(alpha),
        frozendict(transitions),
        matrix.KMatrix.column_vector([target.beta[f[i], 0] for i in range(dim)]),
    )
    return a, x


def rewrites(e: RationalExpr) -> list[RationalExpr]:
    """Every expression obtained by applying one valid identity at one position."""
    out: list[RationalExpr] = []
    unit = One()
    match e:
        case Sum(left, right):
            out.append(Sum(right, left))
            if isinstance(left, Sum):
                out.append(Sum(left.left, Sum(left.right, right)))
            if isinstance(right, Zero):
                out.append(left)
            out.extend(Sum(x, right) for x in rewrites(left))
            out.extend(Sum(left, x) for x in rewrites(right))
        case Prod(left, right):
            if isinstance(right, Sum):
                out.append(Sum(Prod(left, right.left), Prod(left, right.right)))
            if isinstance(left, Prod):
                out.append(Prod(left.left, Prod(left.right, right)))
            if isinstance(right, One):
                out.append(left)
            if isinstance(left, One):
                out.append(right)
            out.extend(Prod(x, right) for x in rewrites(left))
            out.extend(Prod(left, x) for x in rewrites(right))
        case Star(inner):
            out.append(Sum(unit, Prod(inner, e)))
            out.append(Sum(Prod(e, inner), unit))
            match inner:
                case Sum(left, right):
                    out.append(Prod(Star(Prod(Star(left), right)), Star(left)))
                case Prod(left, right):
                    out.append(Sum(unit, Prod(Prod(left, Star(Prod(right, left))), right)))
                case _:
                    pass
            out.extend(Star(x) for x in rewrites(inner))
        case Scale(k, inner):
            match inner:
                case Sum(left, right):
                    out.append(Sum(Scale(k, left), Scale(k, right)))
                case Prod(left, right):
                    out.append(Prod(Scale(k, left), right))
                case _:
                    pass
            out.extend(Scale(k, x) for x in rewrites(inner))
        case Zero() | One() | automata.Letter():
            pass
        case _:  # pragma: no cover
            assert_never(e)
    return out


def rewrite(rng: random.Random, e: RationalExpr, steps: int = 3) -> RationalExpr:
    """Apply up to ``steps`` random identities; falls back to e + 0 when none applies."""
    for _ in range(steps):
        candidates = rewrites(e)
        e = rng.choice(candidates) if candidates else Sum(e, Zero())
    return e


@dataclasses.dataclass(frozen=True, slots=True)
class ExpressionPair:
    left: RationalExpr
    right: RationalExpr


def equivalent_pair(rng: random.Random, instance: ids.SemiringId, alphabet: Alphabet, size: int) -> ExpressionPair:
    """Two expressions denoting the same series, the second obtained by rewriting the first."""
    e = random_expr(rng, instance, alphabet, size)
    return ExpressionPair(e, rewrite(rng, e))
