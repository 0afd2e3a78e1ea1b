"""Weighted automata (α, M, β), rational expressions and the constructions between them."""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Protocol, Self, assert_never, override

from frozendict import frozendict

from kleene_workbench import enums, exceptions, matrix, semiring
from kleene_workbench.schemas import files, reports
from kleene_workbench.series import EPSILON, Alphabet, TruncatedSeries, UnknownLetterError, Word

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from kleene_workbench import ids

logger = logging.getLogger(__name__)


class InvalidAutomatonError(exceptions.BadParameterError):
    """Inconsistent automaton triple."""

    def __init__(self, *, name: str | None, reason: str) -> None:
        label = f"Automaton {name!r}" if name else "Automaton"
        super().__init__(f"{label} is invalid: {reason}")


class MissingLetterError(exceptions.BadParameterError):
    """A letter has no image under the given assignment."""

    def __init__(self, *, letter: str) -> None:
        super().__init__(f"No image given for letter {letter!r}")


class AutomatonMismatchError(exceptions.BadParameterError):
    """Automata over different instances or alphabets were combined."""

    def __init__(self, *, left: WeightedAutomaton, right: WeightedAutomaton) -> None:
        super().__init__(
            f"Cannot combine an automaton over {left.instance}/{left.alphabet} "
            f"with one over {right.instance}/{right.alphabet}",
        )


@dataclasses.dataclass(frozen=True, slots=True)
class LetterCombo:
    """Linear combination of letters, one entry of the transition matrix M."""

    instance: ids.SemiringId
    alphabet: Alphabet
    coeffs: frozendict[str, semiring.SemiringValue]

    def __post_init__(self) -> None:
        for letter in self.coeffs:
            if letter not in self.alphabet:
                raise UnknownLetterError(letter=letter, alphabet=self.alphabet)
        object.__setattr__(self, "coeffs", frozendict({a: k for a, k in self.coeffs.items() if not k.is_zero}))

    def to_series(self, bound: int) -> TruncatedSeries:
        """The series Σ_a k_a·a."""
        return TruncatedSeries(
            self.instance,
            self.alphabet,
            bound,
            frozendict({(a,): k for a, k in self.coeffs.items()}) if bound >= 1 else frozendict(),
        )

    @override
    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{k}@{a}" for a, k in self.coeffs.items())


@dataclasses.dataclass(frozen=True, slots=True)
class WeightedAutomaton:
    """Initial row vector, one transition matrix per letter and final column vector."""

    instance: ids.SemiringId
    alphabet: Alphabet
    alpha: matrix.KMatrix
    transitions: frozendict[str, matrix.KMatrix]
    beta: matrix.KMatrix
    name: str | None = None

    def __post_init__(self) -> None:
        n = self.alpha.cols
        if self.alpha.rows != 1:
            raise InvalidAutomatonError(name=self.name, reason="the initial vector must be a single row")
        if self.beta.shape != (n, 1):
            raise InvalidAutomatonError(name=self.name, reason=f"the final vector must be a {n}x1 column")
        if set(self.transitions) != set(self.alphabet):
            raise InvalidAutomatonError(name=self.name, reason="every letter needs exactly one transition matrix")
        for letter, m in self.transitions.items():
            if m.shape != (n, n):
                raise InvalidAutomatonError(name=self.name, reason=f"the matrix of {letter!r} must be {n}x{n}")
        for m in (self.alpha, self.beta, *self.transitions.values()):
            if m.instance != self.instance:
                raise semiring.InstanceMismatchError(left=self.instance, right=m.instance)

    @classmethod
    def of(
        cls,
        instance: ids.SemiringId,
        alphabet: Alphabet,
        alpha: Sequence[semiring.Scalar],
        transitions: Mapping[str, Sequence[Sequence[semiring.Scalar]]],
        beta: Sequence[semiring.Scalar],
        *,
        name: str | None = None,
    ) -> WeightedAutomaton:
        """Build an automaton from raw scalars."""
        return cls(
            instance,
            alphabet,
            matrix.KMatrix.of(instance, [alpha]),
            frozendict({a: matrix.KMatrix.of(instance, transitions[a]) for a in alphabet if a in transitions}),
            matrix.KMatrix.of(instance, [[x] for x in beta]),
            name,
        )

    @property
    def dim(self) -> int:
        return self.alpha.cols

    def combo(self, i: int, j: int) -> LetterCombo:
        """Entry (i, j) of M as a letter combination."""
        return LetterCombo(
            self.instance,
            self.alphabet,
            frozendict({a: self.transitions[a][i, j] for a in self.alphabet}),
        )

    def check_compatible(self, other: WeightedAutomaton) -> None:
        if (self.instance, self.alphabet) != (other.instance, other.alphabet):
            raise AutomatonMismatchError(left=self, right=other)

    def renamed(self, name: str | None) -> WeightedAutomaton:
        return dataclasses.replace(self, name=name)

    @override
    def __str__(self) -> str:
        return self.name or f"automaton of dimension {self.dim}"


def behavior(a: WeightedAutomaton, bound: int) -> TruncatedSeries:
    """Coefficients α·M_{w_1}·…·M_{w_k}·β for every word up to ``bound``.

    Prefix vectors are propagated in length-lexicographic order, so each word
    costs one vector-matrix product.
    """
    prefixes: dict[Word, matrix.KMatrix] = {EPSILON: a.alpha}
    coeffs: dict[Word, semiring.SemiringValue] = {}
    for word in a.alphabet.words(bound):
        if word:
            prefixes[word] = prefixes[word[:-1]] * a.transitions[word[-1]]
        coeffs[word] = (prefixes[word] * a.beta)[0, 0]
    return TruncatedSeries(a.instance, a.alphabet, bound, frozendict(coeffs))


def behavior_via_star(a: WeightedAutomaton, bound: int) -> TruncatedSeries:
    """αM*β with the star taken in the matrix semiring over truncated series."""
    n = a.dim
    zero = TruncatedSeries.zero(a.instance, a.alphabet, bound)
    one = TruncatedSeries.one(a.instance, a.alphabet, bound)
    rows = [[a.combo(i, j).to_series(bound) for j in range(n)] for i in range(n)]
    star = matrix.star_blocks(rows, zero=zero, one=one)
    result = zero
    for i in range(n):
        left = TruncatedSeries.constant(a.alpha[0, i], a.alphabet, bound)
        for j in range(n):
            right = TruncatedSeries.constant(a.beta[j, 0], a.alphabet, bound)
            result += left * star[i][j] * right
    return result


def equivalent(a: WeightedAutomaton, b: WeightedAutomaton, bound: int) -> reports.EquivalenceReport:
    """Compare truncated behaviours and report the first differing word."""
    a.check_compatible(b)
    left, right = behavior(a, bound), behavior(b, bound)
    for word in a.alphabet.words(bound):
        if (x := left.coeff(word)) != (y := right.coeff(word)):
            return reports.EquivalenceReport(
                semiring=str(a.instance),
                bound=bound,
                equivalent=False,
                word=a.alphabet.format_word(word),
                left=str(x),
                right=str(y),
            )
    return reports.EquivalenceReport(semiring=str(a.instance), bound=bound, equivalent=True)


# Kleene constructions


def _zero_transitions(instance: ids.SemiringId, alphabet: Alphabet, n: int) -> frozendict[str, matrix.KMatrix]:
    return frozendict({letter: matrix.KMatrix.zeros(instance, n, n) for letter in alphabet})


def zero_automaton(instance: ids.SemiringId, alphabet: Alphabet) -> WeightedAutomaton:
    z = matrix.KMatrix.zeros(instance, 1, 1)
    return WeightedAutomaton(instance, alphabet, z, _zero_transitions(instance, alphabet, 1), z)


def one_automaton(instance: ids.SemiringId, alphabet: Alphabet) -> WeightedAutomaton:
    e = matrix.KMatrix.identity(instance, 1)
    return WeightedAutomaton(instance, alphabet, e, _zero_transitions(instance, alphabet, 1), e)


def letter_automaton(instance: ids.SemiringId, alphabet: Alphabet, letter: str) -> WeightedAutomaton:
    """Two states joined by a single edge labelled ``letter``; behaviour is exactly that letter."""
    if letter not in alphabet:
        raise UnknownLetterError(letter=letter, alphabet=alphabet)
    e, z = semiring.resolve(instance).one, semiring.resolve(instance).zero
    transitions = dict(_zero_transitions(instance, alphabet, 2))
    transitions[letter] = matrix.KMatrix.of(instance, [[z, e], [z, z]])
    return WeightedAutomaton(
        instance,
        alphabet,
        matrix.KMatrix.of(instance, [[e, z]]),
        frozendict(transitions),
        matrix.KMatrix.of(instance, [[z], [e]]),
    )


def _direct_sum(x: matrix.KMatrix, y: matrix.KMatrix, *, upper_right: matrix.KMatrix | None = None) -> matrix.KMatrix:
    """Block matrix [[X, R], [0, Y]] with R zero unless given."""
    instance = x.instance
    if upper_right is None:
        upper_right = matrix.KMatrix.zeros(instance, x.rows, y.cols)
    lower_left = matrix.KMatrix.zeros(instance, y.rows, x.cols)
    top = [(*rx, *rr) for rx, rr in zip(x.entries, upper_right.entries, strict=True)]
    bottom = [(*rl, *ry) for rl, ry in zip(lower_left.entries, y.entries, strict=True)]
    return matrix.KMatrix(instance, tuple(top + bottom))


def _hcat(x: matrix.KMatrix, y: matrix.KMatrix) -> matrix.KMatrix:
    return matrix.KMatrix(x.instance, tuple((*rx, *ry) for rx, ry in zip(x.entries, y.entries, strict=True)))


def _vcat(x: matrix.KMatrix, y: matrix.KMatrix) -> matrix.KMatrix:
    return matrix.KMatrix(x.instance, x.entries + y.entries)


def sum_automaton(a: WeightedAutomaton, b: WeightedAutomaton) -> WeightedAutomaton:
    """Disjoint union; behaviour |A| + |B|."""
    a.check_compatible(b)
    return WeightedAutomaton(
        a.instance,
        a.alphabet,
        _hcat(a.alpha, b.alpha),
        frozendict({x: _direct_sum(a.transitions[x], b.transitions[x]) for x in a.alphabet}),
        _vcat(a.beta, b.beta),
    )


def product_automaton(a: WeightedAutomaton, b: WeightedAutomaton) -> WeightedAutomaton:
    """Concatenation; behaviour |A|·|B|.

    Leaving A through β_A re-enters B through α_B, on the letter just read or
    before reading any letter.
    """
    a.check_compatible(b)
    handoff = a.beta * b.alpha
    return WeightedAutomaton(
        a.instance,
        a.alphabet,
        _hcat(a.alpha, (a.alpha * a.beta) * b.alpha),
        frozendict(
            {x: _direct_sum(a.transitions[x], b.transitions[x], upper_right=a.transitions[x] * handoff) for x in a.alphabet},
        ),
        _vcat(matrix.KMatrix.zeros(a.instance, a.dim, 1), b.beta),
    )


def star_automaton(a: WeightedAutomaton) -> WeightedAutomaton:
    """One extra state carrying the empty word; behaviour |A|*.

    With T = (βα)*, the automaton is ((α, 1), [[T·M, 0], [0, 0]], (T·β, 1)).
    """
    t = (a.beta * a.alpha).star()
    e = matrix.KMatrix.identity(a.instance, 1)
    z1 = matrix.KMatrix.zeros(a.instance, 1, 1)
    return WeightedAutomaton(
        a.instance,
        a.alphabet,
        _hcat(a.alpha, e),
        frozendict({x: _direct_sum(t * a.transitions[x], z1) for x in a.alphabet}),
        _vcat(t * a.beta, e),
    )


def scale_automaton(k: semiring.SemiringValue, a: WeightedAutomaton) -> WeightedAutomaton:
    """(kα, M, β); behaviour k·|A|."""
    return dataclasses.replace(a, alpha=a.alpha.scale(k), name=None)


# Rational expressions


@dataclasses.dataclass(frozen=True, slots=True)
class Zero:
    @override
    def __str__(self) -> str:
        return "0"


@dataclasses.dataclass(frozen=True, slots=True)
class One:
    @override
    def __str__(self) -> str:
        return "e"


@dataclasses.dataclass(frozen=True, slots=True)
class Letter:
    letter: str

    @override
    def __str__(self) -> str:
        return self.letter


@dataclasses.dataclass(frozen=True, slots=True)
class Sum:
    left: RationalExpr
    right: RationalExpr

    @override
    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclasses.dataclass(frozen=True, slots=True)
class Prod:
    left: RationalExpr
    right: RationalExpr

    @override
    def __str__(self) -> str:
        return f"({self.left} . {self.right})"


@dataclasses.dataclass(frozen=True, slots=True)
class Star:
    inner: RationalExpr

    @override
    def __str__(self) -> str:
        return f"({self.inner})*"


@dataclasses.dataclass(frozen=True, slots=True)
class Scale:
    k: semiring.SemiringValue
    inner: RationalExpr

    @override
    def __str__(self) -> str:
        return f"{self.k}@({self.inner})"


type RationalExpr = Zero | One | Letter | Sum | Prod | Star | Scale


def expr_size(e: RationalExpr) -> int:
    """Number of nodes."""
    match e:
        case Zero() | One() | Letter():
            return 1
        case Sum(left, right) | Prod(left, right):
            return 1 + expr_size(left) + expr_size(right)
        case Star(inner) | Scale(_, inner):
            return 1 + expr_size(inner)
        case _:  # pragma: no cover
            assert_never(e)


def compile_expr(e: RationalExpr, instance: ids.SemiringId, alphabet: Alphabet) -> WeightedAutomaton:
    """Compile an expression into an automaton by structural recursion."""
    match e:
        case Zero():
            return zero_automaton(instance, alphabet)
        case One():
            return one_automaton(instance, alphabet)
        case Letter(letter):
            return letter_automaton(instance, alphabet, letter)
        case Sum(left, right):
            return sum_automaton(compile_expr(left, instance, alphabet), compile_expr(right, instance, alphabet))
        case Prod(left, right):
            return product_automaton(compile_expr(left, instance, alphabet), compile_expr(right, instance, alphabet))
        case Star(inner):
            return star_automaton(compile_expr(inner, instance, alphabet))
        case Scale(k, inner):
            return scale_automaton(k, compile_expr(inner, instance, alphabet))
        case _:  # pragma: no cover
            assert_never(e)


# Evaluation targets


class Algebra[T](Protocol):
    """Target of expression evaluation: a semiring with star and a scalar action."""

    kind: enums.TargetKind

    def zero(self) -> T: ...

    def one(self) -> T: ...

    def scale(self, k: semiring.SemiringValue, x: T) -> T: ...


class _Element(Protocol):
    def __add__(self, other: Self, /) -> Self: ...

    def __mul__(self, other: Self, /) -> Self: ...

    def star(self) -> Self: ...


@dataclasses.dataclass(frozen=True, slots=True)
class SeriesAlgebra:
    """Truncated series over one instance, alphabet and bound."""

    instance: ids.SemiringId
    alphabet: Alphabet
    bound: int
    kind: enums.TargetKind = enums.TargetKind.series

    def zero(self) -> TruncatedSeries:
        return TruncatedSeries.zero(self.instance, self.alphabet, self.bound)

    def one(self) -> TruncatedSeries:
        return TruncatedSeries.one(self.instance, self.alphabet, self.bound)

    def scale(self, k: semiring.SemiringValue, x: TruncatedSeries) -> TruncatedSeries:
        return x.scale(k)

    def letters(self) -> dict[str, TruncatedSeries]:
        """The canonical assignment a ↦ a."""
        return {a: TruncatedSeries.letter(self.instance, self.alphabet, self.bound, a) for a in self.alphabet}


@dataclasses.dataclass(frozen=True, slots=True)
class MatrixAlgebra:
    """Square matrices of one size over one instance."""

    instance: ids.SemiringId
    size: int
    kind: enums.TargetKind = enums.TargetKind.matrix

    def zero(self) -> matrix.KMatrix:
        return matrix.KMatrix.zeros(self.instance, self.size, self.size)

    def one(self) -> matrix.KMatrix:
        return matrix.KMatrix.identity(self.instance, self.size)

    def scale(self, k: semiring.SemiringValue, x: matrix.KMatrix) -> matrix.KMatrix:
        return x.scale(k)


def eval_expr[T: _Element](e: RationalExpr, target: Algebra[T], h: Mapping[str, T]) -> T:
    """Evaluate an expression in a target algebra, sending each letter a to h(a)."""
    match e:
        case Zero():
            return target.zero()
        case One():
            return target.one()
        case Letter(letter):
            if letter not in h:
                raise MissingLetterError(letter=letter)
            return h[letter]
        case Sum(left, right):
            return eval_expr(left, target, h) + eval_expr(right, target, h)
        case Prod(left, right):
            return eval_expr(left, target, h) * eval_expr(right, target, h)
        case Star(inner):
            return eval_expr(inner, target, h).star()
        case Scale(k, inner):
            return target.scale(k, eval_expr(inner, target, h))
        case _:  # pragma: no cover
            assert_never(e)


# Morphisms into matrix algebras


@dataclasses.dataclass(frozen=True, slots=True)
class MatrixAutomaton:
    """Automaton whose letters were replaced by m×m matrices, flattened to scalars."""

    initial: matrix.KMatrix
    transition: matrix.KMatrix
    final: matrix.KMatrix

    def value(self) -> matrix.KMatrix:
        """(α ⊗ I)·(Mh)*·(β ⊗ I)."""
        return self.initial * self.transition.star() * self.final


def apply_morphism(a: WeightedAutomaton, size: int, h: Mapping[str, matrix.KMatrix]) -> MatrixAutomaton:
    """Substitute h(x) for every letter x of M and flatten to an (n·m)×(n·m) matrix."""
    for letter in a.alphabet:
        if letter not in h:
            raise MissingLetterError(letter=letter)
        image = h[letter]
        if image.shape != (size, size):
            raise matrix.DimensionMismatchError(operation="substitute", left=image.shape, right=(size, size))
        if image.instance != a.instance:
            raise semiring.InstanceMismatchError(left=a.instance, right=image.instance)

    n = a.dim
    z = semiring.zero(a.instance)
    flat = [[z] * (n * size) for _ in range(n * size)]
    for i in range(n):
        for j in range(n):
            for letter in a.alphabet:
                k = a.transitions[letter][i, j]
                if k.is_zero:
                    continue
                image = h[letter]
                for p in range(size):
                    for q in range(size):
                        flat[i * size + p][j * size + q] += k * image[p, q]
    logger.debug("Flattened automaton of dimension %d into %dx%d", n, n * size, n * size)
    return MatrixAutomaton(
        initial=matrix.kron_identity(a.alpha, size),
        transition=matrix.KMatrix.from_block(a.instance, flat),
        final=matrix.kron_identity(a.beta, size),
    )


def hsharp(a: WeightedAutomaton, size: int, h: Mapping[str, matrix.KMatrix]) -> matrix.KMatrix:
    """Image of the behaviour of A under the morphism extending h."""
    return apply_morphism(a, size, h).value()


# Files


def to_file(a: WeightedAutomaton) -> files.AutomatonFile:
    return files.AutomatonFile(
        semiring=str(a.instance),
        name=a.name,
        alphabet=list(a.alphabet),
        dim=a.dim,
        alpha=[files.from_scalar(x) for x in a.alpha.to_scalars()[0]],
        beta=[files.from_scalar(row[0]) for row in a.beta.to_scalars()],
        transitions={
            letter: [[files.from_scalar(x) for x in row] for row in a.transitions[letter].to_scalars()]
            for letter in a.alphabet
        },
    )


def from_file(f: files.AutomatonFile) -> WeightedAutomaton:
    """Build an automaton from a validated file; letters keep the file's order."""
    instance = f.instance
    return WeightedAutomaton.of(
        instance,
        Alphabet(tuple(f.alphabet)),
        [files.to_scalar(x) for x in f.alpha],
        {letter: [[files.to_scalar(x) for x in row] for row in rows] for letter, rows in f.transitions.items()},
        [files.to_scalar(x) for x in f.beta],
        name=f.name,
    )
