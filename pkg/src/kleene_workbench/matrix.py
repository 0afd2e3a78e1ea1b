"""Matrix semiring over a registered instance and the block-recursive matrix star."""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Protocol, Self, override

from kleene_workbench import enums, exceptions, semiring
from kleene_workbench.schemas import reports

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from kleene_workbench import ids

logger = logging.getLogger(__name__)


class StarElement(Protocol):
    """Anything with a semiring sum, product and star."""

    def __add__(self, other: Self, /) -> Self: ...

    def __mul__(self, other: Self, /) -> Self: ...

    def star(self) -> Self: ...


type Block[T] = list[list[T]]


class DimensionMismatchError(exceptions.BadParameterError):
    """Matrices of incompatible dimensions."""

    def __init__(self, *, operation: str, left: tuple[int, int], right: tuple[int, int] | None = None) -> None:
        if right is None:
            msg = f"Cannot {operation} a {left[0]}x{left[1]} matrix"
        else:
            msg = f"Cannot {operation} a {left[0]}x{left[1]} matrix with a {right[0]}x{right[1]} matrix"
        super().__init__(msg)


def block_mul[T: StarElement](a: Block[T], b: Block[T], *, zero: T) -> Block[T]:
    """Row-by-column product of nested lists; the order of factors is kept."""
    inner = len(b)
    cols = len(b[0]) if b else 0
    out: Block[T] = []
    for row in a:
        out_row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                acc += row[k] * b[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def block_add[T: StarElement](a: Block[T], b: Block[T]) -> Block[T]:
    return [[x + y for x, y in zip(ra, rb, strict=True)] for ra, rb in zip(a, b, strict=True)]


def _split[T](rows: Block[T], k: int) -> tuple[Block[T], Block[T], Block[T], Block[T]]:
    x = [row[:k] for row in rows[:k]]
    y = [row[k:] for row in rows[:k]]
    u = [row[:k] for row in rows[k:]]
    v = [row[k:] for row in rows[k:]]
    return x, y, u, v


def _assemble[T](alpha: Block[T], beta: Block[T], gamma: Block[T], delta: Block[T]) -> Block[T]:
    top = [ra + rb for ra, rb in zip(alpha, beta, strict=True)]
    bottom = [rg + rd for rg, rd in zip(gamma, delta, strict=True)]
    return top + bottom


def _star_last[T: StarElement](rows: Block[T], *, zero: T, one: T) -> Block[T]:
    """Split off the last row and column; every step costs a quadratic number of operations.

    With X the leading block, Y the last column, U the last row and V the corner,
    the blocks are δ = (V + U X* Y)*, γ = δ U X*, α = X* + X* Y δ U X* (which
    equals (X + Y V* U)*) and β = α Y V*.
    """
    n = len(rows)
    xs = star_blocks([row[: n - 1] for row in rows[: n - 1]], zero=zero, one=one)
    y = [row[n - 1] for row in rows[: n - 1]]
    u = rows[n - 1][: n - 1]
    v = rows[n - 1][n - 1]

    xs_y = [sum_of((xs[i][j] * y[j] for j in range(n - 1)), zero) for i in range(n - 1)]
    u_xs = [sum_of((u[i] * xs[i][j] for i in range(n - 1)), zero) for j in range(n - 1)]
    delta = (v + sum_of((u[i] * xs_y[i] for i in range(n - 1)), zero)).star()
    gamma = [delta * u_xs[j] for j in range(n - 1)]
    alpha = [[xs[i][j] + xs_y[i] * gamma[j] for j in range(n - 1)] for i in range(n - 1)]
    v_star = v.star()
    beta = [sum_of((alpha[i][j] * y[j] for j in range(n - 1)), zero) * v_star for i in range(n - 1)]
    return [[*alpha[i], beta[i]] for i in range(n - 1)] + [[*gamma, delta]]


def _star_blockwise[T: StarElement](rows: Block[T], k: int, *, zero: T, one: T, literal: bool) -> Block[T]:
    x, y, u, v = _split(rows, k)
    xs = star_blocks(x, zero=zero, one=one, literal=literal)
    vs = star_blocks(v, zero=zero, one=one, literal=literal)
    xs_y = block_mul(xs, y, zero=zero)
    delta = star_blocks(block_add(v, block_mul(u, xs_y, zero=zero)), zero=zero, one=one, literal=literal)
    gamma = block_mul(block_mul(delta, u, zero=zero), xs, zero=zero)
    if literal:
        alpha = star_blocks(
            block_add(x, block_mul(block_mul(y, vs, zero=zero), u, zero=zero)),
            zero=zero,
            one=one,
            literal=literal,
        )
    else:
        alpha = block_add(xs, block_mul(xs_y, gamma, zero=zero))
    beta = block_mul(block_mul(alpha, y, zero=zero), vs, zero=zero)
    return _assemble(alpha, beta, gamma, delta)


def star_blocks[T: StarElement](
    rows: Block[T],
    *,
    zero: T,
    one: T,
    split: int | None = None,
    literal: bool = False,
) -> Block[T]:
    """Star of a square matrix given as nested lists, over any star semiring.

    A 1x1 matrix (a) has star (a*). Larger matrices are partitioned into blocks
    X (k x k), Y, U and V and combined as α = (X + Y V* U)*, β = α Y V*,
    γ = δ U X*, δ = (V + U X* Y)*.

    Args:
        rows: Square matrix.
        zero: Additive identity of the entries.
        one: Multiplicative identity of the entries.
        split: Size k of the leading block; the default splits off the last row and column.
        literal: Evaluate α as displayed instead of through X* + X* Y δ U X*; exponential cost.

    Returns:
        The star, as nested lists.
    """
    n = len(rows)
    if n == 0:
        return []
    if n == 1:
        return [[rows[0][0].star()]]
    if split is None and not literal:
        return _star_last(rows, zero=zero, one=one)
    k = n - 1 if split is None else split
    if not 1 <= k < n:
        msg = f"split must lie in [1, {n - 1}], got {k}"
        raise ValueError(msg)
    logger.debug("Block star of size %d split at %d", n, k)
    return _star_blockwise(rows, k, zero=zero, one=one, literal=literal)


def sum_of[T: StarElement](values: Iterable[T], zero: T) -> T:
    acc = zero
    for v in values:
        acc += v
    return acc


@dataclasses.dataclass(frozen=True, slots=True)
class KMatrix:
    """Dense matrix over one registered instance, stored row-major."""

    instance: ids.SemiringId
    entries: tuple[tuple[semiring.SemiringValue, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise DimensionMismatchError(operation="build", left=(len(self.entries), 0))
        width = len(self.entries[0])
        for row in self.entries:
            if len(row) != width:
                raise DimensionMismatchError(operation="build ragged", left=(len(self.entries), len(row)))
            for v in row:
                if v.instance != self.instance:
                    raise semiring.InstanceMismatchError(left=self.instance, right=v.instance)

    @classmethod
    def of(cls, instance: ids.SemiringId, rows: Sequence[Sequence[semiring.Scalar]]) -> KMatrix:
        """Build a matrix from raw scalars."""
        return cls(instance, tuple(tuple(semiring.SemiringValue(instance, x) for x in row) for row in rows))

    @classmethod
    def from_block(cls, instance: ids.SemiringId, rows: Block[semiring.SemiringValue]) -> KMatrix:
        return cls(instance, tuple(tuple(row) for row in rows))

    @classmethod
    def zeros(cls, instance: ids.SemiringId, rows: int, cols: int) -> KMatrix:
        z = semiring.zero(instance)
        return cls(instance, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, instance: ids.SemiringId, n: int) -> KMatrix:
        z, e = semiring.zero(instance), semiring.one(instance)
        return cls(instance, tuple(tuple(e if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def row_vector(cls, values: Sequence[semiring.SemiringValue]) -> KMatrix:
        return cls(values[0].instance, (tuple(values),))

    @classmethod
    def column_vector(cls, values: Sequence[semiring.SemiringValue]) -> KMatrix:
        return cls(values[0].instance, tuple((v,) for v in values))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> semiring.SemiringValue:
        i, j = index
        return self.entries[i][j]

    def block(self) -> Block[semiring.SemiringValue]:
        return [list(row) for row in self.entries]

    def flat(self) -> tuple[semiring.SemiringValue, ...]:
        """Entries in row-major order."""
        return tuple(v for row in self.entries for v in row)

    def to_scalars(self) -> list[list[semiring.Scalar]]:
        return [[v.value for v in row] for row in self.entries]

    def _check_instance(self, other: KMatrix) -> None:
        if other.instance != self.instance:
            raise semiring.InstanceMismatchError(left=self.instance, right=other.instance)

    def __add__(self, other: KMatrix) -> KMatrix:
        self._check_instance(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(operation="add", left=self.shape, right=other.shape)
        return KMatrix.from_block(self.instance, block_add(self.block(), other.block()))

    def __mul__(self, other: KMatrix) -> KMatrix:
        self._check_instance(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(operation="multiply", left=self.shape, right=other.shape)
        product = block_mul(self.block(), other.block(), zero=semiring.zero(self.instance))
        return KMatrix.from_block(self.instance, product)

    def scale(self, k: semiring.SemiringValue) -> KMatrix:
        """Left scalar action, entrywise."""
        if k.instance != self.instance:
            raise semiring.InstanceMismatchError(left=self.instance, right=k.instance)
        return KMatrix(self.instance, tuple(tuple(k * v for v in row) for row in self.entries))

    def star(self, *, split: int | None = None, literal: bool = False) -> KMatrix:
        if not self.is_square:
            raise DimensionMismatchError(operation="star", left=self.shape)
        rows = star_blocks(
            self.block(),
            zero=semiring.zero(self.instance),
            one=semiring.one(self.instance),
            split=split,
            literal=literal,
        )
        return KMatrix.from_block(self.instance, rows)

    def transpose(self) -> KMatrix:
        return KMatrix(self.instance, tuple(zip(*self.entries, strict=True)))

    def leq(self, other: KMatrix) -> bool:
        """Pointwise order."""
        self._check_instance(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(operation="compare", left=self.shape, right=other.shape)
        return all(x.leq(y) for x, y in zip(self.flat(), other.flat(), strict=True))

    @override
    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries) + "]"


def mat_add(a: KMatrix, b: KMatrix) -> KMatrix:
    return a + b


def mat_mul(a: KMatrix, b: KMatrix) -> KMatrix:
    return a * b


def mat_scale(k: semiring.SemiringValue, m: KMatrix) -> KMatrix:
    return m.scale(k)


def mat_star(m: KMatrix, *, split: int | None = None, literal: bool = False) -> KMatrix:
    return m.star(split=split, literal=literal)


@dataclasses.dataclass(frozen=True, slots=True)
class MatrixShape:
    """Most specific shape of a matrix, and every shape it matches."""

    kind: enums.MatrixShapeKind
    matches: frozenset[enums.MatrixShapeKind]


def _is_functional(m: KMatrix) -> bool:
    z, e = semiring.zero(m.instance), semiring.one(m.instance)
    for row in m.entries:
        if any(v not in {z, e} for v in row):
            return False
        if sum(1 for v in row if v == e) != 1:
            return False
    return True


def _is_diagonal(m: KMatrix) -> bool:
    return m.is_square and all(m[i, j].is_zero for i in range(m.rows) for j in range(m.cols) if i != j)


def classify(m: KMatrix) -> MatrixShape:
    """Classify a matrix as functional, dual functional, (invertible) diagonal or general."""
    matches: set[enums.MatrixShapeKind] = set()
    if _is_functional(m):
        matches.add(enums.MatrixShapeKind.functional)
    if _is_functional(m.transpose()):
        matches.add(enums.MatrixShapeKind.dual_functional)
    if _is_diagonal(m):
        matches.add(enums.MatrixShapeKind.diagonal)
        if all(semiring.inverse(m[i, i]) is not None for i in range(m.rows)):
            matches.add(enums.MatrixShapeKind.invertible_diagonal)
    # members are declared from most to least specific
    kind = next((k for k in enums.MatrixShapeKind if k in matches), enums.MatrixShapeKind.general)
    matches.add(enums.MatrixShapeKind.general)
    return MatrixShape(kind=kind, matches=frozenset(matches))


def functorial_check(a: KMatrix, b: KMatrix, c: KMatrix) -> reports.FunctorialReport:
    """Check whether AC = CB implies A*C = CB* for one triple.

    The report also names which functorial-star results apply to the instance
    profile and the shape of C.
    """
    if not a.is_square or not b.is_square or c.shape != (a.rows, b.rows):
        raise DimensionMismatchError(operation="relate", left=c.shape, right=(a.rows, b.rows))
    premise = a * c == c * b
    conclusion = a.star() * c == c * b.star() if premise else None
    shape = classify(c)
    profile = semiring.resolve(a.instance).profile
    predicted: list[str] = []
    if profile.symmetric_inductive:
        predicted.append("strong functorial star (symmetric inductive)")
    if enums.MatrixShapeKind.invertible_diagonal in shape.matches:
        predicted.append("invertible diagonal")
    if profile.atomistic and shape.matches & {enums.MatrixShapeKind.functional, enums.MatrixShapeKind.dual_functional}:
        predicted.append("functional or dual functional (atomistic)")
    return reports.FunctorialReport(
        semiring=str(a.instance),
        premise=premise,
        conclusion=conclusion,
        shape=shape.kind,
        shapes=sorted(shape.matches),
        predicted_by=predicted,
    )


def mat_leq(a: KMatrix, b: KMatrix) -> bool:
    return a.leq(b)


def kron_identity(m: KMatrix, size: int) -> KMatrix:
    """Kronecker product M ⊗ I with the size×size identity."""
    z = semiring.zero(m.instance)
    return KMatrix(
        m.instance,
        tuple(
            tuple(m[i, j] if p == q else z for j in range(m.cols) for q in range(size))
            for i in range(m.rows)
            for p in range(size)
        ),
    )
