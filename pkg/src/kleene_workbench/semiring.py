"""Exact semiring instances with star, their order and instance-level axiom checkers.

Four instances are registered, each identified by a :class:`~kleene_workbench.ids.SemiringId`:

- ``boolean``: ({0, 1}, or, and, 0, 1) with 1* = 0* = 1.
- ``nat-inf``: (N ∪ {∞}, +, ·, 0, 1) with 0·∞ = 0, 0* = 1 and a* = ∞ otherwise.
- ``tropical-nat-inf``: (N ∪ {∞}, min, +, ∞, 0) with a* = 0 for every a.
- ``chain(n)``: ({0, …, n−1}, max, min, 0, n−1) with a* = n−1.

The canonical order of every instance coincides with its sum order (a ⪯ b iff a + r = b for some r);
:meth:`Semiring.sum_witness` returns the constructive r and :func:`check_order_coincidence` verifies it.
"""

from __future__ import annotations

import abc
import dataclasses
import enum
import functools
import itertools
import logging
from typing import TYPE_CHECKING, Final, assert_never, override

import pydantic

from kleene_workbench import enums, exceptions, ids
from kleene_workbench.schemas import reports

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

logger = logging.getLogger(__name__)


class Infinity(enum.Enum):
    """The explicit top element of ``nat-inf`` and ``tropical-nat-inf``."""

    INF = "inf"

    @override
    def __repr__(self) -> str:
        return "INF"


INF: Final = Infinity.INF

type Scalar = int | Infinity


def finite(x: Scalar) -> int:
    """Narrow a scalar known to be finite."""
    if x is INF:
        msg = "expected a finite scalar"
        raise ValueError(msg)
    return x


class InstanceMismatchError(exceptions.BadParameterError):
    """Values of different instances were mixed."""

    def __init__(self, *, left: ids.SemiringId, right: ids.SemiringId) -> None:
        super().__init__(f"Cannot combine values of {left} and {right}")


class ValueNotInCarrierError(exceptions.BadParameterError):
    """Value outside the carrier of its instance."""

    def __init__(self, *, instance: ids.SemiringId, value: object) -> None:
        super().__init__(f"{value!r} is not an element of {instance}")


class InvalidScalarError(exceptions.BadParameterError):
    """Scalar text could not be read for an instance."""

    def __init__(self, *, instance: ids.SemiringId, text: str) -> None:
        super().__init__(f"'{text}' is not a scalar of {instance}")


class SumMismatchError(exceptions.BadParameterError):
    """The two families handed to the atomistic search have different sums."""

    def __init__(self, *, left: str, right: str) -> None:
        super().__init__(f"Sums differ: {left} != {right}")


class EmptyFamiliesError(exceptions.BadParameterError):
    """Both families of a refinement search are empty."""

    def __init__(self) -> None:
        super().__init__("At least one value is needed to determine the semiring of a refinement search")


class InfiniteCarrierError(exceptions.UnsupportedError):
    """The operation enumerates the carrier, which is infinite."""

    def __init__(self, *, instance: ids.SemiringId, operation: str) -> None:
        super().__init__(f"Cannot {operation} over {instance}: the carrier is infinite")


class InstanceProfile(pydantic.BaseModel):
    """Which hypotheses of the theory an instance satisfies."""

    model_config = pydantic.ConfigDict(frozen=True)

    commutative: bool
    idempotent: bool
    sum_ordered: bool
    continuous: bool
    symmetric_inductive: bool
    locally_finite: bool
    finite_carrier: bool
    atomistic: bool
    carrier_size: int | None = None


class Semiring(abc.ABC):
    """Operation tables of one registered instance, acting on raw scalars."""

    instance: ids.SemiringId
    profile: InstanceProfile
    zero: Scalar
    one: Scalar

    @abc.abstractmethod
    def contains(self, x: object) -> bool: ...

    @abc.abstractmethod
    def add(self, x: Scalar, y: Scalar) -> Scalar: ...

    @abc.abstractmethod
    def mul(self, x: Scalar, y: Scalar) -> Scalar: ...

    @abc.abstractmethod
    def star(self, x: Scalar) -> Scalar: ...

    @abc.abstractmethod
    def leq(self, x: Scalar, y: Scalar) -> bool: ...

    @abc.abstractmethod
    def sum_witness(self, x: Scalar, y: Scalar) -> Scalar | None:
        """Return some r with x + r = y, or None when x is not below y."""

    @abc.abstractmethod
    def inverse(self, x: Scalar) -> Scalar | None:
        """Return the multiplicative inverse of x, if it has one."""

    def carrier(self) -> tuple[Scalar, ...] | None:
        """All elements in canonical order, or None for infinite carriers."""
        return None

    def parse_scalar(self, text: str) -> Scalar:
        text = text.strip()
        if text == INF.value:
            value: Scalar = INF
        elif text.isdigit():
            value = int(text)
        else:
            raise InvalidScalarError(instance=self.instance, text=text)
        if not self.contains(value):
            raise InvalidScalarError(instance=self.instance, text=text)
        return value

    def format_scalar(self, x: Scalar) -> str:
        return INF.value if x is INF else str(x)


class _ExtendedNaturals(Semiring):
    """Shared carrier N ∪ {∞}."""

    @override
    def contains(self, x: object) -> bool:
        return x is INF or (isinstance(x, int) and not isinstance(x, bool) and x >= 0)


class NatInfSemiring(_ExtendedNaturals):
    """Extended natural numbers with saturating arithmetic and an absorptive zero."""

    instance = ids.NAT_INF
    profile = InstanceProfile(
        commutative=True,
        idempotent=False,
        sum_ordered=True,
        continuous=True,
        symmetric_inductive=True,
        locally_finite=False,
        finite_carrier=False,
        atomistic=True,
    )
    zero = 0
    one = 1

    @override
    def add(self, x: Scalar, y: Scalar) -> Scalar:
        if x is INF or y is INF:
            return INF
        return x + y

    @override
    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        # 0·∞ = 0
        if x == 0 or y == 0:
            return 0
        if x is INF or y is INF:
            return INF
        return x * y

    @override
    def star(self, x: Scalar) -> Scalar:
        return 1 if x == 0 else INF

    @override
    def leq(self, x: Scalar, y: Scalar) -> bool:
        if y is INF:
            return True
        return x is not INF and x <= y

    @override
    def sum_witness(self, x: Scalar, y: Scalar) -> Scalar | None:
        if not self.leq(x, y):
            return None
        if y is INF:
            return INF
        return finite(y) - finite(x)

    @override
    def inverse(self, x: Scalar) -> Scalar | None:
        return 1 if x == 1 else None


class TropicalSemiring(_ExtendedNaturals):
    """Min-plus semiring over N ∪ {∞}; ∞ is the zero and 0 the unit."""

    instance = ids.TROPICAL
    profile = InstanceProfile(
        commutative=True,
        idempotent=True,
        sum_ordered=True,
        continuous=True,
        symmetric_inductive=True,
        locally_finite=False,
        finite_carrier=False,
        atomistic=True,
    )
    zero = INF
    one = 0

    @override
    def add(self, x: Scalar, y: Scalar) -> Scalar:
        if x is INF:
            return y
        if y is INF:
            return x
        return min(x, y)

    @override
    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        if x is INF or y is INF:
            return INF
        return x + y

    @override
    def star(self, x: Scalar) -> Scalar:
        return 0

    @override
    def leq(self, x: Scalar, y: Scalar) -> bool:
        # reversed numeric order: ∞ is the least element
        if x is INF:
            return True
        return y is not INF and y <= x

    @override
    def sum_witness(self, x: Scalar, y: Scalar) -> Scalar | None:
        return y if self.leq(x, y) else None

    @override
    def inverse(self, x: Scalar) -> Scalar | None:
        return 0 if x == 0 else None


class ChainSemiring(Semiring):
    """Finite chain lattice {0 < 1 < … < n−1} with join as sum and meet as product."""

    def __init__(self, instance: ids.SemiringId) -> None:
        self.instance = instance
        self.levels = finite(instance.levels or 0)
        self.zero = 0
        self.one = self.levels - 1
        self.profile = InstanceProfile(
            commutative=True,
            idempotent=True,
            sum_ordered=True,
            continuous=True,
            symmetric_inductive=True,
            locally_finite=True,
            finite_carrier=True,
            atomistic=True,
            carrier_size=self.levels,
        )

    @override
    def contains(self, x: object) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.levels

    @override
    def carrier(self) -> tuple[Scalar, ...]:
        return tuple(range(self.levels))

    @override
    def add(self, x: Scalar, y: Scalar) -> Scalar:
        return max(finite(x), finite(y))

    @override
    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        return min(finite(x), finite(y))

    @override
    def star(self, x: Scalar) -> Scalar:
        return self.one

    @override
    def leq(self, x: Scalar, y: Scalar) -> bool:
        return finite(x) <= finite(y)

    @override
    def sum_witness(self, x: Scalar, y: Scalar) -> Scalar | None:
        return y if self.leq(x, y) else None

    @override
    def inverse(self, x: Scalar) -> Scalar | None:
        return self.one if x == self.one else None

    @override
    def parse_scalar(self, text: str) -> Scalar:
        if text.strip() == INF.value:
            raise InvalidScalarError(instance=self.instance, text=text)
        return super().parse_scalar(text)


class BooleanSemiring(ChainSemiring):
    """The two-element chain, written with bits."""

    def __init__(self) -> None:
        super().__init__(ids.chain(2))
        self.instance = ids.BOOLEAN


@functools.cache
def resolve(instance: ids.SemiringId) -> Semiring:
    """Get the operation tables of an instance."""
    match instance.kind:
        case enums.SemiringKind.boolean:
            return BooleanSemiring()
        case enums.SemiringKind.nat_inf:
            return NatInfSemiring()
        case enums.SemiringKind.tropical_nat_inf:
            return TropicalSemiring()
        case enums.SemiringKind.chain:
            return ChainSemiring(instance)
        case _:  # pragma: no cover
            assert_never(instance.kind)


@dataclasses.dataclass(frozen=True, slots=True)
class SemiringValue:
    """One exact element of a registered instance."""

    instance: ids.SemiringId
    value: Scalar

    def __post_init__(self) -> None:
        if not resolve(self.instance).contains(self.value):
            raise ValueNotInCarrierError(instance=self.instance, value=self.value)

    @property
    def semiring(self) -> Semiring:
        return resolve(self.instance)

    def same_instance(self, other: SemiringValue) -> Semiring:
        """Return the operation tables, rejecting values of another instance."""
        if other.instance != self.instance:
            raise InstanceMismatchError(left=self.instance, right=other.instance)
        return self.semiring

    def __add__(self, other: SemiringValue) -> SemiringValue:
        return SemiringValue(self.instance, self.same_instance(other).add(self.value, other.value))

    def __mul__(self, other: SemiringValue) -> SemiringValue:
        return SemiringValue(self.instance, self.same_instance(other).mul(self.value, other.value))

    def star(self) -> SemiringValue:
        return SemiringValue(self.instance, self.semiring.star(self.value))

    def leq(self, other: SemiringValue) -> bool:
        return self.same_instance(other).leq(self.value, other.value)

    @property
    def is_zero(self) -> bool:
        return self.value == self.semiring.zero

    @override
    def __str__(self) -> str:
        return self.semiring.format_scalar(self.value)


def zero(instance: ids.SemiringId) -> SemiringValue:
    return SemiringValue(instance, resolve(instance).zero)


def one(instance: ids.SemiringId) -> SemiringValue:
    return SemiringValue(instance, resolve(instance).one)


def parse_value(instance: ids.SemiringId, text: str) -> SemiringValue:
    """Read a scalar such as ``3``, ``inf`` or a chain level."""
    return SemiringValue(instance, resolve(instance).parse_scalar(text))


def carrier(instance: ids.SemiringId) -> tuple[SemiringValue, ...] | None:
    """All values of a finite instance, in canonical order."""
    elements = resolve(instance).carrier()
    if elements is None:
        return None
    return tuple(SemiringValue(instance, x) for x in elements)


def add(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    return a + b


def mul(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    return a * b


def star(a: SemiringValue) -> SemiringValue:
    return a.star()


def leq(a: SemiringValue, b: SemiringValue) -> bool:
    return a.leq(b)


def total(values: Iterable[SemiringValue], instance: ids.SemiringId) -> SemiringValue:
    """Sum of a finite family; the empty sum is zero."""
    acc = zero(instance)
    for v in values:
        acc += v
    return acc


def inverse(a: SemiringValue) -> SemiringValue | None:
    """Multiplicative inverse: carrier search on finite instances, closed form otherwise."""
    if (elements := carrier(a.instance)) is not None:
        e = one(a.instance)
        return next((d for d in elements if a * d == e and d * a == e), None)
    x = a.semiring.inverse(a.value)
    return None if x is None else SemiringValue(a.instance, x)


def check_star_axioms(a: SemiringValue, b: SemiringValue) -> reports.StarAxiomsReport:
    """Evaluate the fixed point identity, its dual, sum-star and product-star on (a, b)."""
    a.same_instance(b)
    e = one(a.instance)
    sides = {
        "fixed-point": (a.star(), a * a.star() + e),
        "dual-fixed-point": (a.star(), a.star() * a + e),
        "sum-star": ((a + b).star(), (a.star() * b).star() * a.star()),
        "product-star": ((a * b).star(), e + a * (b * a).star() * b),
    }
    return reports.StarAxiomsReport(
        semiring=str(a.instance),
        a=str(a),
        b=str(b),
        checks=[
            reports.IdentityCheck(name=name, lhs=str(lhs), rhs=str(rhs), holds=lhs == rhs)
            for name, (lhs, rhs) in sides.items()
        ],
    )


def check_lpfp(a: SemiringValue, b: SemiringValue, x: SemiringValue, *, dual: bool = False) -> reports.LpfpReport:
    """Check the (dual) least pre-fixed point rule and its equational variant on one triple.

    With ``dual`` the premise is xa + b ≤ x and the conclusion ba* ≤ x,
    otherwise ax + b ≤ x and a*b ≤ x.
    """
    a.same_instance(b)
    a.same_instance(x)
    lhs = x * a + b if dual else a * x + b
    least = b * a.star() if dual else a.star() * b
    premise = lhs.leq(x)
    equational_premise = lhs == x
    sum_below = a.semiring.sum_witness(least.value, x.value) is not None
    return reports.LpfpReport(
        semiring=str(a.instance),
        a=str(a),
        b=str(b),
        x=str(x),
        dual=dual,
        premise=premise,
        conclusion=least.leq(x),
        equational_premise=equational_premise,
        equational_conclusion=sum_below,
    )


def check_order_coincidence(a: SemiringValue, b: SemiringValue) -> reports.OrderReport:
    """Compare the canonical order with the sum order on one pair.

    The sum order is decided with the instance's constructive witness, which is
    then verified by recomputing a + r.
    """
    a.same_instance(b)
    r = a.semiring.sum_witness(a.value, b.value)
    witness = None if r is None else SemiringValue(a.instance, r)
    return reports.OrderReport(
        semiring=str(a.instance),
        a=str(a),
        b=str(b),
        leq=a.leq(b),
        witness=None if witness is None else str(witness),
        witness_verified=witness is not None and a + witness == b,
    )


def exhaustive_sum_order(a: SemiringValue, b: SemiringValue) -> bool | None:
    """Decide a ⪯ b by searching the whole carrier; None for infinite instances."""
    elements = carrier(a.instance)
    if elements is None:
        return None
    return any(a + r == b for r in elements)


def check_idempotent_order(a: SemiringValue, b: SemiringValue) -> bool:
    """For idempotent instances, a ≤ b iff a + b = b (the semilattice order)."""
    return a.leq(b) == (a + b == b)


def check_monotone_star(a: SemiringValue, b: SemiringValue) -> bool:
    """a ≤ b implies a* ≤ b*."""
    a.same_instance(b)
    return not a.leq(b) or a.star().leq(b.star())


def check_positivity(s: SemiringValue) -> bool:
    """0 ≤ s."""
    return zero(s.instance).leq(s)


def check_order_preservation(a: SemiringValue, b: SemiringValue, c: SemiringValue) -> bool:
    """a ≤ b implies a + c ≤ b + c, ac ≤ bc and ca ≤ cb."""
    a.same_instance(b)
    a.same_instance(c)
    return not a.leq(b) or ((a + c).leq(b + c) and (a * c).leq(b * c) and (c * a).leq(c * b))


def _candidate_pool(values: Sequence[SemiringValue]) -> list[SemiringValue]:
    instance = values[0].instance
    sr = resolve(instance)
    match instance.kind:
        case enums.SemiringKind.boolean | enums.SemiringKind.chain:
            pool = list(carrier(instance) or ())
        case enums.SemiringKind.nat_inf:
            top = max((finite(v.value) for v in values if v.value is not INF), default=0)
            pool = [SemiringValue(instance, x) for x in range(1, top + 1)]
            pool.append(SemiringValue(instance, INF))
        case enums.SemiringKind.tropical_nat_inf:
            # pairwise meets of summands refine any two equal sums, so summands suffice
            pool = sorted(set(values), key=lambda v: (v.value is INF, 0 if v.value is INF else v.value))
        case _:  # pragma: no cover
            assert_never(instance.kind)
    return [c for c in pool if c.value != sr.zero]


def _north_west_corner(a: list[int], b: list[int]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Common refinement of two finite families of naturals with equal sums; zero cells are dropped."""
    c: list[int] = []
    a_parts: list[list[int]] = [[] for _ in a]
    b_parts: list[list[int]] = [[] for _ in b]
    i = j = 0
    rest_a, rest_b = list(a), list(b)
    while i < len(a) and j < len(b):
        amount = min(rest_a[i], rest_b[j])
        if amount:
            a_parts[i].append(len(c))
            b_parts[j].append(len(c))
            c.append(amount)
        rest_a[i] -= amount
        rest_b[j] -= amount
        if not rest_a[i]:
            i += 1
        if not rest_b[j]:
            j += 1
    return c, a_parts, b_parts


def atomistic_witness(
    a_list: Sequence[SemiringValue],
    b_list: Sequence[SemiringValue],
    max_k: int,
) -> reports.AtomisticReport:
    """Search for a common refinement of two equal finite sums.

    Over nat-inf with finite summands the north-west corner rule is tried first: it
    walks the a × b grid from the top-left cell, filling each cell with the smaller
    remaining amount. Otherwise, or when that rule needs more than ``max_k`` values,
    looks for c_1, …, c_k (k ≤ ``max_k``) drawn from a bounded candidate pool and an
    assignment of every c to one a-block and one b-block such that each a_i and b_j
    is the sum of its block. A failed search is not a disproof.

    Raises:
        EmptyFamiliesError: If both families are empty.
        SumMismatchError: If the two families do not have the same sum.
    """
    values = [*a_list, *b_list]
    if not values:
        raise EmptyFamiliesError
    instance = values[0].instance
    for v in values:
        values[0].same_instance(v)
    left, right = total(a_list, instance), total(b_list, instance)
    if left != right:
        raise SumMismatchError(left=str(left), right=str(right))

    def found(c: Sequence[SemiringValue], a_parts: list[list[int]], b_parts: list[list[int]]) -> reports.AtomisticReport:
        logger.debug("Atomistic witness of size %d found", len(c))
        return reports.AtomisticReport(
            semiring=str(instance),
            a=[str(v) for v in a_list],
            b=[str(v) for v in b_list],
            max_k=max_k,
            found=True,
            c=[str(v) for v in c],
            parts_a=[[i + 1 for i in part] for part in a_parts],
            parts_b=[[i + 1 for i in part] for part in b_parts],
        )

    if instance.kind is enums.SemiringKind.nat_inf and all(v.value is not INF for v in values):
        amounts, corner_a, corner_b = _north_west_corner(
            [finite(v.value) for v in a_list],
            [finite(v.value) for v in b_list],
        )
        if len(amounts) <= max_k:
            return found([SemiringValue(instance, x) for x in amounts], corner_a, corner_b)

    pool = _candidate_pool(values)
    m, n = len(a_list), len(b_list)
    for k in range(max_k + 1):
        for c in itertools.combinations_with_replacement(pool, k):
            for cells in itertools.product(range(m * n), repeat=k):
                a_parts: list[list[int]] = [[] for _ in range(m)]
                b_parts: list[list[int]] = [[] for _ in range(n)]
                for idx, cell in enumerate(cells):
                    a_parts[cell // n].append(idx)
                    b_parts[cell % n].append(idx)
                if all(total((c[i] for i in part), instance) == a for part, a in zip(a_parts, a_list, strict=True)) and all(
                    total((c[i] for i in part), instance) == b for part, b in zip(b_parts, b_list, strict=True)
                ):
                    return found(c, a_parts, b_parts)

    return reports.AtomisticReport(
        semiring=str(instance),
        a=[str(v) for v in a_list],
        b=[str(v) for v in b_list],
        max_k=max_k,
        found=False,
    )
