"""Test matrices over semirings and the block star."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleene_workbench import enums, ids, matrix, sampling, semiring
from kleene_workbench.matrix import KMatrix
from kleene_workbench.semiring import INF
from tests import strategies

NAT = ids.NAT_INF
BOOL = ids.BOOLEAN


def test_product() -> None:
    """Matrix products over the boolean and nat-inf instances."""
    swap = KMatrix.of(BOOL, [[0, 1], [1, 0]])
    assert matrix.mat_mul(swap, swap) == KMatrix.identity(BOOL, 2)
    assert matrix.mat_mul(KMatrix.of(NAT, [[2]]), KMatrix.of(NAT, [[3]])) == KMatrix.of(NAT, [[6]])


def test_add_and_scale() -> None:
    """Entrywise sums and scaling, with infinity and zero."""
    m = KMatrix.of(NAT, [[1, 0], [2, INF]])
    assert matrix.mat_add(m, m) == KMatrix.of(NAT, [[2, 0], [4, INF]])
    assert matrix.mat_scale(semiring.SemiringValue(NAT, 0), m) == KMatrix.zeros(NAT, 2, 2)


def test_dimension_mismatch() -> None:
    """Incompatible shapes and ragged rows are rejected."""
    with pytest.raises(matrix.DimensionMismatchError, match=r"multiply"):
        KMatrix.of(NAT, [[1, 2]]) * KMatrix.of(NAT, [[1, 2]])
    with pytest.raises(matrix.DimensionMismatchError):
        KMatrix.of(NAT, [[1, 2]]).star()
    with pytest.raises(matrix.DimensionMismatchError):
        KMatrix.of(NAT, [[1, 2], [3]])


def test_instance_mismatch() -> None:
    """Matrices over different instances cannot be added."""
    with pytest.raises(semiring.InstanceMismatchError):
        KMatrix.identity(NAT, 2) + KMatrix.identity(BOOL, 2)


@pytest.mark.parametrize(
    ("instance", "m", "expected"),
    [
        (BOOL, [[0, 1], [0, 0]], [[1, 1], [0, 1]]),
        (NAT, [[1]], [[INF]]),
        (NAT, [[1, 0], [0, 1]], [[INF, 0], [0, INF]]),
        (NAT, [[0, 2], [0, 0]], [[1, 2], [0, 1]]),
        (ids.TROPICAL, [[5, 1], [2, 5]], [[0, 1], [2, 0]]),
        (ids.chain(3), [[0, 1], [0, 0]], [[2, 1], [0, 2]]),
    ],
)
def test_star(instance: ids.SemiringId, m: list[list[semiring.Scalar]], expected: list[list[semiring.Scalar]]) -> None:
    """Block and literal stars agree with known closures."""
    km = KMatrix.of(instance, m)
    assert matrix.mat_star(km) == KMatrix.of(instance, expected)
    assert matrix.mat_star(km, literal=True) == KMatrix.of(instance, expected)


def test_star_of_path_closure() -> None:
    """The boolean star of a path is its reflexive-transitive closure."""
    path = KMatrix.of(BOOL, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert path.star() == KMatrix.of(BOOL, [[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    for k in (1, 2):
        assert path.star(split=k) == path.star()


@given(st.data())
def test_partition_invariance(data: st.DataObject) -> None:
    """The star does not depend on the block split."""
    instance = data.draw(strategies.instances())
    m = data.draw(strategies.square_matrices(instance))
    canonical = m.star()
    for k in range(1, m.rows):
        assert m.star(split=k) == canonical
    assert m.star(literal=True) == canonical


@given(st.data())
def test_star_fixed_points(data: st.DataObject) -> None:
    """The star solves both fixed point equations."""
    instance = data.draw(strategies.instances())
    m = data.draw(strategies.square_matrices(instance))
    s, e = m.star(), KMatrix.identity(instance, m.rows)
    assert s == m * s + e
    assert s == s * m + e


@given(st.data())
def test_sum_star_and_product_star(data: st.DataObject) -> None:
    """Sum-star and product-star hold for random matrices."""
    instance = data.draw(strategies.instances())
    rng = data.draw(strategies.rngs())
    n = data.draw(st.integers(min_value=1, max_value=3))
    a, b = sampling.random_matrix(rng, instance, n, n), sampling.random_matrix(rng, instance, n, n)
    e = KMatrix.identity(instance, n)
    assert (a + b).star() == (a.star() * b).star() * a.star()
    assert (a * b).star() == e + a * (b * a).star() * b


@given(st.data())
def test_diagonal_star(data: st.DataObject) -> None:
    """The star of a diagonal matrix is taken entrywise."""
    instance = data.draw(strategies.instances())
    d = sampling.random_diagonal(data.draw(strategies.rngs()), instance, 3)
    s = d.star()
    for i in range(3):
        assert s[i, i] == d[i, i].star()


@pytest.mark.parametrize(
    ("instance", "m", "kind"),
    [
        (BOOL, [[1, 0], [0, 1], [0, 1]], enums.MatrixShapeKind.functional),
        (BOOL, [[1, 0, 0], [0, 1, 1]], enums.MatrixShapeKind.dual_functional),
        (BOOL, [[1, 0], [0, 1]], enums.MatrixShapeKind.invertible_diagonal),
        (NAT, [[2, 0], [0, 2]], enums.MatrixShapeKind.diagonal),
        (NAT, [[2, 1], [0, 2]], enums.MatrixShapeKind.general),
        (ids.TROPICAL, [[0, INF], [INF, 0]], enums.MatrixShapeKind.invertible_diagonal),
    ],
)
def test_classify(instance: ids.SemiringId, m: list[list[semiring.Scalar]], kind: enums.MatrixShapeKind) -> None:
    """Matrices are classified by their most specific shape."""
    shape = matrix.classify(KMatrix.of(instance, m))
    assert shape.kind is kind
    assert kind in shape.matches
    assert enums.MatrixShapeKind.general in shape.matches


def test_functorial_scalar() -> None:
    """One by one matrices reduce to the scalar functorial star."""
    report = matrix.functorial_check(KMatrix.of(NAT, [[2]]), KMatrix.of(NAT, [[2]]), KMatrix.of(NAT, [[3]]))
    assert report.premise
    assert report.conclusion
    assert report.passed
    assert "strong functorial star (symmetric inductive)" in report.predicted_by


def test_functorial_zero_connector() -> None:
    """A zero connector makes both sides zero."""
    a = KMatrix.of(NAT, [[1, 2], [0, 3]])
    b = KMatrix.of(NAT, [[4]])
    report = matrix.functorial_check(a, b, KMatrix.zeros(NAT, 2, 1))
    assert report.premise
    assert report.passed


def test_functorial_premise_fails() -> None:
    """Without AC = CB the check passes vacuously."""
    a = KMatrix.of(BOOL, [[0, 1], [0, 0]])
    report = matrix.functorial_check(a, KMatrix.of(BOOL, [[1]]), KMatrix.of(BOOL, [[1], [1]]))
    assert not report.premise
    assert report.conclusion is None
    assert report.passed
    assert report.shape is enums.MatrixShapeKind.functional


def test_functorial_shape_mismatch() -> None:
    """Connectors of the wrong shape are rejected."""
    with pytest.raises(matrix.DimensionMismatchError):
        matrix.functorial_check(KMatrix.identity(NAT, 2), KMatrix.identity(NAT, 2), KMatrix.identity(NAT, 3))


@given(st.data())
def test_functorial_star_on_commuting_triples(data: st.DataObject) -> None:
    """Commuting triples satisfy A*C = CB*."""
    instance = data.draw(strategies.instances())
    a, b, c = sampling.commuting_triple(data.draw(strategies.rngs()), instance, 3)
    report = matrix.functorial_check(a, b, c)
    assert report.premise
    assert report.conclusion


def test_leq_and_transpose() -> None:
    """The entrywise order and the transpose."""
    a = KMatrix.of(NAT, [[1, 2], [0, 3]])
    b = KMatrix.of(NAT, [[1, INF], [4, 3]])
    assert matrix.mat_leq(a, b)
    assert not matrix.mat_leq(b, a)
    assert a.transpose() == KMatrix.of(NAT, [[1, 0], [2, 3]])


def test_kron_identity() -> None:
    """Kronecker product with an identity matrix."""
    m = KMatrix.of(NAT, [[2, 3]])
    assert matrix.kron_identity(m, 2) == KMatrix.of(NAT, [[2, 0, 3, 0], [0, 2, 0, 3]])


def test_star_blocks_on_plain_values() -> None:
    """The block star on raw rows matches the matrix star."""
    rng = random.Random(7)
    m = sampling.random_matrix(rng, ids.chain(4), 4, 4)
    rows = matrix.star_blocks(m.block(), zero=semiring.zero(m.instance), one=semiring.one(m.instance), split=2)
    assert KMatrix.from_block(m.instance, rows) == m.star()
