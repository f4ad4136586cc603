import numpy as np
import pytest

from qbd.errors import CapabilityError, DomainError
from qbd.qbasis import (
    BasisSpec,
    SortedNodes,
    all_minors_nonneg,
    bernstein_all,
    bernstein_basis,
    bernstein_matrix,
    collocation_matrix,
    sign_changes,
)
from qbd.qcore import QParam


def test_basis_examples():
    assert bernstein_basis(BasisSpec(0, QParam(0.4)), 0, 0.77) == 1.0
    assert abs(bernstein_basis(BasisSpec(2, QParam(0.5)), 1, 0.5) - 0.375) < 1e-15
    with pytest.raises(DomainError):
        bernstein_basis(BasisSpec(2, QParam(0.5)), 3, 0.5)
    with pytest.raises(DomainError):
        bernstein_basis(BasisSpec(2, QParam(0.5)), 1, 1.2)


def test_bernstein_all_examples():
    assert np.allclose(bernstein_all(BasisSpec(1, QParam(0.9)), 0.3), [0.7, 0.3])
    assert np.allclose(bernstein_all(BasisSpec(3, QParam(0.6)), 0.0), [1, 0, 0, 0])
    vals = bernstein_all(BasisSpec(3, QParam(0.6)), 0.4)
    assert abs(vals.sum() - 1.0) < 1e-12


def test_partition_of_unity_grid():
    xs = np.linspace(0.0, 1.0, 101)
    for n in (1, 4, 11, 32):
        for q in (0.3, 0.5, 0.9, 0.99):
            sums = bernstein_matrix(BasisSpec(n, QParam(q)), xs).sum(axis=1)
            assert np.max(np.abs(sums - 1.0)) < 1e-12


def test_nonnegativity_and_endpoints():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 12))
        q = float(rng.uniform(0.2, 0.99))
        spec = BasisSpec(n, QParam(q))
        xs = rng.uniform(0, 1, 16)
        assert np.all(bernstein_matrix(spec, xs) >= 0.0)
        left = bernstein_all(spec, 0.0)
        right = bernstein_all(spec, 1.0)
        assert left[0] == 1.0 and np.all(left[1:] == 0.0)
        assert right[n] == 1.0 and np.all(right[:n] == 0.0)


def test_sorted_nodes_validation():
    SortedNodes((0.1, 0.5, 0.9))
    with pytest.raises(DomainError):
        SortedNodes((0.5, 0.5))
    with pytest.raises(DomainError):
        SortedNodes((0.2, 1.4))


def test_collocation_examples():
    ones = collocation_matrix([lambda t: 1.0], SortedNodes((0.2, 0.8)))
    assert np.allclose(ones, [[1.0], [1.0]])
    spec = BasisSpec(1, QParam(0.5))
    funcs = [lambda t: bernstein_basis(spec, 0, t), lambda t: bernstein_basis(spec, 1, t)]
    assert np.allclose(collocation_matrix(funcs, SortedNodes((0.0, 1.0))), np.eye(2))
    with pytest.raises(DomainError):
        collocation_matrix([], SortedNodes((0.5,)))


def test_minor_check_examples():
    assert all_minors_nonneg(np.eye(3), 3).ok
    res = all_minors_nonneg([[1.0, 2.0], [3.0, 1.0]], 2)
    assert not res.ok
    assert abs(res.det + 5.0) < 1e-12
    assert res.rows == (0, 1) and res.cols == (0, 1)
    with pytest.raises(CapabilityError):
        all_minors_nonneg(np.eye(5), 5)
    with pytest.raises(DomainError):
        all_minors_nonneg(np.eye(2), 0)


def test_total_positivity_sampled():
    # q-Bernstein collocation matrices at random sorted node triples
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(1, 11))
        q = float(rng.uniform(0.2, 0.98))
        nodes = np.sort(rng.uniform(0.0, 1.0, 3))
        if nodes[1] - nodes[0] < 1e-6 or nodes[2] - nodes[1] < 1e-6:
            continue
        M = bernstein_matrix(BasisSpec(n, QParam(q)), nodes)
        res = all_minors_nonneg(M, 3)
        assert res.ok, (n, q, nodes, res)


def test_sign_changes_examples():
    assert sign_changes([1, -1, 1]) == 2
    assert sign_changes([1, 0, 1]) == 0
    assert sign_changes([0.5, -0.2, 0, -0.1, 3]) == 2
    assert sign_changes([]) == 0
    assert sign_changes([0.0, 0.0]) == 0


def test_sign_changes_scale_invariance():
    rng = np.random.default_rng(5)
    for _ in range(50):
        vals = rng.normal(size=12)
        scale = float(rng.uniform(0.1, 100.0))
        assert sign_changes(vals) == sign_changes(scale * vals)
