import pytest

import numpy as np

from pysrlda import linalg
from pysrlda.exceptions import (
    DimensionError, InsufficientSamplesError, NotSymmetricError
)

TOL = 1e-10

def _naive_pooled(X0, X1):
    p = X0.shape[1]
    S = np.zeros((p, p))
    for X in (X0, X1):
        m = X.mean(axis=0)
        for x in X:
            S += np.outer(x - m, x - m)
    return S / (X0.shape[0] + X1.shape[0] - 2)

def test_pooled_covariance_example():
    S = linalg.pooled_covariance([[1., 0.], [-1., 0.]], [[0., 1.], [0., -1.]])
    assert np.allclose(S.matrix, np.eye(2), atol=TOL)
    assert S.n == 4
    assert np.allclose(S.mean_difference, 0.)

@pytest.mark.parametrize('n0,n1,p', [(2,1,2), (5,7,3), (20,4,10)])
def test_pooled_covariance_matches_sum(n0, n1, p):
    rng = np.random.default_rng(n0 + n1 + p)
    X0 = rng.standard_normal((n0, p)) + 1.
    X1 = rng.standard_normal((n1, p)) * 2.

    S = linalg.pooled_covariance(X0, X1)
    assert np.allclose(S.matrix, _naive_pooled(X0, X1), atol=TOL)
    assert np.array_equal(S.matrix, S.matrix.T)
    assert np.all(np.linalg.eigvalsh(S.matrix) > -TOL)
    assert np.allclose(S.mean_difference, X0.mean(axis=0) - X1.mean(axis=0))

    # Row order within a class does not matter
    S_perm = linalg.pooled_covariance(X0[::-1], rng.permutation(X1))
    assert np.allclose(S_perm.matrix, S.matrix, atol=TOL)

def test_pooled_covariance_identical_samples():
    X0 = np.tile([1., 2., 3.], (4, 1))
    X1 = np.tile([0., 0., 1.], (3, 1))
    S = linalg.pooled_covariance(X0, X1)
    assert np.allclose(S.matrix, 0.)

def test_pooled_covariance_errors():
    with pytest.raises(DimensionError):
        linalg.pooled_covariance(np.ones((3, 2)), np.ones((3, 3)))
    with pytest.raises(InsufficientSamplesError):
        linalg.pooled_covariance(np.ones((1, 2)), np.ones((1, 2)))
    with pytest.raises(InsufficientSamplesError):
        linalg.pooled_covariance(np.ones((0, 2)), np.ones((4, 2)))

def test_symmetric_eigen_diagonal():
    eig = linalg.symmetric_eigen(np.diag([2., 5., 1.]))
    assert np.allclose(eig.eigenvalues, [5., 2., 1.])
    assert np.allclose(eig.eigenvectors, np.eye(3)[:, [1, 0, 2]])

def test_symmetric_eigen_two_by_two():
    eig = linalg.symmetric_eigen(np.array([[2., 1.], [1., 2.]]))
    assert np.allclose(eig.eigenvalues, [3., 1.])
    assert np.allclose(eig.eigenvectors[:, 0], np.ones(2) / np.sqrt(2.))

    u2 = eig.eigenvectors[:, 1]
    assert np.isclose(abs(u2 @ np.array([1., -1.])) / np.sqrt(2.), 1.)
    assert u2[np.argmax(np.abs(u2))] > 0.

@pytest.mark.parametrize('p', [1, 4, 25])
def test_symmetric_eigen_random(p):
    rng = np.random.default_rng(p)
    A = rng.standard_normal((p, 2 * p))
    S = A @ A.T / (2 * p)

    eig = linalg.symmetric_eigen(S)
    l, U = eig.eigenvalues, eig.eigenvectors

    assert np.all(np.diff(l) <= 0.)
    assert np.allclose(U.T @ U, np.eye(p), atol=TOL)
    assert np.allclose(S @ U, U * l, atol=1e-9)
    assert np.allclose(eig.reconstruct(), S, atol=1e-9)
    assert np.isclose(l.sum(), np.trace(S))

    idx = np.argmax(np.abs(U), axis=0)
    assert np.all(U[idx, np.arange(p)] > 0.)

    # Repeated calls on the same input give bit-identical output
    again = linalg.symmetric_eigen(S)
    assert np.array_equal(again.eigenvalues, l)
    assert np.array_equal(again.eigenvectors, U)

def test_symmetric_eigen_errors():
    with pytest.raises(NotSymmetricError):
        linalg.symmetric_eigen(np.array([[1., 2.], [0., 1.]]))
    with pytest.raises(DimensionError):
        linalg.symmetric_eigen(np.ones((2, 3)))

    # Asymmetry below the relative tolerance is accepted
    S = np.array([[1., 0.5], [0.5 + 1e-13, 1.]])
    assert np.allclose(linalg.symmetric_eigen(S).eigenvalues, [1.5, 0.5])

def test_spike_index_aliasing():
    eig = linalg.symmetric_eigen(np.diag([4., 3., 2., 1.]))
    assert eig.position(1) == 0
    assert eig.position(-1) == 3
    assert eig.position(-2) == 2
    assert eig.eigenvalue(-1) == eig.eigenvalues[-1]
    assert np.array_equal(eig.eigenvector(2), eig.eigenvectors[:, 1])

    for j in (0, 5, -5):
        with pytest.raises(IndexError):
            eig.position(j)

def test_ridge_apply():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((8, 5))
    S = A @ A.T / 5.
    v = rng.standard_normal(8)
    eig = linalg.symmetric_eigen(S)

    x = linalg.ridge_apply(eig, v, 0.3)
    assert np.allclose(x, np.linalg.solve(S + 0.3 * np.eye(8), v), atol=TOL)

    gammas = np.array([0.01, 1., 100.])
    X = linalg.ridge_apply(eig, v, gammas)
    assert X.shape == (8, 3)
    for k, g in enumerate(gammas):
        assert np.allclose(
            X[:, k], np.linalg.solve(S + g * np.eye(8), v), atol=1e-8
        )
