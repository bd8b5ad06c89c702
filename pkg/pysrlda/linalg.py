import numpy as np
from scipy import linalg

from .exceptions import (
    DimensionError, EigenSolverError, InsufficientSamplesError,
    NotSymmetricError
)

SYMMETRY_RTOL = 1e-9

class PooledCovariance:
    '''Pooled within-class sample covariance with divisor n - 2.

    Attributes
    ----------
    matrix : (p, p) array
        Symmetric positive semidefinite matrix S.
    n0, n1 : int
        Per-class sample counts.
    class_means : tuple of (p,) arrays
        Class means (x0_bar, x1_bar).
    '''
    def __init__(self, matrix, n0, n1, class_means):
        self.matrix = matrix
        self.n0, self.n1 = int(n0), int(n1)
        self.class_means = tuple(class_means)

    @property
    def n(self):
        return self.n0 + self.n1

    @property
    def p(self):
        return self.matrix.shape[0]

    @property
    def mean_difference(self):
        '''mu_hat = x0_bar - x1_bar.'''
        return self.class_means[0] - self.class_means[1]

class EigenDecomposition:
    '''Sorted spectral decomposition S = U diag(l) U^T.

    Eigenvalues are in non-increasing order and column j of `eigenvectors`
    belongs to eigenvalue j. Spike indices follow the 1-based convention of
    the spiked model: j > 0 counts from the top of the spectrum, j < 0 from
    the bottom, so index -1 aliases the last (smallest) pair.
    '''
    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors

    @property
    def p(self):
        return self.eigenvalues.shape[0]

    def position(self, j):
        '''0-based column for spike index j (j >= 1 or j <= -1).'''
        j = int(j)
        if j == 0 or abs(j) > self.p:
            raise IndexError('spike index %d out of range for p=%d' % (j, self.p))
        return j - 1 if j > 0 else self.p + j

    def eigenvalue(self, j):
        return self.eigenvalues[self.position(j)]

    def eigenvector(self, j):
        return self.eigenvectors[:, self.position(j)]

    def reconstruct(self):
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T

def _as_class_block(samples, name):
    X = np.asarray(samples, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[0] == 0:
        raise InsufficientSamplesError('%s must contain at least one sample' % name)
    return X

def pooled_covariance(class0, class1):
    '''
    Pooled sample covariance of two classes,
        S = 1/(n-2) sum_i sum_{x in class i} (x - x_i_bar)(x - x_i_bar)^T,
    with n = n0 + n1.

    Parameters
    ----------
    class0 : (n0, p) array
        Samples of class 0, one per row.
    class1 : (n1, p) array
        Samples of class 1, one per row.

    Returns
    -------
    S : PooledCovariance
        Covariance matrix together with both class means and counts.

    Raises
    ------
    DimensionError
        If the two classes have different feature lengths.
    InsufficientSamplesError
        If a class is empty or n0 + n1 <= 2.
    '''
    X0 = _as_class_block(class0, 'class0')
    X1 = _as_class_block(class1, 'class1')
    if X0.shape[1] != X1.shape[1]:
        raise DimensionError(
            'class0 has %d features but class1 has %d'
            % (X0.shape[1], X1.shape[1])
        )

    n0, n1 = X0.shape[0], X1.shape[0]
    if n0 + n1 <= 2:
        raise InsufficientSamplesError(
            'pooled covariance needs n0 + n1 > 2, got %d' % (n0 + n1)
        )

    mean0, mean1 = X0.mean(axis=0), X1.mean(axis=0)
    C0, C1 = X0 - mean0, X1 - mean1

    S = (C0.T @ C0 + C1.T @ C1) / (n0 + n1 - 2)
    S = (S + S.T) / 2.

    return PooledCovariance(S, n0, n1, (mean0, mean1))

def _check_symmetric(S):
    scale = max(1., np.max(np.abs(S)))
    if np.max(np.abs(S - S.T)) > SYMMETRY_RTOL * scale:
        raise NotSymmetricError(
            'matrix is not symmetric to relative tolerance %g' % SYMMETRY_RTOL
        )

def fix_signs(U):
    '''
    Flips eigenvector columns so the entry of largest magnitude in each is
    positive. Ties are resolved in favour of the lowest row index.

    Parameters
    ----------
    U : (p, k) array
        Eigenvectors as columns.

    Returns
    -------
    U : (p, k) array
        Sign-normalized copy.
    '''
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0.] = 1.
    return U * signs

def symmetric_eigen(S):
    '''
    Full symmetric eigendecomposition with eigenvalues sorted in
    non-increasing order and a deterministic eigenvector sign convention
    (see `fix_signs`). The input is symmetrized as (S + S^T)/2 before the
    LAPACK solver is called.

    Parameters
    ----------
    S : PooledCovariance or (p, p) array
        Symmetric matrix.

    Returns
    -------
    eig : EigenDecomposition
        Sorted eigenvalues l_1 >= ... >= l_p and orthonormal eigenvectors.

    Raises
    ------
    NotSymmetricError
        If S departs from symmetry beyond the relative tolerance 1e-9.
    EigenSolverError
        If the eigensolver does not converge.
    '''
    if isinstance(S, PooledCovariance):
        S = S.matrix
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError('matrix must be square, got shape %r' % (S.shape,))

    _check_symmetric(S)
    S = (S + S.T) / 2.

    try:
        l, U = linalg.eigh(S, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise EigenSolverError('symmetric eigensolver failed: %s' % e) from e

    l, U = l[::-1], U[:, ::-1]
    return EigenDecomposition(np.ascontiguousarray(l), fix_signs(U))

def ridge_apply(eig, v, gamma):
    '''
    Computes (S + gamma I)^{-1} v from the eigendecomposition of S.

    Parameters
    ----------
    eig : EigenDecomposition
        Decomposition of S.
    v : (p,) array
        Right-hand side.
    gamma : float or (k,) array
        Ridge parameter(s), gamma > 0 whenever S is singular.

    Returns
    -------
    x : (p,) or (p, k) array
        Solution for each gamma (one column per gamma if gamma is an array).
    '''
    coef = eig.eigenvectors.T @ v
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim == 0:
        return eig.eigenvectors @ (coef / (eig.eigenvalues + gamma))
    scaled = coef[:, None] / (eig.eigenvalues[:, None] + gamma[None, :])
    return eig.eigenvectors @ scaled
