'''Spiked covariance model, plug-in spike estimators and the eigenvector
angle factor.

The population covariance is Sigma = sigma2 * (I + sum_j lambda_j v_j v_j^T)
with positive spikes lambda_1 >= ... >= lambda_{r1} > 0 and negative spikes
-1 < lambda_{-1} <= ... <= lambda_{-r2} < 0. Positive spike j pairs with the
j-th largest sample eigenpair, negative spike -j with the j-th smallest.
'''

import logging

import numpy as np

from .exceptions import (
    InfeasibleEstimateError, InsufficientSamplesError, UndetectableSpikeError
)

logger = logging.getLogger(__name__)

DETECTION_MARGIN = 0.05

class SpikedModelParams:
    '''Population-side description of a spiked covariance.

    Parameters
    ----------
    sigma2 : float
        Noise level sigma^2 > 0.
    pos_spikes : sequence of float
        Positive spikes in non-increasing order.
    neg_spikes : sequence of float, optional
        Negative spikes in (-1,0), starting with lambda_{-1}, the most
        negative one.
    directions : (p, r1 + r2) array, optional
        Orthonormal spike directions, positive spikes first then negative
        spikes in the same order as the weights. Simulation only.
    '''
    def __init__(self, sigma2, pos_spikes, neg_spikes=(), directions=None):
        self.sigma2 = float(sigma2)
        self.pos_spikes = np.asarray(pos_spikes, dtype=float).reshape(-1)
        self.neg_spikes = np.asarray(neg_spikes, dtype=float).reshape(-1)

        if self.sigma2 <= 0.:
            raise ValueError('sigma2 must be positive, got %r' % self.sigma2)
        if (self.pos_spikes <= 0.).any():
            raise ValueError('positive spikes must be > 0')
        if np.any(np.diff(self.pos_spikes) > 0.):
            raise ValueError('positive spikes must be non-increasing')
        if ((self.neg_spikes <= -1.) | (self.neg_spikes >= 0.)).any():
            raise ValueError('negative spikes must lie in (-1,0)')
        if np.any(np.diff(self.neg_spikes) < 0.):
            raise ValueError(
                'negative spikes must start from the most negative one'
            )

        if directions is not None:
            directions = np.asarray(directions, dtype=float)
            if directions.shape[1] != self.r1 + self.r2:
                raise ValueError(
                    'expected %d spike directions, got %d'
                    % (self.r1 + self.r2, directions.shape[1])
                )
            gram = directions.T @ directions
            if not np.allclose(gram, np.eye(gram.shape[0]), atol=1e-10):
                raise ValueError('spike directions must be orthonormal')
        self.directions = directions

    @property
    def r1(self):
        return self.pos_spikes.shape[0]

    @property
    def r2(self):
        return self.neg_spikes.shape[0]

    @property
    def spikes(self):
        '''All spike weights, positive group first.'''
        return np.concatenate((self.pos_spikes, self.neg_spikes))

    def covariance(self):
        '''Dense population covariance; needs `directions`.'''
        V = self.directions
        p = V.shape[0]
        return self.sigma2 * (np.eye(p) + (V * self.spikes) @ V.T)

class AspectRatios:
    '''Dimension-to-sample ratios J = p/n, J0 = p/n0 and J1 = p/n1.'''
    def __init__(self, J, J0, J1):
        self.J, self.J0, self.J1 = float(J), float(J0), float(J1)
        if min(self.J, self.J0, self.J1) <= 0.:
            raise ValueError('aspect ratios must be positive')

    @classmethod
    def from_counts(cls, p, n0, n1):
        if n0 <= 0 or n1 <= 0:
            raise InsufficientSamplesError('both classes must be non-empty')
        ratios = cls(p / (n0 + n1), p / n0, p / n1)
        if ratios.J >= 1.:
            logger.warning(
                'p/n = %.3f >= 1: pooled covariance is rank deficient and '
                'negative spikes are undetectable', ratios.J
            )
        return ratios

class SpikeEstimates:
    '''Plug-in estimates for the retained spikes.

    Attributes
    ----------
    indices : (r,) int array
        Spike indices (positive j >= 1, negative j <= -1).
    lambda_hat : (r,) array
        Corrected spike weights.
    b_hat : (r,) array
        Projection weights of the mean difference, each in [0,1].
    alpha_hat : float
        Estimate of sigma^2/||mu||^2.
    a : (r,) array
        Angle factors (lambda^2 - J)/(lambda (lambda + J)).
    '''
    def __init__(self, indices, lambda_hat, b_hat, alpha_hat, a):
        self.indices = np.asarray(indices, dtype=int)
        self.lambda_hat = np.asarray(lambda_hat, dtype=float)
        self.b_hat = np.asarray(b_hat, dtype=float)
        self.alpha_hat = float(alpha_hat)
        self.a = np.asarray(a, dtype=float)

    @property
    def r1(self):
        return int(np.sum(self.indices > 0))

    @property
    def r2(self):
        return int(np.sum(self.indices < 0))

def is_detectable(lam, J):
    '''
    Detectability of a spike weight (phase-transition condition): positive
    spikes need lambda > sqrt(J), negative spikes -1 < lambda < -sqrt(J).
    '''
    root = np.sqrt(J)
    if lam > 0.:
        return lam > root
    return -1. < lam < -root

def angle_factor(lam, J):
    '''
    Limiting squared cosine between a sample spike eigenvector and its
    population direction,
        a = (lambda^2 - J) / (lambda (lambda + J)).

    Parameters
    ----------
    lam : float
        Spike weight with |lam| > sqrt(J); negative spikes must lie in
        (-1, -sqrt(J)).
    J : float
        Aspect ratio p/n.

    Returns
    -------
    a : float
        Angle factor in (0,1].

    Raises
    ------
    UndetectableSpikeError
        If the spike is at or below the detectability threshold.
    '''
    lam = float(lam)
    if not is_detectable(lam, J):
        raise UndetectableSpikeError(
            'spike %g is not detectable at J=%g (threshold %g)'
            % (lam, J, np.sqrt(J))
        )
    return (lam**2 - J) / (lam * (lam + J))

def estimate_spike_eigenvalue(j, eig, n, J, sigma2=1.):
    '''
    Corrected spike weight from the sample spectrum. With the spectrum
    scaled by 1/sigma2, the companion Stieltjes transform at l_j,
        m(l_j) = -(1 - J)/l_j + (1/n) sum_{i != j} 1/(l_i - l_j),
    gives the population eigenvalue -1/m(l_j) = 1 + lambda_j, so the
    returned weight is -1/m(l_j) - 1. All p - 1 remaining eigenvalues,
    including exact zeros when p >= n, enter the sum.

    Parameters
    ----------
    j : int
        Spike index, j >= 1 from the top or j <= -1 from the bottom.
    eig : EigenDecomposition
        Decomposition of the pooled covariance.
    n : int
        Total number of training samples.
    J : float
        Aspect ratio p/n.
    sigma2 : float, default=1.
        Noise level used to normalize the spectrum.

    Returns
    -------
    lambda_hat : float
        Estimated spike weight.

    Raises
    ------
    ValueError
        If l_j ties with another eigenvalue, or if the spectrum is degenerate
        at l_j (non-positive l_j or vanishing transform).
    '''
    l = eig.eigenvalues / sigma2
    pos = eig.position(j)
    lj = l[pos]
    if lj <= 0.:
        raise ValueError(
            'degenerate spectrum: eigenvalue %d is %g' % (j, eig.eigenvalue(j))
        )

    others = np.delete(l, pos)
    gaps = others - lj
    if (gaps == 0.).any():
        raise ValueError('eigenvalue %d is not simple' % j)

    m = -(1. - J) / lj + np.sum(1. / gaps) / n
    if m == 0.:
        raise ValueError('degenerate spectrum at eigenvalue %d' % j)

    return -1. / m - 1.

def estimate_alpha(mu_hat_norm2, sigma2, J0, J1):
    '''
    Debiased estimate of alpha = sigma^2/||mu||^2,
        1/alpha_hat = ||mu_hat||^2/sigma^2 - J0 - J1.

    Parameters
    ----------
    mu_hat_norm2 : float
        Squared norm of the sample mean difference.
    sigma2 : float
        Noise level.
    J0, J1 : float
        Per-class aspect ratios p/n0 and p/n1.

    Returns
    -------
    alpha_hat : float
        Positive estimate.

    Raises
    ------
    InfeasibleEstimateError
        If the debiased separation is non-positive, i.e. the classes are
        too close to separate at this p/n.
    '''
    debiased = mu_hat_norm2 / sigma2 - J0 - J1
    if debiased <= 0.:
        raise InfeasibleEstimateError(
            'debiased mean separation ||mu_hat||^2/sigma2 - J0 - J1 = %g is '
            'not positive; classes cannot be separated at this p/n' % debiased
        )
    return 1. / debiased

def estimate_bj(j, mu_hat, u_j, lambda_hat_j, sigma2, J, J0, J1):
    '''
    Estimate of b_j = (mu^T v_j)^2/||mu||^2,
        b_hat = (1 + J/lambda)/(1 - J/lambda)
                * (mu_hat^T u_j)^2 / (||mu_hat||^2 - (J0 + J1) sigma2),
    clamped into [0,1].

    Parameters
    ----------
    j : int
        Spike index, used in messages only.
    mu_hat : (p,) array
        Sample mean difference x0_bar - x1_bar.
    u_j : (p,) array
        Sample eigenvector paired with spike j.
    lambda_hat_j : float
        Corrected spike weight.
    sigma2 : float
        Noise level.
    J, J0, J1 : float
        Aspect ratios.

    Returns
    -------
    b_hat : float
        Projection weight in [0,1].

    Raises
    ------
    InfeasibleEstimateError
        If the debiased denominator is non-positive.
    ValueError
        If lambda_hat_j equals J.
    '''
    if lambda_hat_j == J:
        raise ValueError('spike %d: lambda_hat equals J' % j)
    denom = mu_hat @ mu_hat - (J0 + J1) * sigma2
    if denom <= 0.:
        raise InfeasibleEstimateError(
            'spike %d: debiased denominator %g is not positive' % (j, denom)
        )

    ratio = (1. + J / lambda_hat_j) / (1. - J / lambda_hat_j)
    b = ratio * (mu_hat @ u_j)**2 / denom
    return float(np.clip(b, 0., 1.))

def estimate_sigma2(eig, r1, r2):
    '''
    Noise level as the plain mean of the p - r1 - r2 bulk eigenvalues.

    Parameters
    ----------
    eig : EigenDecomposition
        Decomposition of the pooled covariance.
    r1, r2 : int
        Numbers of top and bottom eigenvalues attributed to spikes.

    Returns
    -------
    sigma2_hat : float
        Bulk mean.

    Raises
    ------
    ValueError
        If the spikes consume the whole spectrum.
    '''
    p = eig.p
    if p <= r1 + r2:
        raise ValueError(
            'no bulk eigenvalues left: p=%d, r1=%d, r2=%d' % (p, r1, r2)
        )
    return float(np.mean(eig.eigenvalues[r1:p - r2]))

def detect_spike_counts(eig, J, margin=DETECTION_MARGIN, max_iter=10):
    '''
    Counts eigenvalues outside the Marchenko-Pastur bulk
    [sigma2 (1 - sqrt(J))^2, sigma2 (1 + sqrt(J))^2], widened by a relative
    margin. The noise level is re-estimated from the remaining bulk until the
    counts stop changing. No negative spike is reported when J >= 1.

    Parameters
    ----------
    eig : EigenDecomposition
        Decomposition of the pooled covariance.
    J : float
        Aspect ratio p/n.
    margin : float, default=0.05
        Relative widening of both bulk edges.
    max_iter : int, default=10
        Maximum number of re-estimation sweeps.

    Returns
    -------
    r1, r2 : int
        Numbers of eigenvalues above and below the widened edges.
    '''
    l = eig.eigenvalues
    root = np.sqrt(J)
    r1, r2 = 0, 0
    for _ in range(max_iter):
        if eig.p <= r1 + r2:
            break
        sigma2 = estimate_sigma2(eig, r1, r2)
        upper = sigma2 * (1. + root)**2 * (1. + margin)
        lower = sigma2 * (1. - root)**2 * (1. - margin)

        new_r1 = int(np.sum(l > upper))
        new_r2 = int(np.sum(l < lower)) if J < 1. else 0
        if (new_r1, new_r2) == (r1, r2):
            break
        r1, r2 = new_r1, new_r2

    logger.debug('detected spike counts r1=%d, r2=%d', r1, r2)
    return r1, r2
