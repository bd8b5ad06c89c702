'''Deterministic-equivalent misclassification surfaces.

Spike group 1 holds the positive spikes (regularized by gamma1), group 2 the
negative spikes (regularized by gamma2). Every surface is written in terms of
the per-spike weights gamma_{i,j} = gamma_i lambda_j / (1 + gamma_i lambda_j);
the gamma form and the omega form only differ in how these are computed.
The vectorized `_surface_values` is the single evaluation path used both by
the scalar functions below and by the grid search.
'''

import logging
from typing import NamedTuple

import numpy as np
from scipy import special

from .exceptions import InadmissibleParameterError
from .spiked_model import AspectRatios, angle_factor, is_detectable

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-3
INFEASIBLE_ERROR = 0.5

OBJECTIVES = ('plain', 'oi')

class SpikeTerm(NamedTuple):
    lam: float
    a: float
    b: float

class OmegaPoint(NamedTuple):
    omega1: float
    omega2: float

class GammaPair(NamedTuple):
    gamma1: float
    gamma2: float

def _terms_array(spikes):
    if len(spikes) == 0:
        return np.empty((3, 0))
    return np.array([tuple(s) for s in spikes], dtype=float).T

class SurfaceParams:
    '''Scalars feeding the deterministic error surface.

    Parameters
    ----------
    pos_spikes : sequence of SpikeTerm
        (lambda_j, a_j, b_j) for the positive spikes, largest first.
    neg_spikes : sequence of SpikeTerm
        (lambda_j, a_j, b_j) for the negative spikes, lambda_{-1} first.
    alpha : float
        sigma^2/||mu||^2.
    J0, J1 : float
        Per-class aspect ratios p/n0 and p/n1.
    pi0 : float
        Prior of class 0; pi1 = 1 - pi0.

    Notes
    -----
    c = log(pi1/pi0), eta = alpha (J0 - J1 + 2c) and zeta = alpha (J0 + J1)
    are always recomputed from their definitions.
    '''
    def __init__(self, pos_spikes, neg_spikes, alpha, J0, J1, pi0):
        self.pos_spikes = tuple(SpikeTerm(*map(float, s)) for s in pos_spikes)
        self.neg_spikes = tuple(SpikeTerm(*map(float, s)) for s in neg_spikes)
        self.alpha = float(alpha)
        self.J0, self.J1 = float(J0), float(J1)
        self.pi0 = float(pi0)
        self._check()

        self._pos = _terms_array(self.pos_spikes)
        self._neg = _terms_array(self.neg_spikes)

    def _check(self):
        if not 0. < self.pi0 < 1.:
            raise ValueError('pi0 must lie in (0,1), got %r' % self.pi0)
        if self.alpha <= 0.:
            raise ValueError('alpha must be positive, got %r' % self.alpha)
        if self.J0 <= 0. or self.J1 <= 0.:
            raise ValueError('aspect ratios must be positive')
        for s in self.pos_spikes:
            if s.lam <= 0.:
                raise ValueError('positive spike %g must be > 0' % s.lam)
        for s in self.neg_spikes:
            if not -1. < s.lam < 0.:
                raise ValueError('negative spike %g must lie in (-1,0)' % s.lam)
        b = [s.b for s in self.pos_spikes + self.neg_spikes]
        if any(not 0. <= bj <= 1. for bj in b):
            raise ValueError('every b_j must lie in [0,1]')
        if sum(b) > 1. + 1e-12:
            raise ValueError('b_j must sum to at most 1, got %r' % sum(b))

    @property
    def pi1(self):
        return 1. - self.pi0

    @property
    def c(self):
        return np.log(self.pi1 / self.pi0)

    @property
    def eta(self):
        return self.alpha * (self.J0 - self.J1 + 2. * self.c)

    @property
    def zeta(self):
        return self.alpha * (self.J0 + self.J1)

    @property
    def r1(self):
        return len(self.pos_spikes)

    @property
    def r2(self):
        return len(self.neg_spikes)

    @property
    def lambda1(self):
        '''Largest positive spike, None without positive spikes.'''
        return max(s.lam for s in self.pos_spikes) if self.pos_spikes else None

    @property
    def lambda_m1(self):
        '''Most negative spike, None without negative spikes.'''
        return min(s.lam for s in self.neg_spikes) if self.neg_spikes else None

    def omega_exclusions(self):
        '''omega2 values (1 + lambda_j/lambda_{-1})^{-1} removed from B.'''
        if not self.neg_spikes:
            return np.empty(0)
        return 1. / (1. + self._neg[0] / self.lambda_m1)

    def to_dict(self):
        return {
            'pos_spikes': [list(s) for s in self.pos_spikes],
            'neg_spikes': [list(s) for s in self.neg_spikes],
            'alpha': self.alpha, 'J0': self.J0, 'J1': self.J1,
            'pi0': self.pi0
        }

def normal_cdf(x):
    '''Standard normal CDF via scipy.special.ndtr (erfc based).'''
    return special.ndtr(x)

def omega_to_gamma(w, lambda1, lambda_m1):
    '''
    Maps an omega point to regularization weights,
        gamma1 = omega1 / ((1 - omega1) lambda_1),
        gamma2 = -omega2 / ((1 - omega2) lambda_{-1}).
    A spike group that is absent (lambda is None) must have omega = 0 and
    maps to gamma = 0.

    Parameters
    ----------
    w : OmegaPoint
        Point with omega1, omega2 in (0,1).
    lambda1 : float or None
        Largest positive spike.
    lambda_m1 : float or None
        Most negative spike, in (-1,0).

    Returns
    -------
    gp : GammaPair
        Positive regularization weights.

    Raises
    ------
    InadmissibleParameterError
        If an omega lies outside (0,1) for a present spike group.
    '''
    w1, w2 = float(w[0]), float(w[1])
    return GammaPair(
        _omega_axis_to_gamma(w1, lambda1, 'omega1', 1.),
        _omega_axis_to_gamma(w2, lambda_m1, 'omega2', -1.)
    )

def _omega_axis_to_gamma(w, lam, name, sign):
    if lam is None:
        if w != 0.:
            raise InadmissibleParameterError(
                '%s must be 0 when its spike group is empty' % name
            )
        return 0.
    if not 0. < w < 1.:
        raise InadmissibleParameterError('%s=%r is not in (0,1)' % (name, w))
    return sign * w / ((1. - w) * lam)

def _weights_from_gamma(g1, g2, sp):
    # Broadcast over leading grid axes, spikes along the last axis
    g1 = np.asarray(g1, dtype=float)[..., None]
    g2 = np.asarray(g2, dtype=float)[..., None]
    lp, ln = sp._pos[0], sp._neg[0]
    with np.errstate(divide='ignore', invalid='ignore'):
        wp = g1 * lp / (1. + g1 * lp)
        wn = g2 * ln / (1. + g2 * ln)
    return wp, wn

def _weights_from_omega(w1, w2, sp):
    w1 = np.asarray(w1, dtype=float)[..., None]
    w2 = np.asarray(w2, dtype=float)[..., None]
    lp, ln = sp._pos[0], sp._neg[0]
    with np.errstate(divide='ignore', invalid='ignore'):
        if sp.r1:
            wp = w1 * lp / ((1. - w1) * sp.lambda1 + w1 * lp)
        else:
            wp = np.zeros(w1.shape[:-1] + (0,))
        if sp.r2:
            wn = -w2 * ln / ((1. - w2) * sp.lambda_m1 - w2 * ln)
        else:
            wn = np.zeros(w2.shape[:-1] + (0,))
    return wp, wn

def _g_from_weights(wp, wn, sp):
    ap, bp = sp._pos[1], sp._pos[2]
    an, bn = sp._neg[1], sp._neg[2]
    return 1. - np.sum(ap * bp * wp, axis=-1) - np.sum(an * bn * wn, axis=-1)

def _d_from_weights(wp, wn, sp):
    total = 1. + np.sum(sp._pos[0] * sp._pos[2]) + np.sum(sp._neg[0] * sp._neg[2])
    for (lam, a, b), w in ((sp._pos, wp), (sp._neg, wn)):
        total = (
            total
            - 2. * np.sum((lam + 1.) * a * b * w, axis=-1)
            + np.sum(a * b * (lam * a + 1.) * w**2, axis=-1)
        )
    return total

def _surface_values(G, D, sp, objective):
    '''
    Evaluates a surface from G and D arrays. Infeasible entries (D + zeta
    <= 0, or G <= 0 for the optimal-intercept objective) come back as NaN.
    '''
    G = np.asarray(G, dtype=float)
    D = np.asarray(D, dtype=float)
    v = D + sp.zeta
    with np.errstate(divide='ignore', invalid='ignore'):
        scale = 2. * np.sqrt(sp.alpha) * np.sqrt(v)
        if objective == 'plain':
            err = (
                sp.pi0 * normal_cdf(-(G - sp.eta) / scale)
                + sp.pi1 * normal_cdf(-(G + sp.eta) / scale)
            )
            bad = ~(v > 0.)
        elif objective == 'oi':
            delta1 = -G / scale
            delta2 = np.sqrt(sp.alpha) * np.sqrt(v) / G * sp.c
            err = (
                sp.pi0 * normal_cdf(delta1 + delta2)
                + sp.pi1 * normal_cdf(delta1 - delta2)
            )
            bad = ~(v > 0.) | ~(G > 0.)
        else:
            raise ValueError(
                'objective must be one of %r, got %r' % (OBJECTIVES, objective)
            )
    return np.where(bad, np.nan, err)

def omega_surface(w1, w2, sp, objective='plain'):
    '''
    Vectorized omega-form surface used by the grid search.

    Parameters
    ----------
    w1, w2 : arrays
        omega coordinates, broadcast against each other.
    sp : SurfaceParams
        Surface scalars.
    objective : {'plain', 'oi'}, default='plain'
        Plain SRLDA error or the optimal-intercept error.

    Returns
    -------
    err : array
        Surface values with NaN at infeasible points.
    '''
    wp, wn = _weights_from_omega(w1, w2, sp)
    G = _g_from_weights(wp, wn, sp)
    D = _d_from_weights(wp, wn, sp)
    return _surface_values(G, D, sp, objective)

def gamma_weights(gp, sp):
    '''
    Per-spike weights gamma_{i,j} = gamma_i lambda_j / (1 + gamma_i lambda_j),
    with gamma1 acting on positive spikes and gamma2 on negative spikes.

    Parameters
    ----------
    gp : GammaPair
        Regularization weights.
    sp : SurfaceParams
        Provides the spike values.

    Returns
    -------
    w_pos : (r1,) array
        gamma_{1,j} for the positive spikes.
    w_neg : (r2,) array
        gamma_{2,j} for the negative spikes.

    Raises
    ------
    InadmissibleParameterError
        At a pole 1 + gamma2 lambda_j = 0.
    '''
    _check_poles(gp, sp._neg[0])
    return _weights_from_gamma(gp[0], gp[1], sp)

def _check_poles(gp, neg_lambdas):
    den = 1. + gp[1] * np.asarray(neg_lambdas)
    if np.any(np.abs(den) < 1e-12):
        raise InadmissibleParameterError(
            'gamma2=%r hits a pole 1 + gamma2*lambda_j = 0' % gp[1]
        )

def is_admissible_gamma(gp, sp, delta=DEFAULT_DELTA):
    '''
    Membership in the admissible set: gamma1, gamma2 >= 0 and gamma2 outside
    every neighbourhood U(1/|lambda_j|, delta) of the negative-spike poles.
    '''
    if gp[0] < 0. or gp[1] < 0.:
        return False
    poles = 1. / np.abs(sp._neg[0])
    return not np.any(np.abs(gp[1] - poles) < delta)

def g_bar(gp, sp):
    '''
    G_bar(gamma1, gamma2) = 1 - sum_i sum_j a_j b_j gamma_{i,j}.

    Parameters
    ----------
    gp : GammaPair
        Admissible regularization weights.
    sp : SurfaceParams
        Surface scalars.

    Returns
    -------
    G : float
    '''
    wp, wn = gamma_weights(gp, sp)
    return float(_g_from_weights(wp, wn, sp))

def d_bar(gp, sp):
    '''
    D_bar(gamma1, gamma2) = 1 + sum_j lambda_j b_j
        - 2 sum_i sum_j (lambda_j + 1) a_j b_j gamma_{i,j}
        + sum_i sum_j a_j b_j (lambda_j a_j + 1) gamma_{i,j}^2.

    Parameters
    ----------
    gp : GammaPair
        Admissible regularization weights.
    sp : SurfaceParams
        Surface scalars.

    Returns
    -------
    D : float
    '''
    wp, wn = gamma_weights(gp, sp)
    return float(_d_from_weights(wp, wn, sp))

def g_tilde(w, sp):
    '''G_bar written in omega coordinates.'''
    wp, wn = _weights_from_omega(w[0], w[1], sp)
    return float(_g_from_weights(wp, wn, sp))

def d_tilde(w, sp):
    '''D_bar written in omega coordinates.'''
    wp, wn = _weights_from_omega(w[0], w[1], sp)
    return float(_d_from_weights(wp, wn, sp))

def _checked(err, G, D, sp, objective):
    if np.isnan(err):
        if not D + sp.zeta > 0.:
            raise InadmissibleParameterError(
                'variance term D + zeta = %g is not positive' % (D + sp.zeta)
            )
        raise InadmissibleParameterError(
            'G = %g is not positive; optimal intercept undefined' % G
        )
    return float(err)

def deterministic_error(gp, sp):
    '''
    Deterministic equivalent of the SRLDA misclassification rate,
        pi0 Phi(-(G - eta)/(2 sqrt(alpha) sqrt(D + zeta)))
        + pi1 Phi(-(G + eta)/(2 sqrt(alpha) sqrt(D + zeta))).

    Parameters
    ----------
    gp : GammaPair
        Admissible regularization weights.
    sp : SurfaceParams
        Surface scalars.

    Returns
    -------
    err : float
        Value in (0,1).

    Raises
    ------
    InadmissibleParameterError
        If D + zeta <= 0 or gp hits a pole.
    '''
    G, D = g_bar(gp, sp), d_bar(gp, sp)
    err = _surface_values(G, D, sp, 'plain')
    return _checked(err, G, D, sp, 'plain')

def plain_surface_error(w, sp):
    '''Deterministic SRLDA error evaluated at an omega point.'''
    G, D = g_tilde(w, sp), d_tilde(w, sp)
    return _checked(_surface_values(G, D, sp, 'plain'), G, D, sp, 'plain')

def optimal_theta(gp, sp):
    '''
    Optimal intercept
        theta* = (J0 - J1)/2 - (D_bar + zeta)/G_bar * log(pi1/pi0).

    Parameters
    ----------
    gp : GammaPair
        Admissible regularization weights.
    sp : SurfaceParams
        Surface scalars.

    Returns
    -------
    theta : float

    Raises
    ------
    InadmissibleParameterError
        If G_bar vanishes.
    '''
    G, D = g_bar(gp, sp), d_bar(gp, sp)
    if G == 0.:
        raise InadmissibleParameterError('G_bar vanishes; theta* undefined')
    return 0.5 * (sp.J0 - sp.J1) - (D + sp.zeta) / G * sp.c

def oi_deterministic_error(w, sp):
    '''
    Deterministic error of the optimal-intercept classifier at an omega
    point,
        pi0 Phi(Delta1 + Delta2) + pi1 Phi(Delta1 - Delta2),
    with Delta1 = -G/(2 sqrt(alpha) sqrt(D + zeta)) and
    Delta2 = sqrt(alpha) sqrt(D + zeta)/G * log(pi1/pi0).

    Parameters
    ----------
    w : OmegaPoint
        Point of the reparametrized domain.
    sp : SurfaceParams
        Surface scalars.

    Returns
    -------
    err : float
        Value in (0,1).

    Raises
    ------
    InadmissibleParameterError
        If G <= 0 or D + zeta <= 0.
    '''
    G, D = g_tilde(w, sp), d_tilde(w, sp)
    return _checked(_surface_values(G, D, sp, 'oi'), G, D, sp, 'oi')

def surface_error(w, sp, objective='plain'):
    '''Scalar surface value at an omega point for either objective.'''
    if objective == 'plain':
        return plain_surface_error(w, sp)
    if objective == 'oi':
        return oi_deterministic_error(w, sp)
    raise ValueError(
        'objective must be one of %r, got %r' % (OBJECTIVES, objective)
    )

def population_surface_params(population, mu, n0, n1, pi0):
    '''
    Surface scalars from known population values: a_j from the angle law at
    J = p/n, b_j = (mu^T v_j)^2/||mu||^2 and alpha = sigma^2/||mu||^2.
    Spikes below the detectability threshold are left out.

    Parameters
    ----------
    population : SpikedModelParams
        Spiked covariance with `directions`.
    mu : (p,) array
        Population mean difference mu0 - mu1.
    n0, n1 : int
        Training sample counts.
    pi0 : float
        Class-0 prior.

    Returns
    -------
    sp : SurfaceParams
    '''
    if population.directions is None:
        raise ValueError('population spike directions are required')
    mu = np.asarray(mu, dtype=float)
    p = population.directions.shape[0]
    ratios = AspectRatios.from_counts(p, n0, n1)
    norm2 = mu @ mu

    pos, neg = [], []
    proj = (population.directions.T @ mu)**2 / norm2
    for lam, b in zip(population.spikes, proj):
        if not is_detectable(lam, ratios.J):
            logger.info('spike %g undetectable at J=%.3f; left out', lam, ratios.J)
            continue
        term = SpikeTerm(lam, angle_factor(lam, ratios.J), b)
        (pos if lam > 0. else neg).append(term)

    return SurfaceParams(
        pos, neg, population.sigma2 / norm2, ratios.J0, ratios.J1, pi0
    )
