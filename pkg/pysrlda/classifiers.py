'''Two-class linear discriminants sharing one trained-model type.

Every classifier scores a sample as W(x) = (x - (x0_bar + x1_bar)/2)^T w plus
a kind-specific offset and assigns class 1 iff W(x) <= threshold:

    lda       w = S^{-1} mu_hat,                  threshold log(pi1/pi0)
    rlda      w = (S + gamma I)^{-1} mu_hat,      threshold log(pi1/pi0)
    srlda     w = H_tilde mu_hat / sigma2,        threshold log(pi1/pi0)
    oi-srlda  w = H_tilde mu_hat / sigma2,        offset theta*, threshold 0

with mu_hat = x0_bar - x1_bar and H_tilde the regularized inverse of the
spectrally corrected covariance, applied through its low-rank form.

theta* is a dimensionless offset added to the score of the sigma2-scaled
direction. Multiplying that score by sigma2 gives the unscaled form
(x - x_bar)^T H_tilde mu_hat + sigma2 theta*, which assigns the same labels.
'''

import json
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg

from .error_surface import (
    GammaPair, SpikeTerm, SurfaceParams, normal_cdf, optimal_theta
)
from .exceptions import (
    InadmissibleParameterError, ModelFormatError, SingularCovarianceError
)
from .linalg import pooled_covariance, symmetric_eigen, ridge_apply
from .optimize import GridSpec, optimize_omega, optimize_rlda_gamma
from .optimize._rlda import CV_FOLDS
from .spiked_model import (
    DETECTION_MARGIN, AspectRatios, SpikeEstimates, angle_factor,
    detect_spike_counts, estimate_alpha, estimate_bj, estimate_sigma2,
    estimate_spike_eigenvalue, is_detectable
)
from .utilities import (
    check_features, check_prior, floats_to_hex, hex_to_floats, split_classes
)

logger = logging.getLogger(__name__)

KINDS = ('lda', 'rlda', 'srlda', 'oi-srlda')

MODEL_FORMAT = 'pysrlda-model'
MODEL_VERSION = 1

class TrainedClassifier:
    '''Frozen scoring state of a trained linear discriminant.

    Attributes
    ----------
    kind : str
        One of 'lda', 'rlda', 'srlda', 'oi-srlda'.
    mean0, mean1 : (p,) arrays
        Class means x0_bar and x1_bar.
    direction : (p,) array
        Discriminant direction w, already divided by sigma2 for SRLDA.
    intercept : float
        log(pi1/pi0) for lda, rlda and srlda; theta* for oi-srlda.
    sigma2 : float
        Noise level (1 for lda and rlda).
    pi0 : float
        Class-0 prior the rule was trained for.
    spike_basis : (p, r) array
        Retained sample eigenvectors u_j (SRLDA kinds only).
    spike_lambdas : (r,) array
        Corrected spike weights matching `spike_basis`.
    spike_groups : (r,) int array
        1 for positive spikes, 2 for negative spikes.
    gamma : GammaPair
        SRLDA regularization weights.
    rlda_gamma : float or None
        Ridge parameter of R-LDA.
    metadata : dict
        JSON-compatible fitting details.
    '''
    def __init__(
            self, kind, mean0, mean1, direction, intercept, pi0, sigma2=1.,
            spike_basis=None, spike_lambdas=None, spike_groups=None,
            gamma=GammaPair(0., 0.), rlda_gamma=None, metadata=None
        ):
        if kind not in KINDS:
            raise ValueError('kind must be one of %r, got %r' % (KINDS, kind))
        self.kind = kind
        self.mean0 = _frozen(mean0)
        self.mean1 = _frozen(mean1)
        self.direction = _frozen(direction)
        self.intercept = float(intercept)
        self.pi0 = check_prior(pi0)
        self.sigma2 = float(sigma2)

        p = self.mean0.shape[0]
        if spike_basis is None:
            spike_basis = np.zeros((p, 0))
            spike_lambdas = np.zeros(0)
            spike_groups = np.zeros(0, dtype=int)
        self.spike_lambdas = _frozen(spike_lambdas).reshape(-1)
        r = self.spike_lambdas.shape[0]
        self.spike_basis = _frozen(np.reshape(spike_basis, (p, r)))
        self.spike_groups = _frozen(spike_groups, dtype=int)
        self.gamma = GammaPair(float(gamma[0]), float(gamma[1]))
        self.rlda_gamma = None if rlda_gamma is None else float(rlda_gamma)
        self.metadata = dict(metadata or {})

    @property
    def p(self):
        return self.mean0.shape[0]

    @property
    def midpoint(self):
        return (self.mean0 + self.mean1) / 2.

    @property
    def score_offset(self):
        return self.intercept if self.kind == 'oi-srlda' else 0.

    @property
    def threshold(self):
        return 0. if self.kind == 'oi-srlda' else self.intercept

    def scores(self, X):
        X = check_features(X, self.p)
        return (X - self.midpoint) @ self.direction + self.score_offset

    def affine_form(self):
        '''(w, w0) with W(x) = w^T x + w0.'''
        return self.direction, self.score_offset - self.midpoint @ self.direction

def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a

class PredictionReport(NamedTuple):
    scores: np.ndarray
    labels: np.ndarray
    error_by_class: tuple
    total_error: float

@dataclass(frozen=True)
class SRLDAConfig:
    '''Fitting options shared by all classifier kinds.

    Parameters
    ----------
    pi0 : float, optional
        Class-0 prior. Defaults to the class-0 fraction of the training set.
    r1, r2 : int, optional
        Spike counts; detected from the spectrum when omitted.
    sigma2 : float, optional
        Known noise level; the bulk eigenvalue mean is used when omitted.
    grid : GridSpec
        Omega grid. Its objective is overridden by the SRLDA kind.
    detection_margin : float, default=0.05
        Relative widening of the bulk edges for spike-count detection.
    rlda_gamma : float, optional
        Fixed R-LDA ridge parameter; cross-validated when omitted.
    cv_folds : int, default=5
        Folds of the R-LDA cross-validation.
    seed : int, default=0
        Seed of the cross-validation fold shuffling.
    '''
    pi0: float = None
    r1: int = None
    r2: int = None
    sigma2: float = None
    grid: GridSpec = field(default_factory=GridSpec)
    detection_margin: float = DETECTION_MARGIN
    rlda_gamma: float = None
    cv_folds: int = CV_FOLDS
    seed: int = 0

class SpectralFit:
    '''Intermediate state of the SRLDA estimation pipeline.'''
    def __init__(
            self, covariance, eig, ratios, sigma2, estimates,
            requested_counts, pi0
        ):
        self.covariance = covariance
        self.eig = eig
        self.ratios = ratios
        self.sigma2 = sigma2
        self.estimates = estimates
        self.requested_counts = requested_counts
        self.pi0 = pi0

    @property
    def effective_counts(self):
        return self.estimates.r1, self.estimates.r2

    def spike_basis(self):
        cols = [self.eig.position(j) for j in self.estimates.indices]
        return self.eig.eigenvectors[:, cols]

def _resolve_prior(pi0, n0, n1):
    if pi0 is None:
        return n0 / (n0 + n1)
    return check_prior(pi0)

def _spike_indices(r1, r2, J):
    pos = list(range(1, r1 + 1))
    if r2 and J >= 1.:
        logger.warning(
            'dropping %d negative spike(s): undetectable when p/n = %.3f >= 1',
            r2, J
        )
        return pos
    return pos + [-j for j in range(1, r2 + 1)]

def _estimate_lambda(j, eig, n, J, sigma2):
    try:
        lam = estimate_spike_eigenvalue(j, eig, n, J, sigma2)
    except ValueError as e:
        logger.warning('dropping spike %d: %s', j, e)
        return None
    if (j > 0) != (lam > 0.) or not is_detectable(lam, J):
        logger.warning(
            'dropping spike %d: estimate %.4g is below the detectability '
            'threshold sqrt(J) = %.4g', j, lam, np.sqrt(J)
        )
        return None
    return lam

def estimate_surface_params(X, y, config=None):
    '''
    Estimation pipeline shared by SRLDA and OI-SRLDA: pooled covariance,
    eigendecomposition, spike counts, corrected spike weights, alpha_hat,
    b_hat and angle factors.

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    config : SRLDAConfig, optional
        Fitting options.

    Returns
    -------
    sp : SurfaceParams
        Estimated surface scalars.
    fit : SpectralFit
        Covariance, eigendecomposition and spike estimates behind `sp`.

    Raises
    ------
    InfeasibleEstimateError
        If the debiased mean separation is non-positive.
    '''
    if config is None:
        config = SRLDAConfig()

    S = pooled_covariance(*split_classes(X, y))
    eig = symmetric_eigen(S)
    ratios = AspectRatios.from_counts(S.p, S.n0, S.n1)
    J = ratios.J

    if config.r1 is None or config.r2 is None:
        r1, r2 = detect_spike_counts(eig, J, margin=config.detection_margin)
        r1 = r1 if config.r1 is None else config.r1
        r2 = r2 if config.r2 is None else config.r2
    else:
        r1, r2 = config.r1, config.r2

    if config.sigma2 is None:
        sigma2 = estimate_sigma2(eig, min(r1, eig.p - 1), 0 if J >= 1. else r2)
    else:
        sigma2 = float(config.sigma2)

    mu_hat = S.mean_difference
    alpha_hat = estimate_alpha(mu_hat @ mu_hat, sigma2, ratios.J0, ratios.J1)

    indices, lambdas, b, a = [], [], [], []
    for j in _spike_indices(r1, r2, J):
        lam = _estimate_lambda(j, eig, S.n, J, sigma2)
        if lam is None:
            continue
        indices.append(j)
        lambdas.append(lam)
        a.append(angle_factor(lam, J))
        b.append(estimate_bj(
            j, mu_hat, eig.eigenvector(j), lam, sigma2, J, ratios.J0, ratios.J1
        ))

    b = np.asarray(b, dtype=float)
    if b.sum() > 1.:
        logger.warning(
            'estimated projection weights sum to %.4f > 1; rescaling', b.sum()
        )
        b = b / b.sum()

    if not indices:
        logger.warning('no detectable spikes; H_tilde reduces to the identity')

    estimates = SpikeEstimates(indices, lambdas, b, alpha_hat, a)
    pi0 = _resolve_prior(config.pi0, S.n0, S.n1)

    terms = [SpikeTerm(*t) for t in zip(lambdas, a, b)]
    sp = SurfaceParams(
        [t for t, j in zip(terms, indices) if j > 0],
        [t for t, j in zip(terms, indices) if j < 0],
        alpha_hat, ratios.J0, ratios.J1, pi0
    )
    fit = SpectralFit(S, eig, ratios, sigma2, estimates, (r1, r2), pi0)
    return sp, fit

def h_tilde_weights(lambdas, groups, gamma):
    '''Shrinkage gamma_i lambda_j / (1 + gamma_i lambda_j) per retained spike.'''
    lambdas = np.asarray(lambdas, dtype=float)
    g = np.where(np.asarray(groups) == 1, gamma[0], gamma[1])
    den = 1. + g * lambdas
    if np.any(np.abs(den) < 1e-12):
        raise InadmissibleParameterError('pole 1 + gamma_i lambda_j = 0 in H_tilde')
    return g * lambdas / den

def apply_h_tilde(v, model):
    '''
    Applies H_tilde = (I + sum_j gamma_i lambda_j u_j u_j^T)^{-1} through
    its rank-r form
        H_tilde v = v - sum_j gamma_i lambda_j / (1 + gamma_i lambda_j)
                        (u_j^T v) u_j.

    Parameters
    ----------
    v : (p,) or (p, k) array
        Vector(s) to transform.
    model : TrainedClassifier
        SRLDA or OI-SRLDA model.

    Returns
    -------
    Hv : (p,) or (p, k) array

    Raises
    ------
    ValueError
        If the model is not an SRLDA kind.
    InadmissibleParameterError
        At a pole 1 + gamma_i lambda_j = 0.
    '''
    if model.kind not in ('srlda', 'oi-srlda'):
        raise ValueError('H_tilde is only defined for SRLDA models')
    return _low_rank_apply(
        v, model.spike_basis, model.spike_lambdas, model.spike_groups,
        model.gamma
    )

def _low_rank_apply(v, U, lambdas, groups, gamma):
    v = np.asarray(v, dtype=float)
    if U.shape[1] == 0:
        return v.copy()
    w = h_tilde_weights(lambdas, groups, gamma)
    coef = U.T @ v
    if coef.ndim == 1:
        return v - U @ (w * coef)
    return v - U @ (w[:,None] * coef)

def _fit_srlda(X, y, config, objective):
    if config is None:
        config = SRLDAConfig()
    sp, fit = estimate_surface_params(X, y, config)

    grid = GridSpec(
        config.grid.resolution, config.grid.delta, objective, config.grid.refine
    )
    search = optimize_omega(sp, grid)

    kind = 'srlda' if objective == 'plain' else 'oi-srlda'
    if objective == 'plain':
        intercept = sp.c
    else:
        intercept = optimal_theta(search.gamma, sp)

    indices = fit.estimates.indices
    U = fit.spike_basis()
    groups = np.where(indices > 0, 1, 2)
    lambdas = fit.estimates.lambda_hat

    mu_hat = fit.covariance.mean_difference
    direction = _low_rank_apply(mu_hat, U, lambdas, groups, search.gamma)
    direction = direction / fit.sigma2

    metadata = {
        'requested_spike_counts': list(fit.requested_counts),
        'effective_spike_counts': list(fit.effective_counts),
        'spike_indices': [int(j) for j in indices],
        'alpha_hat': fit.estimates.alpha_hat,
        'omega': list(search.omega),
        'deterministic_error': search.min_error,
        'grid_step': grid.resolution,
        'n0': fit.covariance.n0, 'n1': fit.covariance.n1
    }
    logger.info(
        '%s: spikes (r1, r2)=%r, gamma=(%.4g, %.4g), predicted error %.4f',
        kind, fit.effective_counts, search.gamma.gamma1, search.gamma.gamma2,
        search.min_error
    )

    means = fit.covariance.class_means
    return TrainedClassifier(
        kind, means[0], means[1], direction, intercept, fit.pi0,
        sigma2=fit.sigma2, spike_basis=U, spike_lambdas=lambdas,
        spike_groups=groups, gamma=search.gamma, metadata=metadata
    )

def fit_srlda(X, y, config=None):
    '''
    Trains SRLDA: estimation pipeline, grid search of the plain deterministic
    error surface, threshold log(pi1/pi0).

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    config : SRLDAConfig, optional
        Fitting options.

    Returns
    -------
    model : TrainedClassifier
    '''
    return _fit_srlda(X, y, config, 'plain')

def fit_oi_srlda(X, y, config=None):
    '''
    Trains OI-SRLDA: as `fit_srlda` but minimizing the optimal-intercept
    surface and scoring with the intercept theta* against zero.

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    config : SRLDAConfig, optional
        Fitting options.

    Returns
    -------
    model : TrainedClassifier

    Raises
    ------
    InadmissibleParameterError
        If G_bar vanishes at the selected point.
    '''
    return _fit_srlda(X, y, config, 'oi')

def fit_lda(X, y, pi0=None):
    '''
    Classic LDA with the pooled covariance inverse.

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    pi0 : float, optional
        Class-0 prior. Defaults to the class-0 training fraction.

    Returns
    -------
    model : TrainedClassifier

    Raises
    ------
    SingularCovarianceError
        If S is singular, in particular whenever p >= n - 1.
    '''
    S = pooled_covariance(*split_classes(X, y))
    if S.p >= S.n - 1:
        raise SingularCovarianceError(
            'pooled covariance is singular for p=%d >= n-1=%d; '
            'use rlda or srlda instead' % (S.p, S.n - 1)
        )
    try:
        factor = linalg.cho_factor(S.matrix)
    except linalg.LinAlgError as e:
        raise SingularCovarianceError(
            'pooled covariance is not positive definite; use rlda or srlda '
            'instead'
        ) from e

    pi0 = _resolve_prior(pi0, S.n0, S.n1)
    direction = linalg.cho_solve(factor, S.mean_difference)
    return TrainedClassifier(
        'lda', S.class_means[0], S.class_means[1], direction,
        np.log((1. - pi0) / pi0), pi0,
        metadata={'n0': S.n0, 'n1': S.n1}
    )

def fit_rlda(X, y, pi0=None, gamma=None, n_splits=CV_FOLDS, seed=0):
    '''
    Ridge-regularized LDA with (S + gamma I)^{-1}.

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    pi0 : float, optional
        Class-0 prior. Defaults to the class-0 training fraction.
    gamma : float, optional
        Ridge parameter. Selected by cross-validation over
        `RLDA_GAMMA_GRID` when omitted.
    n_splits : int, default=5
        Cross-validation folds.
    seed : int, default=0
        Fold shuffling seed.

    Returns
    -------
    model : TrainedClassifier
    '''
    S = pooled_covariance(*split_classes(X, y))
    pi0 = _resolve_prior(pi0, S.n0, S.n1)

    selection = 'fixed'
    if gamma is None:
        gamma = optimize_rlda_gamma(X, y, pi0, n_splits=n_splits, seed=seed)
        selection = '%d-fold stratified cross-validation' % n_splits
    gamma = float(gamma)
    if gamma <= 0.:
        raise ValueError('ridge parameter must be positive, got %r' % gamma)

    direction = ridge_apply(symmetric_eigen(S), S.mean_difference, gamma)
    return TrainedClassifier(
        'rlda', S.class_means[0], S.class_means[1], direction,
        np.log((1. - pi0) / pi0), pi0, rlda_gamma=gamma,
        metadata={'gamma_selection': selection, 'n0': S.n0, 'n1': S.n1}
    )

def fit_classifier(kind, X, y, config=None):
    '''Dispatches to the fitter of `kind` with options from `config`.'''
    if config is None:
        config = SRLDAConfig()
    if kind == 'lda':
        return fit_lda(X, y, config.pi0)
    if kind == 'rlda':
        return fit_rlda(
            X, y, config.pi0, config.rlda_gamma, config.cv_folds, config.seed
        )
    if kind == 'srlda':
        return fit_srlda(X, y, config)
    if kind == 'oi-srlda':
        return fit_oi_srlda(X, y, config)
    raise ValueError('unknown classifier %r, expected one of %r' % (kind, KINDS))

def predict(model, X, y=None, priors=None):
    '''
    Scores samples and assigns class 1 iff the score is at most the model
    threshold.

    Parameters
    ----------
    model : TrainedClassifier
        Trained rule.
    X : (n_samples, p) array
        Samples to classify.
    y : (n_samples,) array, optional
        True labels; enables the error fields of the report.
    priors : float, optional
        pi0 used to weight the class-conditional errors. Without it the total
        error is the plain fraction of mislabeled samples.

    Returns
    -------
    report : PredictionReport
        Scores, labels and, if `y` is given, (eps0, eps1) and the total
        error. Class errors are NaN for classes absent from `y`.

    Raises
    ------
    DimensionError
        If the samples do not have p features.
    '''
    scores = model.scores(X)
    labels = (scores <= model.threshold).astype(int)
    if y is None:
        return PredictionReport(scores, labels, (np.nan, np.nan), np.nan)

    y = np.asarray(y).reshape(-1).astype(int)
    wrong = labels != y
    eps = tuple(
        float(np.mean(wrong[y == k])) if np.any(y == k) else np.nan
        for k in (0, 1)
    )
    if priors is None:
        total = float(np.mean(wrong))
    else:
        pi0 = check_prior(priors)
        total = pi0 * eps[0] + (1. - pi0) * eps[1]
    return PredictionReport(scores, labels, eps, total)

def conditional_error(model, mu0, mu1, sigma, priors):
    '''
    Exact misclassification rates of a trained linear rule under Gaussian
    classes N(mu0, Sigma) and N(mu1, Sigma). With W(x) = w^T x + w0,
        eps0 = Phi((t - w^T mu0 - w0) / sqrt(w^T Sigma w)),
        eps1 = Phi((w^T mu1 + w0 - t) / sqrt(w^T Sigma w)),
    where t is the model threshold.

    Parameters
    ----------
    model : TrainedClassifier
        Trained rule.
    mu0, mu1 : (p,) arrays
        Population class means.
    sigma : (p, p) array
        Population covariance.
    priors : float
        Class-0 prior pi0.

    Returns
    -------
    eps0, eps1, eps : float
        Class-conditional errors and pi0 * eps0 + pi1 * eps1.
    '''
    pi0 = check_prior(priors)
    w, w0 = model.affine_form()
    sd = np.sqrt(w @ np.asarray(sigma) @ w)
    t = model.threshold
    eps0 = float(normal_cdf((t - w @ mu0 - w0) / sd))
    eps1 = float(normal_cdf((w @ mu1 + w0 - t) / sd))
    return eps0, eps1, pi0 * eps0 + (1. - pi0) * eps1

def _model_to_dict(model):
    return {
        'format': MODEL_FORMAT,
        'version': MODEL_VERSION,
        'kind': model.kind,
        'p': model.p,
        'r': int(model.spike_basis.shape[1]),
        'mean0': floats_to_hex(model.mean0),
        'mean1': floats_to_hex(model.mean1),
        'direction': floats_to_hex(model.direction),
        'intercept': floats_to_hex(model.intercept),
        'pi0': floats_to_hex(model.pi0),
        'sigma2': floats_to_hex(model.sigma2),
        'gamma': floats_to_hex(list(model.gamma)),
        'rlda_gamma': (
            None if model.rlda_gamma is None
            else floats_to_hex(model.rlda_gamma)
        ),
        'spike_basis': floats_to_hex(model.spike_basis.T),
        'spike_lambdas': floats_to_hex(model.spike_lambdas),
        'spike_groups': [int(g) for g in model.spike_groups],
        'metadata': model.metadata
    }

def save_model(model, path):
    '''Writes a model as a versioned JSON document with hex-encoded floats.'''
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(_model_to_dict(model), fh, indent=2, default=_json_default)
        fh.write('\n')

def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError('%r is not JSON serializable' % type(obj))

def load_model(path):
    '''
    Reads a model written by `save_model`.

    Raises
    ------
    ModelFormatError
        If the document is not a model file of a supported version or its
        arrays have inconsistent shapes.
    '''
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ModelFormatError('%s is not valid JSON: %s' % (path, e)) from e

    if not isinstance(doc, dict) or doc.get('format') != MODEL_FORMAT:
        raise ModelFormatError('%s is not a %s file' % (path, MODEL_FORMAT))
    if doc.get('version') != MODEL_VERSION:
        raise ModelFormatError(
            'unsupported model version %r, expected %d'
            % (doc.get('version'), MODEL_VERSION)
        )

    try:
        p, r = int(doc['p']), int(doc['r'])
        mean0 = hex_to_floats(doc['mean0'])
        mean1 = hex_to_floats(doc['mean1'])
        direction = hex_to_floats(doc['direction'])
        basis = hex_to_floats(doc['spike_basis']).reshape(r, p).T
        lambdas = hex_to_floats(doc['spike_lambdas']).reshape(r)
        groups = np.asarray(doc['spike_groups'], dtype=int).reshape(r)
        rlda_gamma = doc['rlda_gamma']
        model = TrainedClassifier(
            doc['kind'], mean0, mean1, direction,
            hex_to_floats(doc['intercept']), hex_to_floats(doc['pi0']),
            sigma2=hex_to_floats(doc['sigma2']), spike_basis=basis,
            spike_lambdas=lambdas, spike_groups=groups,
            gamma=hex_to_floats(doc['gamma']),
            rlda_gamma=None if rlda_gamma is None else hex_to_floats(rlda_gamma),
            metadata=doc.get('metadata')
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError('malformed model file %s: %s' % (path, e)) from e

    if any(a.shape != (p,) for a in (model.mean0, model.mean1, model.direction)):
        raise ModelFormatError('model vectors do not have length p=%d' % p)
    return model
