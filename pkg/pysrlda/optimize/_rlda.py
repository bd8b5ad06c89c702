import logging

import numpy as np
from sklearn.model_selection import StratifiedKFold

from ..exceptions import InsufficientSamplesError
from ..linalg import pooled_covariance, symmetric_eigen, ridge_apply
from ..utilities import check_prior, split_classes

logger = logging.getLogger(__name__)

RLDA_GAMMA_GRID = 10. ** (np.arange(-10, 11) / 10.)

CV_FOLDS = 5

def optimize_rlda_gamma(
        X, y, pi0=None, gammas=RLDA_GAMMA_GRID, n_splits=CV_FOLDS, seed=0
    ):
    '''Select the R-LDA ridge parameter by stratified k-fold cross-validation.

    Each fold fits the ridge rule
        W = (x - (x0_bar + x1_bar)/2)^T (S + gamma I)^{-1} (x0_bar - x1_bar)
    on the remaining folds and assigns class 1 iff W <= log(pi1/pi0). The
    score of a candidate is the prior-weighted validation error
    pi0 * eps0 + pi1 * eps1 pooled over folds.

    Parameters
    ----------
    X : (n_samples, p) array
        Training features.
    y : (n_samples,) array
        Labels in {0, 1}.
    pi0 : float, optional
        Class-0 prior. Defaults to the class-0 fraction of `y`.
    gammas : (k,) array, default=RLDA_GAMMA_GRID
        Candidate ridge parameters in increasing order, 10^{i/10} for
        i = -10, ..., 10 by default.
    n_splits : int, default=5
        Number of folds, reduced to the smallest class size if needed.
    seed : int, default=0
        Seed of the fold shuffling.

    Returns
    -------
    gamma : float
        Candidate with the lowest validation error, the smallest one on ties.

    Raises
    ------
    InsufficientSamplesError
        If a class is empty or holds a single sample.
    '''
    X0, X1 = split_classes(X, y)
    y = np.asarray(y).reshape(-1).astype(int)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if pi0 is None:
        pi0 = X0.shape[0] / X.shape[0]
    pi0 = check_prior(pi0)
    c = np.log((1. - pi0) / pi0)

    n_splits = min(n_splits, X0.shape[0], X1.shape[0])
    if n_splits < 2:
        raise InsufficientSamplesError(
            'cross-validation needs two samples per class, got n0=%d, n1=%d'
            % (X0.shape[0], X1.shape[0])
        )

    gammas = np.asarray(gammas, dtype=float)
    wrong = np.zeros((2, gammas.shape[0]))
    folds = StratifiedKFold(n_splits=n_splits, shuffle=True, random_state=seed)

    for train_idx, val_idx in folds.split(X, y):
        S = pooled_covariance(*split_classes(X[train_idx], y[train_idx]))
        eig = symmetric_eigen(S)
        midpoint = (S.class_means[0] + S.class_means[1]) / 2.
        directions = ridge_apply(eig, S.mean_difference, gammas)

        scores = (X[val_idx] - midpoint) @ directions
        labels = (scores <= c).astype(int)
        for k in (0, 1):
            in_class = y[val_idx] == k
            wrong[k] += np.sum(labels[in_class] != k, axis=0)

    n0, n1 = X0.shape[0], X1.shape[0]
    cv_error = pi0 * wrong[0] / n0 + (1. - pi0) * wrong[1] / n1

    best = int(np.argmin(cv_error))
    logger.debug(
        'R-LDA gamma=%g selected with CV error %.4f', gammas[best], cv_error[best]
    )
    return float(gammas[best])
