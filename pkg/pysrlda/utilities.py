import numpy as np

from .exceptions import DimensionError, InsufficientSamplesError

class LabeledDataset:
    '''Two-class dataset, one row of `X` per labeled sample.

    Parameters
    ----------
    X : (n_samples, p) array
        Feature vectors.
    y : (n_samples,) array
        Class labels in {0, 1}.
    feature_names : list of str, optional
        Column names carried over from a data file.
    '''
    def __init__(self, X, y, feature_names=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise DimensionError(
                'X has %d rows but y has %d labels' % (X.shape[0], y.shape[0])
            )
        if not np.isin(y, (0, 1)).all():
            raise ValueError('labels must be 0 or 1')

        self.X = X
        self.y = y.astype(int)
        self.feature_names = feature_names

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    def class_counts(self):
        n1 = int(self.y.sum())
        return self.n_samples - n1, n1

    def subset(self, idx):
        return LabeledDataset(self.X[idx], self.y[idx], self.feature_names)

def split_classes(X, y):
    '''
    Separate a labeled sample into its two class blocks.

    Parameters
    ----------
    X : (n_samples, p) array
        Feature vectors.
    y : (n_samples,) array
        Class labels in {0, 1}.

    Returns
    -------
    X0 : (n0, p) array
        Samples with label 0.
    X1 : (n1, p) array
        Samples with label 1.

    Raises
    ------
    InsufficientSamplesError
        If either class is empty.
    '''
    data = LabeledDataset(X, y)
    X0 = data.X[data.y == 0]
    X1 = data.X[data.y == 1]
    if X0.shape[0] == 0 or X1.shape[0] == 0:
        raise InsufficientSamplesError(
            'both classes must be present, got n0=%d, n1=%d'
            % (X0.shape[0], X1.shape[0])
        )
    return X0, X1

def check_prior(pi0):
    '''
    Checks that a class-0 prior lies strictly inside (0,1).

    Parameters
    ----------
    pi0 : float
        Prior probability of class 0.

    Returns
    -------
    pi0 : float
        The prior, only returned if 0 < pi0 < 1.

    Raises
    ------
    ValueError
        If pi0 is not in (0,1).
    '''
    pi0 = float(pi0)
    if not 0. < pi0 < 1.:
        raise ValueError('prior pi0 must lie in (0,1), got %r' % pi0)
    return pi0

def check_features(X, p):
    '''Coerces `X` to an (n_samples, p) array or raises DimensionError.'''
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != p:
        raise DimensionError(
            'expected %d features per sample, got %d' % (p, X.shape[1])
        )
    return X

def repetition_rng(seed, repetition):
    '''
    Independent random stream for one Monte Carlo repetition. The stream is
    derived from the master seed and the repetition index through
    `numpy.random.SeedSequence` entropy mixing, so the draw for repetition k
    does not depend on which worker runs it or in which order.

    Parameters
    ----------
    seed : int
        Master seed (64-bit).
    repetition : int
        Repetition index, starting from 0.

    Returns
    -------
    rng : numpy.random.Generator
        PCG64 generator for this repetition.
    '''
    return np.random.default_rng(
        np.random.SeedSequence([int(seed), int(repetition)])
    )

def floats_to_hex(values):
    '''Encodes a float or array as `float.hex` strings for exact storage.'''
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        return float(values).hex()
    return [floats_to_hex(v) for v in values]

def hex_to_floats(encoded):
    '''Inverse of `floats_to_hex`.'''
    if isinstance(encoded, str):
        return float.fromhex(encoded)
    return np.array([hex_to_floats(v) for v in encoded], dtype=float)
