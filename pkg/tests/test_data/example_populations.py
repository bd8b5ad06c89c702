import numpy as np

from pysrlda.error_surface import population_surface_params
from pysrlda.spiked_model import SpikedModelParams, angle_factor

class TemplatePopulation:
    '''Defines a two-class Gaussian population with a spiked covariance.

    Template super class holding the population truth (spikes, directions,
    class means) and samplers for training and test data. Positive spikes
    sit on the leading coordinate axes, negative spikes on the trailing ones.

    Parameters
    ----------
    p : int
        Dimension.
    pos_spikes : sequence of float
        Positive spike weights, non-increasing.
    neg_spikes : sequence of float
        Negative spike weights in (-1,0), most negative first.
    mu : (p,) array
        Mean difference mu0 - mu1; the class means are +mu/2 and -mu/2.
    sigma2 : float
        Noise level.
    '''
    def __init__(self, p, pos_spikes=(), neg_spikes=(), mu=None, sigma2=1.):
        self.p = p
        r1, r2 = len(pos_spikes), len(neg_spikes)
        V = np.zeros((p, r1 + r2))
        for j in range(r1):
            V[j, j] = 1.
        for k in range(r2):
            V[p - 1 - k, r1 + k] = 1.
        self.params = SpikedModelParams(sigma2, pos_spikes, neg_spikes, V)

        if mu is None:
            mu = np.full(p, 2. / np.sqrt(p))
        self.mu = np.asarray(mu, dtype=float)
        self.mu0, self.mu1 = self.mu / 2., -self.mu / 2.

    @property
    def alpha(self):
        return self.params.sigma2 / (self.mu @ self.mu)

    @property
    def b(self):
        V = self.params.directions
        return (V.T @ self.mu)**2 / (self.mu @ self.mu)

    def a(self, J):
        return np.array([angle_factor(lam, J) for lam in self.params.spikes])

    def covariance(self):
        return self.params.covariance()

    def _draw(self, rng, n, mean):
        V = self.params.directions
        scale = np.sqrt(1. + self.params.spikes) - 1.
        Z = rng.standard_normal((n, self.p))
        Z = Z + ((Z @ V) * scale) @ V.T
        return mean + np.sqrt(self.params.sigma2) * Z

    def sample(self, rng, n0, n1):
        '''Training sample with exactly n0 and n1 points per class.'''
        X = np.vstack((self._draw(rng, n0, self.mu0), self._draw(rng, n1, self.mu1)))
        y = np.concatenate((np.zeros(n0, dtype=int), np.ones(n1, dtype=int)))
        return X, y

    def sample_prior(self, rng, n, pi0):
        '''Sample whose labels are drawn with P(y = 0) = pi0.'''
        y = (rng.random(n) >= pi0).astype(int)
        X = np.empty((n, self.p))
        X[y == 0] = self._draw(rng, int(np.sum(y == 0)), self.mu0)
        X[y == 1] = self._draw(rng, int(np.sum(y == 1)), self.mu1)
        return X, y

    def surface_params(self, n0, n1, pi0):
        return population_surface_params(self.params, self.mu, n0, n1, pi0)

class NullPopulation(TemplatePopulation):
    '''Sigma = sigma2 I with the mean difference spread over all axes.'''
    def __init__(self, p, mu_norm=2., sigma2=1.):
        super().__init__(
            p, mu=np.full(p, mu_norm / np.sqrt(p)), sigma2=sigma2
        )

class SingleSpike(TemplatePopulation):
    '''One positive spike on e_1; mu either along e_1 or orthogonal to it.'''
    def __init__(self, p, lam=20., mu_norm=2., aligned=True):
        mu = np.zeros(p)
        mu[0 if aligned else p // 2] = mu_norm
        super().__init__(p, pos_spikes=(lam,), mu=mu)

class SingleNegativeSpike(TemplatePopulation):
    '''One negative spike on e_p, mean difference spread over all axes.'''
    def __init__(self, p, lam=-0.8, mu_norm=2.):
        super().__init__(
            p, neg_spikes=(lam,), mu=np.full(p, mu_norm / np.sqrt(p))
        )

class MixedSpikes(TemplatePopulation):
    '''Three positive spikes and one negative spike. Half of the squared
    mean difference lies in the spike span.'''
    def __init__(self, p, pos_spikes=(20., 10., 5.), neg_spikes=(-0.9,),
                 mu_norm=3.):
        r1 = len(pos_spikes)
        mu = np.full(p, 1.)
        mu[:r1] = np.sqrt(p - r1 - 1) / np.sqrt(r1 + 1)
        mu[-1] = mu[0]
        mu = mu_norm * mu / np.linalg.norm(mu)
        super().__init__(p, pos_spikes, neg_spikes, mu=mu)
