import pytest

import numpy as np
from matplotlib import pyplot as plt

from pysrlda import error_surface as es
from pysrlda.exceptions import InadmissibleParameterError
from pysrlda.spiked_model import angle_factor

from .test_data import example_populations

PLOT_SURFACES = False

TOL = 1e-12

def _mixed_params(pi0=0.3, J0=1.5, J1=0.75):
    return es.SurfaceParams(
        [(20., 0.93, 0.3), (8., 0.85, 0.2), (3., 0.6, 0.1)],
        [(-0.9, 0.55, 0.1), (-0.7, 0.3, 0.05)],
        0.2, J0, J1, pi0
    )

def _single_spike(lam=20., a=0.9, b=1., pi0=0.5, alpha=0.25):
    return es.SurfaceParams([(lam, a, b)], [], alpha, 1., 1., pi0)

def _plot_surface(sp, objective, title):
    w = np.linspace(0.01, 0.99, 99)
    W1, W2 = np.meshgrid(w, w, indexing='ij')
    values = es.omega_surface(W1, W2, sp, objective)

    plt.figure()
    plt.contourf(W1, W2, values, levels=30)
    plt.colorbar()
    plt.xlabel('$\\omega_1$')
    plt.ylabel('$\\omega_2$')
    plt.title(title)
    plt.show()

def test_surface_params():
    sp = _mixed_params()
    assert (sp.r1, sp.r2) == (3, 2)
    assert sp.lambda1 == 20.
    assert sp.lambda_m1 == -0.9
    assert sp.pi1 == pytest.approx(0.7)
    assert sp.c == pytest.approx(np.log(0.7 / 0.3))
    assert sp.eta == pytest.approx(0.2 * (0.75 + 2. * np.log(0.7 / 0.3)))
    assert sp.zeta == pytest.approx(0.2 * 2.25)

    excl = sp.omega_exclusions()
    assert excl[0] == pytest.approx(0.5)
    assert excl[1] == pytest.approx(1. / (1. + 0.7 / 0.9))

    empty = es.SurfaceParams([], [], 0.5, 1., 1., 0.5)
    assert empty.lambda1 is None and empty.lambda_m1 is None
    assert empty.omega_exclusions().size == 0

@pytest.mark.parametrize('kwargs', [
    {'pi0': 0.}, {'pi0': 1.}, {'alpha': 0.}, {'J0': -1.}
])
def test_surface_params_rejects(kwargs):
    args = {'alpha': 0.2, 'J0': 1., 'J1': 1., 'pi0': 0.5}
    args.update(kwargs)
    with pytest.raises(ValueError):
        es.SurfaceParams([(5., 0.9, 0.5)], [], **args)

def test_surface_params_rejects_spikes():
    with pytest.raises(ValueError):
        es.SurfaceParams([(5., 0.9, 0.7), (2., 0.5, 0.6)], [], 0.2, 1., 1., 0.5)
    with pytest.raises(ValueError):
        es.SurfaceParams([(5., 0.9, 1.2)], [], 0.2, 1., 1., 0.5)
    with pytest.raises(ValueError):
        es.SurfaceParams([(-5., 0.9, 0.2)], [], 0.2, 1., 1., 0.5)
    with pytest.raises(ValueError):
        es.SurfaceParams([], [(-1.2, 0.9, 0.2)], 0.2, 1., 1., 0.5)

def test_omega_to_gamma():
    gp = es.omega_to_gamma((0.5, 0.5), 20., -0.5)
    assert gp.gamma1 == pytest.approx(0.05, abs=TOL)
    assert gp.gamma2 == pytest.approx(2., abs=TOL)

    gp = es.omega_to_gamma((1e-12, 1e-12), 20., -0.5)
    assert 0. < gp.gamma1 < 1e-12 and 0. < gp.gamma2 < 1e-11

    assert es.omega_to_gamma((0.3, 0.), 20., None).gamma2 == 0.
    assert es.omega_to_gamma((0., 0.4), None, -0.5).gamma1 == 0.

@pytest.mark.parametrize('w', [(0., 0.5), (1., 0.5), (0.5, 0.), (0.5, 1.2)])
def test_omega_to_gamma_boundary(w):
    with pytest.raises(InadmissibleParameterError):
        es.omega_to_gamma(w, 20., -0.5)

def test_omega_to_gamma_empty_group():
    with pytest.raises(InadmissibleParameterError):
        es.omega_to_gamma((0.3, 0.2), 20., None)

def test_gamma_weights():
    sp = _single_spike()
    wp, wn = es.gamma_weights((0.05, 0.), sp)
    assert wp == pytest.approx([0.5])
    assert wn.size == 0

    wp, _ = es.gamma_weights((0., 0.), sp)
    assert np.all(wp == 0.)

    sp = _mixed_params()
    with pytest.raises(InadmissibleParameterError):
        es.gamma_weights((0.1, 1. / 0.9), sp)

def test_is_admissible_gamma():
    sp = _mixed_params()
    assert es.is_admissible_gamma((0.1, 0.5), sp)
    assert not es.is_admissible_gamma((-0.1, 0.5), sp)
    assert not es.is_admissible_gamma((0.1, 1. / 0.9 + 1e-4), sp)
    assert es.is_admissible_gamma((0.1, 1. / 0.9 + 1e-2), sp)
    assert not es.is_admissible_gamma((0.1, 1. / 0.7), sp, delta=1e-2)

def test_g_and_d_examples():
    sp = es.SurfaceParams([(20., 0.8, 1.)], [], 0.25, 1., 1., 0.5)
    assert es.g_bar((0.05, 0.), sp) == pytest.approx(0.6, abs=TOL)

    sp = _single_spike(a=0.9)
    assert es.d_bar((0.05, 0.), sp) == pytest.approx(6.375, abs=TOL)

    # Without mean energy in the spike span both terms are trivial
    sp = _single_spike(b=0.)
    assert es.g_bar((0.3, 0.), sp) == 1.
    assert es.d_bar((0.3, 0.), sp) == 1.

    sp = es.SurfaceParams([], [], 0.25, 1., 1., 0.5)
    assert es.g_bar((0., 0.), sp) == 1.
    assert es.d_bar((0., 0.), sp) == 1.

def test_gamma_and_omega_forms_agree():
    '''
    The omega form evaluated at omega equals the gamma form evaluated at
    omega_to_gamma(omega) on a dense grid avoiding the exclusion points.
    '''
    sp = _mixed_params()
    excl = sp.omega_exclusions()
    axis = np.linspace(0.005, 0.995, 100)

    for w1 in axis:
        for w2 in axis:
            if np.min(np.abs(w2 - excl)) < 1e-2:
                continue
            gp = es.omega_to_gamma((w1, w2), sp.lambda1, sp.lambda_m1)
            assert es.g_tilde((w1, w2), sp) == pytest.approx(
                es.g_bar(gp, sp), rel=1e-10, abs=TOL
            )
            assert es.d_tilde((w1, w2), sp) == pytest.approx(
                es.d_bar(gp, sp), rel=1e-10, abs=TOL
            )

def test_omega_weights_of_extreme_spikes():
    sp = _mixed_params()
    w = (0.37, 0.81)
    gp = es.omega_to_gamma(w, sp.lambda1, sp.lambda_m1)
    wp, wn = es.gamma_weights(gp, sp)
    assert wp[0] == pytest.approx(0.37, abs=TOL)
    assert wn[0] == pytest.approx(-0.81 / (1. - 2. * 0.81), abs=TOL)

def test_deterministic_error_balanced():
    sp = _single_spike(a=0.9)
    gp = (0.05, 0.)
    G, D = es.g_bar(gp, sp), es.d_bar(gp, sp)
    expected = es.normal_cdf(-G / (2. * np.sqrt(sp.alpha) * np.sqrt(D + sp.zeta)))
    assert es.deterministic_error(gp, sp) == pytest.approx(expected, abs=TOL)

def test_deterministic_error_at_zero_g():
    sp = es.SurfaceParams([], [(-0.8, 0.75, 0.5)], 0.25, 1., 1., 0.5)
    gp = (0., 2.)
    assert es.g_bar(gp, sp) == pytest.approx(0., abs=1e-12)
    assert es.deterministic_error(gp, sp) == pytest.approx(0.5, abs=1e-12)

@pytest.mark.parametrize('pi0', [0.1, 0.5, 0.8])
def test_deterministic_error_range(pi0):
    sp = _mixed_params(pi0=pi0)
    rng = np.random.default_rng(0)
    for w in rng.uniform(0.02, 0.98, size=(50, 2)):
        if np.min(np.abs(w[1] - sp.omega_exclusions())) < 1e-2:
            continue
        gp = es.omega_to_gamma(w, sp.lambda1, sp.lambda_m1)
        err = es.deterministic_error(gp, sp)
        assert 0. < err < 1.
        assert err == pytest.approx(es.plain_surface_error(w, sp), rel=1e-9)

def test_deterministic_error_monotone_in_alpha():
    errs = [
        es.deterministic_error((0.05, 0.), _single_spike(a=0.9, b=0.5, alpha=alpha))
        for alpha in (0.05, 0.1, 0.2, 0.4, 0.8)
    ]
    assert np.all(np.diff(errs) > 0.)

def test_optimal_theta():
    sp = _single_spike()
    assert es.optimal_theta((0.05, 0.), sp) == 0.

    sp = es.SurfaceParams([(20., 0.9, 1.)], [], 0.25, 2., 1., 0.5)
    assert es.optimal_theta((0.05, 0.), sp) == pytest.approx(0.5, abs=TOL)

    sp = es.SurfaceParams([(20., 0.9, 1.)], [], 0.25, 1., 1., 0.2)
    G, D = es.g_bar((0.05, 0.), sp), es.d_bar((0.05, 0.), sp)
    assert es.optimal_theta((0.05, 0.), sp) == pytest.approx(
        -(D + sp.zeta) / G * np.log(4.), abs=TOL
    )

def test_oi_matches_plain_when_balanced():
    sp = _mixed_params(pi0=0.5, J0=1., J1=1.)
    rng = np.random.default_rng(1)
    for w in rng.uniform(0.02, 0.98, size=(30, 2)):
        if np.min(np.abs(w[1] - sp.omega_exclusions())) < 1e-2:
            continue
        if es.g_tilde(w, sp) <= 0.:
            continue
        assert es.surface_error(w, sp, 'oi') == pytest.approx(
            es.surface_error(w, sp, 'plain'), abs=1e-15
        )

def test_oi_error_not_above_plain():
    '''
    Shifting the threshold optimally never increases the predicted error.
    '''
    sp = _mixed_params(pi0=0.2)
    rng = np.random.default_rng(2)
    for w in rng.uniform(0.02, 0.98, size=(30, 2)):
        if np.min(np.abs(w[1] - sp.omega_exclusions())) < 1e-2:
            continue
        if es.g_tilde(w, sp) <= 0.:
            continue
        assert es.oi_deterministic_error(w, sp) <= es.plain_surface_error(w, sp) + TOL

def test_oi_rejects_nonpositive_g():
    sp = es.SurfaceParams([], [(-0.8, 0.9, 0.5)], 0.25, 1., 1., 0.3)
    gp = (0., 2.)
    w = (0., 1.6 / 2.6)
    assert es.g_bar(gp, sp) < 0.
    with pytest.raises(InadmissibleParameterError):
        es.oi_deterministic_error(w, sp)
    assert np.isnan(es.omega_surface(w[0], w[1], sp, 'oi'))

def test_surface_error_objective():
    with pytest.raises(ValueError):
        es.surface_error((0.5, 0.5), _mixed_params(), 'quadratic')

def test_omega_surface_vectorized():
    sp = _mixed_params()
    W1, W2 = np.meshgrid([0.1, 0.4, 0.7], [0.2, 0.3], indexing='ij')
    values = es.omega_surface(W1, W2, sp)
    assert values.shape == (3, 2)
    for i in range(3):
        for k in range(2):
            assert values[i, k] == pytest.approx(
                es.plain_surface_error((W1[i, k], W2[i, k]), sp), rel=1e-13
            )

    if PLOT_SURFACES:
        _plot_surface(sp, 'plain', 'deterministic SRLDA error')
        _plot_surface(sp, 'oi', 'optimal-intercept error')

def test_population_surface_params():
    population = example_populations.SingleSpike(100, lam=20., mu_norm=2.)
    sp = population.surface_params(100, 100, 0.4)
    J = 100 / 200

    assert sp.r1 == 1 and sp.r2 == 0
    lam, a, b = sp.pos_spikes[0]
    assert lam == 20.
    assert a == pytest.approx(angle_factor(20., J))
    assert b == pytest.approx(1.)
    assert sp.alpha == pytest.approx(0.25)
    assert (sp.J0, sp.J1) == (1., 1.)

def test_population_surface_params_drops_undetectable():
    population = example_populations.TemplatePopulation(
        100, (20., 0.3), (-0.9, -0.2)
    )
    sp = population.surface_params(100, 100, 0.5)
    assert [s.lam for s in sp.pos_spikes] == [20.]
    assert [s.lam for s in sp.neg_spikes] == [-0.9]
    assert sp.alpha == pytest.approx(population.alpha)
