import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..error_surface import (
    DEFAULT_DELTA, INFEASIBLE_ERROR, OBJECTIVES, OmegaPoint, GammaPair,
    omega_surface, omega_to_gamma
)
from ..exceptions import EmptyGridError

logger = logging.getLogger(__name__)

REFINE_FACTOR = 10

@dataclass(frozen=True)
class GridSpec:
    '''Lattice over the omega domain.

    Parameters
    ----------
    resolution : float, default=0.01
        Step h in (0, 0.2]. Each active axis holds the points k*h < 1,
        k = 1, 2, ..., so halving h only adds points.
    delta : float, default=1e-3
        Radius of the omega2 exclusion neighbourhoods.
    objective : {'plain', 'oi'}, default='plain'
        Surface to minimize: the SRLDA error or the optimal-intercept error.
    refine : bool, default=False
        Re-grid once at step h/10 around the coarse winner.
    '''
    resolution: float = 0.01
    delta: float = DEFAULT_DELTA
    objective: str = 'plain'
    refine: bool = False

    def __post_init__(self):
        if not 0. < self.resolution <= 0.2:
            raise ValueError(
                'grid resolution must lie in (0, 0.2], got %r' % self.resolution
            )
        if self.delta < 0.:
            raise ValueError('delta must be non-negative, got %r' % self.delta)
        if self.objective not in OBJECTIVES:
            raise ValueError(
                'objective must be one of %r, got %r'
                % (OBJECTIVES, self.objective)
            )

    def axis(self, active=True, exclusions=()):
        '''Grid coordinates along one axis, [0.] for an inactive axis.'''
        if not active:
            return np.zeros(1)
        h = self.resolution
        pts = np.arange(1, int(np.ceil(1. / h)) + 1) * h
        pts = pts[pts < 1.]
        return _drop_excluded(pts, exclusions, self.delta)

class OmegaSearchResult(NamedTuple):
    omega: OmegaPoint
    gamma: GammaPair
    min_error: float

class SurfaceGrid(NamedTuple):
    '''Evaluated surface: axes, values (NaN where infeasible) and argmin.'''
    omega1: np.ndarray
    omega2: np.ndarray
    values: np.ndarray
    argmin: tuple

def _drop_excluded(pts, exclusions, delta):
    exclusions = np.asarray(exclusions, dtype=float).reshape(-1)
    if exclusions.size == 0:
        return pts
    dist = np.abs(pts[:,None] - exclusions[None,:])
    return pts[np.all(dist >= delta, axis=1)]

def _argmin(values):
    # Row-major flat order gives the (omega1, omega2) lexicographic tie-break
    filled = np.where(np.isnan(values), INFEASIBLE_ERROR, values)
    return np.unravel_index(np.argmin(filled), filled.shape)

def evaluate_grid(sp, grid, w1_axis=None, w2_axis=None):
    '''
    Evaluates the configured objective on the full omega lattice.

    Parameters
    ----------
    sp : SurfaceParams
        Surface scalars.
    grid : GridSpec
        Lattice step, exclusion radius and objective.
    w1_axis, w2_axis : arrays, optional
        Explicit axes overriding the lattice (used for refinement).

    Returns
    -------
    surface : SurfaceGrid

    Raises
    ------
    EmptyGridError
        If no admissible point remains on an active axis.
    '''
    if w1_axis is None:
        w1_axis = grid.axis(sp.r1 > 0)
    if w2_axis is None:
        w2_axis = grid.axis(sp.r2 > 0, sp.omega_exclusions())
    if w1_axis.size == 0 or w2_axis.size == 0:
        raise EmptyGridError(
            'no admissible grid point left with h=%g, delta=%g'
            % (grid.resolution, grid.delta)
        )

    W1, W2 = np.meshgrid(w1_axis, w2_axis, indexing='ij')
    values = omega_surface(W1, W2, sp, grid.objective)
    return SurfaceGrid(w1_axis, w2_axis, values, _argmin(values))

def _refined_axis(center, active, grid, exclusions=()):
    if not active:
        return np.zeros(1)
    step = grid.resolution / REFINE_FACTOR
    pts = center + np.arange(-REFINE_FACTOR, REFINE_FACTOR + 1) * step
    pts = pts[(pts > 0.) & (pts < 1.)]
    return _drop_excluded(pts, exclusions, grid.delta)

def _point_value(w1, w2, sp, objective):
    err = omega_surface(np.float64(w1), np.float64(w2), sp, objective)
    return INFEASIBLE_ERROR if np.isnan(err) else float(err)

def optimize_omega(sp, grid=None):
    '''
    Grid search for the omega point minimizing the deterministic error
    surface, mapped back to regularization weights.

    Parameters
    ----------
    sp : SurfaceParams
        Surface scalars (estimated or population values).
    grid : GridSpec, optional
        Lattice and objective. Defaults to `GridSpec()`.

    Returns
    -------
    result : OmegaSearchResult
        Named tuple (omega, gamma, min_error). Ties resolve to the smallest
        omega1, then the smallest omega2. Infeasible points carry the 0.5
        sentinel.

    Raises
    ------
    EmptyGridError
        If the exclusion neighbourhoods cover every omega2 grid point.
    '''
    if grid is None:
        grid = GridSpec()

    surface = evaluate_grid(sp, grid)
    i, k = surface.argmin
    w1, w2 = surface.omega1[i], surface.omega2[k]
    best = _point_value(w1, w2, sp, grid.objective)

    if grid.refine:
        fine = evaluate_grid(
            sp, grid,
            _refined_axis(w1, sp.r1 > 0, grid),
            _refined_axis(w2, sp.r2 > 0, grid, sp.omega_exclusions())
        )
        fi, fk = fine.argmin
        fw1, fw2 = fine.omega1[fi], fine.omega2[fk]
        fine_best = _point_value(fw1, fw2, sp, grid.objective)
        if fine_best < best:
            w1, w2, best = fw1, fw2, fine_best

    if best == INFEASIBLE_ERROR and np.isnan(surface.values).all():
        logger.warning('every grid point is infeasible; returning sentinel')

    omega = OmegaPoint(float(w1), float(w2))
    gamma = omega_to_gamma(omega, sp.lambda1, sp.lambda_m1)
    logger.debug(
        'omega*=(%.4f, %.4f), gamma*=(%.6g, %.6g), error=%.6f',
        omega.omega1, omega.omega2, gamma.gamma1, gamma.gamma2, best
    )
    return OmegaSearchResult(omega, gamma, best)
