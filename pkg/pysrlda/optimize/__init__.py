"""Grid searches selecting the regularization of SRLDA and R-LDA."""

from ._grid import (
    GridSpec, OmegaSearchResult, SurfaceGrid, evaluate_grid, optimize_omega
)
from ._rlda import RLDA_GAMMA_GRID, optimize_rlda_gamma
