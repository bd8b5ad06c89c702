__version__ = '0.1.0'

from .classifiers import (
    SRLDAConfig, TrainedClassifier, apply_h_tilde, fit_classifier, fit_lda,
    fit_oi_srlda, fit_rlda, fit_srlda, load_model, predict, save_model
)
from .error_surface import SurfaceParams, deterministic_error
from .optimize import GridSpec, optimize_omega
