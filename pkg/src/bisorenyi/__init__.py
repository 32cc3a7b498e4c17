"""Renyi mutual information, alpha-capacity and alpha-Lorenz curves for
binary-input symmetric-output (BISO) channels."""
from ._backend import BACKEND
from .channel import BisoChannel, bec, bsc, canonicalize, from_matrix, make_biso, random_biso
from .errors import BisoError, DomainError, UnsupportedAlphaError, UsageError, ValidationError
from .measures import (
    alpha_capacity,
    arimoto_mi_biso,
    shannon_mi,
    sibson_mi_biso,
    sibson_mi_general,
    special_mi,
    tilt,
)
from .ordering import (
    Family,
    Regime,
    Verdict,
    calibrate,
    extremality_report,
    lorenz_curve,
    lorenz_dominates,
    more_capable_grid,
    regime,
    sufficient_condition,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BisoChannel", "bec", "bsc", "canonicalize", "from_matrix", "make_biso",
    "random_biso", "BisoError", "DomainError", "UnsupportedAlphaError", "UsageError",
    "ValidationError", "alpha_capacity", "arimoto_mi_biso", "shannon_mi", "sibson_mi_biso",
    "sibson_mi_general", "special_mi", "tilt", "Family", "Regime", "Verdict", "calibrate",
    "extremality_report", "lorenz_curve", "lorenz_dominates", "more_capable_grid", "regime",
    "sufficient_condition", "__version__",
]
