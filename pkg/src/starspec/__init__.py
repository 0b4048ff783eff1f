"""Asymptotic spectra of slowly varying matrices."""

__version__ = "0.1.0"

from . import expr, models, numerics, oracle, sequence, spectra, states, symbols  # noqa: E402
from .models import build  # noqa: E402
from .sequence import (  # noqa: E402
    BandProfileSet,
    ProfileSet,
    materialize,
    materialize_band,
    profiles_from_expressions,
)

__all__ = [
    "__version__",
    "expr",
    "numerics",
    "sequence",
    "oracle",
    "spectra",
    "symbols",
    "states",
    "models",
    "build",
    "ProfileSet",
    "BandProfileSet",
    "materialize",
    "materialize_band",
    "profiles_from_expressions",
]
