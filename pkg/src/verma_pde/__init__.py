"""Differential-operator model of sl(n) Verma modules and their singular vectors."""

from .algebra import Monomial, Series, TruncationPolicy
from .operators import Weight

__all__ = ["Monomial", "Series", "TruncationPolicy", "Weight"]
__version__ = "0.1.0"
