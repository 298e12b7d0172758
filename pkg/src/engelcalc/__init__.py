"""Certified calculus for Engel structures on framed 4-manifolds.

The package represents frame fields whose coefficients are exact
trigonometric polynomials, computes Lie brackets and exterior derivatives
symbolically, and certifies rank and identity claims either in normal form
(SYMBOLIC) or by deterministic grid sampling (SAMPLED).
"""

from .trigring import (
    Frequency,
    PiScalar,
    TrigScalar,
    differentiate,
    evaluate,
    is_identically_zero,
    normalize,
    parse,
)

__version__ = "0.1.0"
