"""Exact canonical heights on elliptic curves and their Lattes maps.

Curves are sequences [a1, a2, a3, a4, a6] and points are pairs (x, y);
entries may be ints, strings like "3/4", or fractions.Fraction. Floats are
rejected to keep the inputs exact. Numeric results come back as
(value, error) pairs bounding the true number.
"""

from heightlab._core import (
    InputError,
    PrecisionError,
    bound,
    canonical_height,
    construct_unramified_point,
    curve_info,
    dynamical_match,
    height_breakdown,
    height_from_minpoly,
    lambert_w,
    lattes_height,
    lattes_orbit,
    multiple_sum_sweep,
    pairing_weight_identity,
    precision_bits,
    set_precision_bits,
    small_height_tower,
)

__all__ = [
    "InputError",
    "PrecisionError",
    "bound",
    "canonical_height",
    "construct_unramified_point",
    "curve_info",
    "dynamical_match",
    "height_breakdown",
    "height_from_minpoly",
    "lambert_w",
    "lattes_height",
    "lattes_orbit",
    "multiple_sum_sweep",
    "pairing_weight_identity",
    "precision_bits",
    "set_precision_bits",
    "small_height_tower",
]
