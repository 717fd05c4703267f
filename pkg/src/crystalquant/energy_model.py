"""Closed-form scalar functions of the per-cell energy model.

The minimal second moment of a unit-area n-gon about a point is c_n,
attained by the regular n-gon. The entropy-penalized cell energy
g_a(m, n) = c6/(1-a) m^a + c_n m^2 dominates its tangent plane at
(m, n) = (1, 6); h_a is that tangent-plane gap, and h_1 its a -> 1 limit.
All constants are evaluated from closed forms, never hard-coded decimals,
so the verifier does not compare a constant against itself.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = [
    "ALPHA_BAR",
    "C6",
    "C_INF",
    "KAPPA",
    "c_n",
    "dm_h_alpha",
    "dm_h_one",
    "dn_c_n",
    "g_alpha",
    "h_alpha",
    "h_one",
    "hexagon_reference_distances",
]

# Threshold exponent for the convexity range; the crystallization statements
# hold for all alpha up to this value.
ALPHA_BAR = 0.583

C6 = 5.0 / (18.0 * math.sqrt(3.0))
C_INF = 1.0 / (2.0 * math.pi)
KAPPA = 2.0 * math.pi / 243.0 - 5.0 * math.sqrt(3.0) / 324.0


def _check_n(n):
    n = float(n)
    if math.isnan(n) or n < 3.0:
        raise DomainError(f"polygon order must be >= 3 (or inf), got {n}")
    return n


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha < 1.0:
        raise DomainError(f"entropy exponent must be < 1, got {alpha}")
    return alpha


def c_n(n) -> float:
    """Minimal second moment of a unit-area n-gon about a point.

    Extended to real n >= 3; c_n(inf) = 1/(2 pi). Strictly decreasing and
    convex.
    """
    n = _check_n(n)
    if math.isinf(n):
        return C_INF
    t = math.pi / n
    return (math.tan(t) / 3.0 + 1.0 / math.tan(t)) / (2.0 * n)


def dn_c_n(n) -> float:
    """Analytic derivative of c_n in n. dn_c_n(6) equals KAPPA."""
    n = _check_n(n)
    if math.isinf(n):
        return 0.0
    t = math.pi / n
    sec2 = 1.0 / math.cos(t) ** 2
    csc2 = 1.0 / math.sin(t) ** 2
    return -c_n(n) / n + (0.5 / n) * (math.pi / (n * n)) * (csc2 - sec2 / 3.0)


def _power(alpha, m):
    # m^alpha with the m = 0 boundary handled explicitly
    if m < 0.0:
        raise DomainError("mass must be nonnegative")
    if m == 0.0:
        if alpha <= 0.0:
            raise DomainError("mass must be positive when the exponent is <= 0")
        return 0.0
    return m**alpha


def g_alpha(alpha, m, n) -> float:
    """Per-cell energy c6/(1-alpha) m^alpha + c_n m^2."""
    alpha = _check_alpha(alpha)
    m = float(m)
    return C6 / (1.0 - alpha) * _power(alpha, m) + c_n(n) * m * m


def h_alpha(alpha, m, n) -> float:
    """Gap between g_alpha and its tangent plane at (m, n) = (1, 6)."""
    alpha = _check_alpha(alpha)
    m = float(m)
    return (
        C6 / (1.0 - alpha) * _power(alpha, m)
        + c_n(n) * m * m
        - C6 * (2.0 - alpha) / (1.0 - alpha) * m
        - KAPPA * (float(n) - 6.0)
    )


def dm_h_alpha(alpha, m, n) -> float:
    """Mass derivative of h_alpha (n may be inf for the tail variant)."""
    alpha = _check_alpha(alpha)
    m = float(m)
    if m <= 0.0:
        raise DomainError("mass must be positive for the derivative")
    return (
        alpha / (1.0 - alpha) * C6 * m ** (alpha - 1.0)
        + 2.0 * c_n(n) * m
        - C6 * (2.0 - alpha) / (1.0 - alpha)
    )


def h_one(m, n) -> float:
    """Limit of h_alpha as alpha -> 1: c_n m^2 - c6 m - c6 m ln m - kappa (n-6)."""
    m = float(m)
    if m <= 0.0:
        raise DomainError("mass must be positive")
    return c_n(n) * m * m - C6 * m - C6 * m * math.log(m) - KAPPA * (float(n) - 6.0)


def dm_h_one(m, n) -> float:
    """Mass derivative of h_one: 2 c_n m - 2 c6 - c6 ln m."""
    m = float(m)
    if m <= 0.0:
        raise DomainError("mass must be positive")
    return 2.0 * c_n(n) * m - 2.0 * C6 - C6 * math.log(m)


def hexagon_reference_distances() -> tuple[float, float]:
    """(circumradius, inradius) of the unit-area regular hexagon."""
    return math.sqrt(2.0 / (3.0 * math.sqrt(3.0))), math.sqrt(1.0 / (2.0 * math.sqrt(3.0)))
