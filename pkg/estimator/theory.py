"""Closed-form guarantees used by audits and rate fits."""

import math


def rate_exponent(alpha: float, kappa: float, d: int) -> float:
    """Exponent of n in the sup-norm boundary error: -alpha / (2 alpha (kappa - 1) + d - 1)."""
    return -alpha / (2 * alpha * (kappa - 1) + d - 1)


def margin_constant(alpha: float, kappa: float, c: float, d: int) -> float:
    """c1 of the abstention margin; zero when kappa == 1."""
    up = math.ceil(alpha)
    return (kappa - 1) * c ** 2 / (
        400 * (2 * up) ** (d - 1) * alpha * math.log(1 / c) * kappa * 8 ** (2 * (kappa - 1))
    )


def theoretical_margin(alpha: float, kappa: float, c: float, lam: float, d: int, n: int, delta: float) -> float:
    """
    Abstention half-width Delta_n that a run with n labels and confidence
    delta is guaranteed to achieve. Infinite for kappa == 1.
    """
    c1 = margin_constant(alpha, kappa, c, d)
    if c1 <= 0 or n < 1:
        return math.inf
    up = math.ceil(alpha)
    denom = 2 * alpha * (kappa - 1) + d - 1
    return (
        7 * up ** (d * up) * 2 ** alpha
        * lam ** ((d - 1) / denom)
        * (math.log(n / delta) / (c1 * n)) ** (alpha / denom)
    )
