"""Closed-form approximation of the output variance.

For equal input fields and small two-photon detuning the squeezing is
controlled by the single small parameter

    epsilon = gamma * delta / omega^2.

The phase-conjugating coefficient has magnitude |Q| = alpha*epsilon/4 and
the attenuation-injected noise is summarized by

    Z = (alpha * epsilon^2 / 2) * (1 + omega^2 / (4 gamma^2)),

giving the approximate optimal variance

    V ~ (sqrt(|Q|^2 + 1) - |Q|)^2 + Z (2 + Z) / (3 + 2 Z).

The first term falls monotonically with |Q|, the second grows with Z, so
an interior optimum in epsilon exists; at large optical density it scales
as V_opt ~ alpha^(-1/2). The slow-light delay time alpha*gamma/(4 omega^2)
sets the light-matter interaction time.

These formulas are used as an independent sanity oracle for the full
numerics, not as part of the transport itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

GOLDEN_RATIO_CONJ = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AnalyticFactors:
    epsilon: float
    q_mag: float
    z_noise: float
    v_approx: float
    t_delay: float


def variance_from_factors(q_mag: float, z_noise: float) -> float:
    """Approximate variance from the squeezing and noise factors alone."""
    squeeze_term = (math.sqrt(q_mag * q_mag + 1.0) - q_mag) ** 2
    noise_term = z_noise * (2.0 + z_noise) / (3.0 + 2.0 * z_noise)
    return squeeze_term + noise_term


def analytic_factors(alpha: float, omega: float, delta: float,
                     gamma: float = 1.0) -> AnalyticFactors:
    """Evaluate the closed-form factors at one parameter point."""
    if omega <= 0:
        raise ParameterError("analytic factors need omega > 0")
    eps = gamma * delta / omega ** 2
    q = alpha * eps / 4.0
    z = 0.5 * alpha * eps * eps * (1.0 + omega ** 2 / (4.0 * gamma ** 2))
    return AnalyticFactors(
        epsilon=eps,
        q_mag=abs(q),
        z_noise=z,
        v_approx=variance_from_factors(abs(q), z),
        t_delay=alpha * gamma / (4.0 * omega ** 2),
    )


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    c = hi - GOLDEN_RATIO_CONJ * (hi - lo)
    d = lo + GOLDEN_RATIO_CONJ * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN_RATIO_CONJ * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN_RATIO_CONJ * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def analytic_optimum(alpha: float, omega: float,
                     gamma: float = 1.0) -> tuple[float, float]:
    """Predicted (delta_opt, v_opt) by minimizing the approximation.

    Golden-section search over epsilon in [1e-6, 1]; the objective is
    unimodal on this bracket for fixed alpha and omega.
    """
    if alpha <= 0 or omega <= 0:
        raise ParameterError("analytic optimum needs alpha > 0 and omega > 0")

    def objective(eps: float) -> float:
        q = alpha * eps / 4.0
        z = 0.5 * alpha * eps * eps * (1.0 + omega ** 2 / (4.0 * gamma ** 2))
        return variance_from_factors(q, z)

    eps_opt, v_opt = _golden_min(objective, 1e-6, 1.0, 1e-10)
    return eps_opt * omega ** 2 / gamma, v_opt
