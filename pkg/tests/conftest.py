import os

import numpy as np
import pytest

from cptsqueeze import SystemParams, split_detuning


def make_params(alpha, delta, omega_p, omega_c=None, setting="symmetric",
                xi_steps=128, **kw):
    """SystemParams with a cheap default grid for tests."""
    dp, dc = split_detuning(setting, delta)
    if omega_c is None:
        omega_c = omega_p
    return SystemParams(alpha=alpha, delta=delta, delta_p=dp, delta_c=dc,
                        omega_p0=omega_p, omega_c0=omega_c,
                        xi_steps=xi_steps, **kw)


def draw_steady_inputs(rng):
    """One random (params, omega_p, omega_c) in the steady-state domain."""
    alpha = rng.uniform(0.0, 3000.0)
    delta = rng.uniform(-0.1, 0.1)
    mag_p = rng.uniform(0.01, 3.0)
    mag_c = rng.uniform(0.01, 3.0)
    om_p = mag_p * np.exp(2j * np.pi * rng.uniform())
    om_c = mag_c * np.exp(2j * np.pi * rng.uniform())
    params = make_params(alpha, delta, om_p, om_c)
    return params, om_p, om_c


def draw_propagation_params(rng, xi_steps=96):
    """Random params restricted to the precision-representable regime.

    The anti-squeezed quadrature grows like exp(alpha*delta/(2*omega^2)),
    so draws are rejected until the growth exponents stay moderate;
    outside that region double precision cannot carry the moments.
    """
    while True:
        alpha = rng.uniform(0.0, 3000.0)
        delta = rng.uniform(-0.1, 0.1)
        omega = rng.uniform(0.3, 3.0)
        q = alpha * abs(delta) / (4.0 * omega ** 2)
        z = 0.5 * alpha * (delta / omega ** 2) ** 2 * (1.0 + omega ** 2 / 4.0)
        if q <= 10.0 and z <= 20.0:
            return make_params(alpha, delta, omega, xi_steps=xi_steps)


def accept_draw_count(full: int) -> int:
    """Honor CPTSQUEEZE_FAST_ACCEPT=1 for quicker development runs."""
    if os.environ.get("CPTSQUEEZE_FAST_ACCEPT") == "1":
        return max(10, full // 10)
    return full


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
