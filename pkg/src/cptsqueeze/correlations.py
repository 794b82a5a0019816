"""Transport of the field-fluctuation correlations and quadrature variances.

At each position the four-mode fluctuation vector a = (a_p, a_p+, a_c,
a_c+) obeys da/dxi = C a + N with drift

    C = i (gamma alpha / 2) [[A1,  B1,  C1,  D1 ],
                             [-B1*,-A1*,-D1*,-C1*],
                             [A2,  B2,  C2,  D2 ],
                             [-B2*,-A2*,-D2*,-C2*]]

and Langevin injection whose second moments are Z = (gamma alpha / 4)
V D V+ with V the four noise rows of the response matrix. Two equivalent
integrations of the resulting moment equations are provided:

* "scalar": the six coupled scalar ODEs for (<a_p^2>, <a_p+ a_p>,
  <a_c^2>, <a_c+ a_c>, <a_p a_c>, <a_p+ a_c>) written out term by term;
* "matrix": the 4x4 second-moment matrix S = <a a+> with
  dS/dxi = C S + S C+ + Z and vacuum initial condition diag(1, 0, 1, 0).

Both ride on the same cached mean-field stages, so they agree to
integrator roundoff and serve as a transcription cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import (_diffusion_from_vector, _m2_from_vector, _noise_rows,
                    _response)
from .errors import NonConvergenceError, ParameterError
from .meanfield import MeanFieldSolution, propagate_mean, transmission
from .params import (CorrelationState, FieldProfile, SqueezingResult,
                     SystemParams, to_db)

# Moment magnitude beyond which 1 + 2 n_p - 2|c_pp| has lost ~5 decimal
# digits to cancellation; propagation stops rather than return garbage.
MOMENT_CAP = 1e10

_VACUUM = np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex)


@dataclass(frozen=True)
class LocalNoiseMatrices:
    """Local drift (c4) and noise (z4) matrices of the fluctuation flow."""

    c4: np.ndarray
    z4: np.ndarray


def _local_from_stage(params: SystemParams, t: np.ndarray, x: np.ndarray):
    """(c4, z4) built from a solved stage (response matrix t, state x)."""
    k = 0.5 * params.gamma * params.alpha
    m2 = _m2_from_vector(x)
    tm = t @ m2
    a1, b1, c1, d1 = tm[8]
    a2, b2, c2, d2 = tm[7]
    c4 = 1j * k * np.array([
        [a1, b1, c1, d1],
        [-b1.conjugate(), -a1.conjugate(), -d1.conjugate(), -c1.conjugate()],
        [a2, b2, c2, d2],
        [-b2.conjugate(), -a2.conjugate(), -d2.conjugate(), -c2.conjugate()],
    ])
    v4 = _noise_rows(t)
    d = _diffusion_from_vector(x, params.gamma, 0.5 * params.gamma, 0.5 * params.gamma)
    z4 = (0.25 * params.gamma * params.alpha) * (v4 @ d @ v4.conj().T)
    return c4, z4


def local_matrices(params: SystemParams, omega_p: complex,
                   omega_c: complex) -> LocalNoiseMatrices:
    """Drift and noise matrices at one point of the medium."""
    t, x, _ = _response(params, omega_p, omega_c)
    c4, z4 = _local_from_stage(params, t, x)
    return LocalNoiseMatrices(c4=c4, z4=z4)


def _stage_matrices(params: SystemParams, mean: MeanFieldSolution):
    """(c4, z4) for every cached RK4 stage of the mean-field solution."""
    n = mean.n_steps
    c4s = np.empty((n, 4, 4, 4), dtype=complex)
    z4s = np.empty((n, 4, 4, 4), dtype=complex)
    for i in range(n):
        for s in range(4):
            c4, z4 = _local_from_stage(params, mean.stage_t[i, s],
                                       mean.stage_x[i, s])
            c4s[i, s] = c4
            z4s[i, s] = z4
    return c4s, z4s


def _check_bounded(n_p: float, n_c: float, xi: float) -> None:
    m = max(n_p, n_c)
    if not math.isfinite(m) or m > MOMENT_CAP:
        raise NonConvergenceError(
            "correlation moments exceeded the double-precision-safe range "
            f"(occupation ~ {m:.2e} at xi = {xi:.3f}); the quadrature variance "
            "cannot be resolved in this strongly anti-squeezed regime",
            xi=xi,
        )


def _integrate_matrix(c4s, z4s) -> np.ndarray:
    n = c4s.shape[0]
    h = 1.0 / n
    sig = _VACUUM.copy()

    def rhs(i, s, sg):
        c4, z4 = c4s[i, s], z4s[i, s]
        return c4 @ sg + sg @ c4.conj().T + z4

    for i in range(n):
        k1 = rhs(i, 0, sig)
        k2 = rhs(i, 1, sig + 0.5 * h * k1)
        k3 = rhs(i, 2, sig + 0.5 * h * k2)
        k4 = rhs(i, 3, sig + h * k3)
        sig = sig + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_bounded(sig[1, 1].real, sig[3, 3].real, (i + 1) * h)
    return sig


def _scalar_rhs(c4, z4, m):
    """The six moment ODEs written out: m = (cpp, np, ccc, nc, cpc, xpc)."""
    p1, q1, r1, s1 = c4[0]
    p2, q2, r2, s2 = c4[2, 0], c4[2, 1], c4[2, 2], c4[2, 3]
    n1, n2 = z4[0, 1], z4[1, 1]
    n3, n4 = z4[2, 3], z4[3, 3]
    n5, n6 = z4[0, 3], z4[1, 3]
    cpp, npp, ccc, ncc, cpc, xpc = m
    d_cpp = (2 * p1 * cpp + q1 * (2 * npp + 1) + 2 * r1 * cpc
             + 2 * s1 * xpc.conjugate() + n1)
    d_np = (2 * p1.real * npp + q1.conjugate() * cpp + q1 * cpp.conjugate()
            + s1.conjugate() * cpc + s1 * cpc.conjugate()
            + r1.conjugate() * xpc.conjugate() + r1 * xpc + n2)
    d_ccc = (2 * r2 * ccc + 2 * p2 * cpc + 2 * q2 * xpc
             + s2 * (2 * ncc + 1) + n3)
    d_nc = (2 * r2.real * ncc + q2.conjugate() * cpc + q2 * cpc.conjugate()
            + p2.conjugate() * xpc + p2 * xpc.conjugate()
            + s2.conjugate() * ccc + s2 * ccc.conjugate() + n4)
    d_cpc = ((p1 + r2) * cpc + r1 * ccc + p2 * cpp + s1 * ncc
             + s2 * xpc.conjugate() + q1 * xpc + q2 * (npp + 1) + n5)
    d_xpc = ((p1.conjugate() + r2) * xpc + q1.conjugate() * cpc
             + q2 * cpp.conjugate() + s1.conjugate() * ccc
             + r1.conjugate() * ncc + p2 * npp + s2 * cpc.conjugate() + n6)
    return np.array([d_cpp, d_np, d_ccc, d_nc, d_cpc, d_xpc])


def _integrate_scalar(c4s, z4s) -> np.ndarray:
    n = c4s.shape[0]
    h = 1.0 / n
    m = np.zeros(6, dtype=complex)
    for i in range(n):
        k1 = _scalar_rhs(c4s[i, 0], z4s[i, 0], m)
        k2 = _scalar_rhs(c4s[i, 1], z4s[i, 1], m + 0.5 * h * k1)
        k3 = _scalar_rhs(c4s[i, 2], z4s[i, 2], m + 0.5 * h * k2)
        k4 = _scalar_rhs(c4s[i, 3], z4s[i, 3], m + h * k3)
        m = m + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_bounded(m[1].real, m[3].real, (i + 1) * h)
    return m


def propagate_correlations(params: SystemParams,
                           mean: MeanFieldSolution | None = None,
                           method: str = "scalar") -> CorrelationState:
    """Propagate the six field correlations from vacuum inputs to xi = 1.

    ``method`` selects the scalar six-ODE form (default) or the
    equivalent 4x4 moment-matrix form; both use the RK4 stages cached by
    the mean-field solution.
    """
    if mean is None:
        mean = propagate_mean(params)
    c4s, z4s = _stage_matrices(params, mean)
    if method == "scalar":
        m = _integrate_scalar(c4s, z4s)
        cpp, npp, ccc, ncc, cpc, xpc = m
        return CorrelationState(c_pp=cpp, n_p=npp.real, c_cc=ccc,
                                n_c=ncc.real, c_pc=cpc, x_pc=xpc)
    if method == "matrix":
        sig = _integrate_matrix(c4s, z4s)
        return CorrelationState(
            c_pp=sig[0, 1], n_p=sig[1, 1].real,
            c_cc=sig[2, 3], n_c=sig[3, 3].real,
            c_pc=sig[0, 3], x_pc=sig[1, 3],
        )
    raise ParameterError(f"unknown method {method!r}; use 'scalar' or 'matrix'")


def quadrature_variance(corr: CorrelationState, theta: float) -> float:
    """Variance of X(theta) = e^(-i theta) a_p + e^(i theta) a_p+."""
    return float(
        1.0 + 2.0 * corr.n_p
        + 2.0 * (np.exp(-2j * theta) * corr.c_pp).real
    )


def coupling_quadrature_variance(corr: CorrelationState, theta: float) -> float:
    """Same as quadrature_variance but for the coupling output mode."""
    return float(
        1.0 + 2.0 * corr.n_c
        + 2.0 * (np.exp(-2j * theta) * corr.c_cc).real
    )


def optimal_theta(c_pp: complex) -> float:
    """Quadrature angle minimizing the variance, reduced to [0, pi).

    For c_pp = 0 every angle is optimal and 0 is returned by convention.
    """
    if c_pp == 0:
        return 0.0
    return float((np.angle(c_pp) - np.pi) / 2.0 % np.pi)


def optimal_variance(corr: CorrelationState, profile: FieldProfile,
                     params: SystemParams | None = None) -> SqueezingResult:
    """Minimum quadrature variance of the probe output.

    Since <a_p+^2> is the conjugate of <a_p^2>, the minimum over angles is
    V = 1 + 2 <a_p+ a_p> - 2 |<a_p^2>|, reached at
    theta = (Arg <a_p^2> - pi) / 2.
    """
    v = 1.0 + 2.0 * corr.n_p - 2.0 * abs(corr.c_pp)
    if not (v > 0.0 and math.isfinite(v)):
        raise NonConvergenceError(
            f"optimal variance not resolvable (V = {v!r}); moments too large "
            "for double precision"
        )
    t_p, t_c = transmission(profile)
    return SqueezingResult(
        variance=v, variance_db=to_db(v), theta_opt=optimal_theta(corr.c_pp),
        transmission_p=t_p, transmission_c=t_c, params_echo=params,
    )


def output_squeezing(params: SystemParams,
                     mean: MeanFieldSolution | None = None) -> SqueezingResult:
    """Full pipeline: mean fields, correlations, optimal variance."""
    if mean is None:
        mean = propagate_mean(params)
    corr = propagate_correlations(params, mean)
    return optimal_variance(corr, mean.profile, params)
