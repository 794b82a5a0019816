"""Frequency-resolved quadrature-noise spectra.

At noise frequency w the atomic response T' = -(M1 + i w Io)^(-1)
replaces the steady-state response T, where Io is the identity with the
population-conservation row zeroed (that row is algebraic, not
dynamical). The propagated vector is (a_p(w), a_p+(-w), a_c(w),
a_c+(-w)); its first and third drift rows come from rows 9 and 8 of
T'(w) M2, the second and fourth are the negated conjugates of the same
rows of T'(-w) M2, and every row carries the vacuum transit phase
i * w * lc on the diagonal. The noise matrix keeps the steady-state form
with the response rows mixing T'(w) and conj(T'(-w)).

The second-moment matrix of the extended vector starts from the vacuum
diag(1, 0, 1, 0) per unit bandwidth; this normalization is fixed by the
requirement that the w = 0 spectrum reproduce the steady-state variance.
The spectrum is evaluated at a fixed quadrature angle, the one that is
optimal at w = 0, which is what produces the oscillatory structure as
the pair-correlation phase rotates with w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .bloch import (COND_LIMIT, I_OSC, _diffusion_from_vector,
                    _m2_from_vector, _response, build_m1)
from .correlations import optimal_theta
from .errors import FeatureUndefinedError, SingularSystemError
from .meanfield import MeanFieldSolution, propagate_mean
from .params import SpectrumResult, SystemParams

# Index permutation swapping each state entry with its adjoint partner.
_ADJ = np.array([8, 7, 6, 3, 4, 5, 2, 1, 0])
# Column swap (u_p <-> u_p+, u_c <-> u_c+) used by the dagger rows.
_SWAP = np.array([1, 0, 3, 2])

# Residual squeezing depth (fraction of the center depth) defining the
# band edge, and the peak prominence floor (fraction of the S span) used
# for the oscillation-period extraction.
BAND_EDGE_FRACTION = 0.02
PEAK_PROMINENCE_FRACTION = 0.01


def frequency_response(params: SystemParams, omega_p: complex, omega_c: complex,
                       w: float) -> np.ndarray:
    """T'(w) = -(M1 + i w Io)^(-1) at the given local fields."""
    m = build_m1(params, omega_p, omega_c) + 1j * w * I_OSC
    try:
        inv = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            f"frequency response singular at w = {w}", w=w) from None
    cond = np.abs(m).sum(axis=0).max() * np.abs(inv).sum(axis=0).max()
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(
            f"frequency response numerically singular at w = {w} "
            f"(cond ~ {cond:.2e})", cond=cond, w=w)
    return -inv


def _batch_inverse(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stacked inverses plus a per-item validity mask (singular -> False)."""
    ok = np.ones(mats.shape[0], dtype=bool)
    try:
        inv = np.linalg.inv(mats)
    except np.linalg.LinAlgError:
        inv = np.empty_like(mats)
        for i in range(mats.shape[0]):
            try:
                inv[i] = np.linalg.inv(mats[i])
            except np.linalg.LinAlgError:
                inv[i] = np.nan
                ok[i] = False
    cond = (np.abs(mats).sum(axis=1).max(axis=1)
            * np.abs(inv).sum(axis=1).max(axis=1))
    ok &= np.isfinite(cond) & (cond <= COND_LIMIT)
    return inv, ok


@dataclass(frozen=True)
class SpectralMatrices:
    """Frequency-domain counterparts of the local transport matrices."""

    t_plus: np.ndarray
    t_minus_conj: np.ndarray
    c4w: np.ndarray
    z4w: np.ndarray


def spectral_local_matrices(params: SystemParams, omega_p: complex,
                            omega_c: complex, w: float) -> SpectralMatrices:
    """Drift and noise matrices at one point of the medium and one w."""
    _, x, m1 = _response(params, omega_p, omega_c)
    ws = np.array([float(w)])
    c4, z4, ok = _spectral_from_stage(params, m1, x, ws)
    if not ok[0]:
        raise SingularSystemError(
            f"frequency response singular at w = {w}", w=w)
    t_plus = frequency_response(params, omega_p, omega_c, w)
    t_minus = frequency_response(params, omega_p, omega_c, -w)
    return SpectralMatrices(t_plus=t_plus, t_minus_conj=np.conj(t_minus),
                            c4w=c4[0], z4w=z4[0])


def _spectral_from_stage(params, m1, x, ws):
    nw = ws.size
    k = 0.5 * params.gamma * params.alpha
    stacked = m1[None, :, :] + 1j * np.concatenate([ws, -ws])[:, None, None] * I_OSC
    inv, ok_all = _batch_inverse(stacked)
    t_plus, t_minus = -inv[:nw], -inv[nw:]
    ok = ok_all[:nw] & ok_all[nw:]

    m2 = _m2_from_vector(x)
    d = _diffusion_from_vector(x, params.gamma, 0.5 * params.gamma,
                               0.5 * params.gamma)
    tm_p = t_plus @ m2
    tm_m = t_minus @ m2

    c4 = np.empty((nw, 4, 4), dtype=complex)
    c4[:, 0, :] = 1j * k * tm_p[:, 8, :]
    c4[:, 2, :] = 1j * k * tm_p[:, 7, :]
    c4[:, 1, :] = -1j * k * np.conj(tm_m[:, 8, :][:, _SWAP])
    c4[:, 3, :] = -1j * k * np.conj(tm_m[:, 7, :][:, _SWAP])
    c4 += (1j * params.lc * ws)[:, None, None] * np.eye(4)[None, :, :]

    v4 = np.stack([
        t_plus[:, 8, :],
        -np.conj(t_minus[:, 8, :][:, _ADJ]),
        t_plus[:, 7, :],
        -np.conj(t_minus[:, 7, :][:, _ADJ]),
    ], axis=1)
    z4 = (0.25 * params.gamma * params.alpha) * (
        v4 @ d[None, :, :] @ np.conj(np.transpose(v4, (0, 2, 1)))
    )
    return c4, z4, ok


def _propagate_spectral(params: SystemParams, mean: MeanFieldSolution,
                        ws: np.ndarray):
    """Second-moment matrices of the extended vector at xi = 1, batched."""
    n = mean.n_steps
    h = 1.0 / n
    nw = ws.size
    sig = np.zeros((nw, 4, 4), dtype=complex)
    sig[:, 0, 0] = 1.0
    sig[:, 2, 2] = 1.0
    ok = np.ones(nw, dtype=bool)

    for i in range(n):
        stage = []
        for s in range(4):
            m1 = build_m1(params, *mean.stage_fields[i, s])
            c4, z4, ok_s = _spectral_from_stage(params, m1, mean.stage_x[i, s], ws)
            ok &= ok_s
            stage.append((c4, z4))

        def rhs(s, sg):
            c4, z4 = stage[s]
            return c4 @ sg + sg @ np.conj(np.transpose(c4, (0, 2, 1))) + z4

        k1 = rhs(0, sig)
        k2 = rhs(1, sig + 0.5 * h * k1)
        k3 = rhs(2, sig + 0.5 * h * k2)
        k4 = rhs(3, sig + h * k3)
        sig = sig + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    with np.errstate(invalid="ignore"):
        ok &= np.isfinite(sig).reshape(nw, -1).all(axis=1)
    return sig, ok


def squeezing_spectrum(params: SystemParams, w_grid,
                       mean: MeanFieldSolution | None = None) -> SpectrumResult:
    """Quadrature-noise spectrum S(w) on the given frequency grid.

    The quadrature angle is fixed to the w = 0 optimum across the whole
    spectrum. Frequencies where the response is singular are recorded in
    ``failures`` and carry NaN; the rest of the spectrum is unaffected.
    Band features are attached when the center is squeezed (S(0) < 1).
    """
    ws = np.asarray(w_grid, dtype=float)
    if ws.ndim != 1 or ws.size == 0 or not np.all(np.isfinite(ws)):
        raise ValueError("w_grid must be a finite, non-empty 1-D grid")
    if mean is None:
        mean = propagate_mean(params)

    # Always co-evaluate w = 0: it pins the quadrature angle.
    ws_all = ws if 0.0 in ws else np.concatenate([[0.0], ws])
    sig, ok = _propagate_spectral(params, mean, ws_all)
    i0 = int(np.where(ws_all == 0.0)[0][0])

    theta = optimal_theta(sig[i0, 0, 1])
    s_all = (sig[:, 0, 0].real + sig[:, 1, 1].real
             + 2.0 * (np.exp(-2j * theta) * sig[:, 0, 1]).real)
    s_all = np.where(ok, s_all, np.nan)

    keep = np.isin(ws_all, ws)
    s = s_all[keep]
    failures = {float(w): "singular or non-finite response"
                for w, good in zip(ws, ok[keep]) if not good}

    bandwidth = period = None
    if ok[i0] and s_all[i0] < 1.0:
        try:
            bandwidth, period = _extract_features(ws, s, s_all[i0])
        except FeatureUndefinedError:
            pass
    return SpectrumResult(omega=ws, s=s, theta_used=theta,
                          bandwidth=bandwidth, period=period,
                          failures=failures)


def _extract_features(ws: np.ndarray, s: np.ndarray, s0: float):
    pos = (ws >= 0.0) & np.isfinite(s)
    w, sv = ws[pos], s[pos]
    if w.size < 5:
        raise FeatureUndefinedError("too few valid points at w >= 0")

    # Band edge: last frequency where S still dips below vacuum by at
    # least BAND_EDGE_FRACTION of the center squeezing depth.
    level = 1.0 - BAND_EDGE_FRACTION * (1.0 - s0)
    below = np.where(sv <= level)[0]
    if below.size == 0:
        raise FeatureUndefinedError("spectrum never dips below the band-edge level")
    last = below[-1]
    if last + 1 < sv.size and sv[last + 1] > sv[last]:
        frac = (level - sv[last]) / (sv[last + 1] - sv[last])
        bandwidth = float(w[last] + frac * (w[last + 1] - w[last]))
    else:
        bandwidth = float(w[last])

    span = float(np.nanmax(sv) - np.nanmin(sv))
    peaks, _ = find_peaks(sv, prominence=PEAK_PROMINENCE_FRACTION * span)
    period = float(np.mean(np.diff(w[peaks]))) if peaks.size >= 2 else None
    return bandwidth, period


def spectrum_features(spec: SpectrumResult) -> tuple[float, float | None]:
    """(bandwidth, oscillation period) of a squeezing spectrum.

    Raises FeatureUndefinedError when the center is not squeezed
    (S(0) >= 1) so neither feature is defined.
    """
    idx = np.where(spec.omega == 0.0)[0]
    if idx.size == 0:
        raise FeatureUndefinedError("spectrum grid does not contain w = 0")
    s0 = spec.s[idx[0]]
    if not (math.isfinite(s0) and s0 < 1.0):
        raise FeatureUndefinedError(
            f"no squeezing at the spectrum center (S(0) = {s0!r})")
    return _extract_features(spec.omega, spec.s, s0)
