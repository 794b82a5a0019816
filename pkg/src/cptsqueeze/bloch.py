"""Steady-state Bloch system and linear-response machinery.

The steady state of the three-level Lambda system solves the linear
system M1 x = b, where x is the 9-component density-matrix vector (see
``params.STATE_LABELS``) and b selects the population-conservation row.
The fluctuation response around that steady state is carried by three
more matrices:

* M2 (9x4) couples the atomic fluctuations to the four field-fluctuation
  operators (u_p, u_p+, u_c, u_c+);
* T = -M1^(-1) converts drive terms into atomic responses;
* D (9x9) holds the Langevin diffusion coefficients <F F+> obtained from
  the generalized Einstein relation, normally ordered so rows/columns of
  excited-state noise vanish.

The optical-coherence responses come out as the eight scalars
A1..D1 (probe dipole) and A2..D2 (coupling dipole), read off rows 9 and 8
of T M2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystemError
from .params import AtomicState, SystemParams

# Condition-estimate ceiling beyond which the solve is treated as singular.
COND_LIMIT = 1e14

_B = np.zeros(9, dtype=complex)
_B[5] = 1.0

# Identity with the population-conservation row zeroed; the constraint row
# stays algebraic in the frequency domain.
I_OSC = np.eye(9, dtype=complex)
I_OSC[5, 5] = 0.0


def build_m1(params: SystemParams, omega_p: complex, omega_c: complex) -> np.ndarray:
    """Steady-state Bloch matrix at the given local fields.

    Row 6 (index 5) is the population-conservation row; the coherence
    relaxation rates are gamma/2 - i*detuning for the optical coherences
    and gamma12 -+ i*delta for the ground coherence.
    """
    gam = params.gamma
    g13 = 0.5 * gam - 1j * params.delta_p
    g23 = 0.5 * gam - 1j * params.delta_c
    gd = params.gamma12 + 1j * params.delta
    op, oc = complex(omega_p), complex(omega_c)
    opc, occ = op.conjugate(), oc.conjugate()
    i2 = 0.5j

    m = np.zeros((9, 9), dtype=complex)
    m[0, 0] = -g13.conjugate(); m[0, 2] = -i2 * occ; m[0, 3] = -i2 * opc; m[0, 5] = i2 * opc
    m[1, 1] = -g23.conjugate(); m[1, 4] = -i2 * occ; m[1, 5] = i2 * occ; m[1, 6] = -i2 * opc
    m[2, 0] = -i2 * oc; m[2, 2] = -gd; m[2, 7] = i2 * opc
    m[3, 0] = -i2 * op; m[3, 5] = 0.5 * gam; m[3, 8] = i2 * opc
    m[4, 1] = -i2 * oc; m[4, 5] = 0.5 * gam; m[4, 7] = i2 * occ
    m[5, 3] = 1.0; m[5, 4] = 1.0; m[5, 5] = 1.0
    m[6, 1] = -i2 * op; m[6, 6] = -gd.conjugate(); m[6, 8] = i2 * occ
    m[7, 2] = i2 * op; m[7, 4] = i2 * oc; m[7, 5] = -i2 * oc; m[7, 7] = -g23
    m[8, 3] = i2 * op; m[8, 5] = -i2 * op; m[8, 6] = i2 * oc; m[8, 8] = -g13
    return m


def _invert_checked(m: np.ndarray, context: str = "", **err_kw) -> np.ndarray:
    """Inverse with a 1-norm condition estimate; raises SingularSystemError."""
    try:
        inv = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        raise SingularSystemError(f"Bloch system exactly singular{context}", **err_kw)
    cond = np.abs(m).sum(axis=0).max() * np.abs(inv).sum(axis=0).max()
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(
            f"Bloch system numerically singular (cond ~ {cond:.2e}){context}",
            cond=cond, **err_kw,
        )
    return inv


def _response(params: SystemParams, omega_p: complex, omega_c: complex):
    """Raw kernel: (T, x, cond-checked) for the local fields.

    T = -M1^(-1); the steady state is x = M1^(-1) b, which is column 6 of
    the inverse, refined once if the residual exceeds 1e-10.
    """
    m1 = build_m1(params, omega_p, omega_c)
    inv = _invert_checked(m1)
    x = inv[:, 5].copy()
    resid = m1 @ x - _B
    if np.abs(resid).max() > 1e-10:
        x -= inv @ resid
    return -inv, x, m1


def steady_state(params: SystemParams, omega_p: complex, omega_c: complex) -> AtomicState:
    """Solve the local Bloch steady state M1 x = b."""
    _, x, _ = _response(params, omega_p, omega_c)
    return AtomicState(x)


def build_m2(state: AtomicState) -> np.ndarray:
    """Fluctuation coupling matrix to (u_p, u_p+, u_c, u_c+).

    Row 6 is all zeros: the conservation row carries no field terms.
    """
    return _m2_from_vector(state.x)


def _m2_from_vector(x: np.ndarray) -> np.ndarray:
    i2 = 0.5j
    m = np.zeros((9, 4), dtype=complex)
    m[0, 1] = -i2 * (x[3] - x[5]); m[0, 3] = -i2 * x[2]
    m[1, 1] = -i2 * x[6]; m[1, 3] = -i2 * (x[4] - x[5])
    m[2, 1] = i2 * x[7]; m[2, 2] = -i2 * x[0]
    m[3, 0] = -i2 * x[0]; m[3, 1] = i2 * x[8]
    m[4, 2] = -i2 * x[1]; m[4, 3] = i2 * x[7]
    m[6, 0] = -i2 * x[1]; m[6, 3] = i2 * x[8]
    m[7, 0] = i2 * x[2]; m[7, 2] = i2 * (x[4] - x[5])
    m[8, 0] = i2 * (x[3] - x[5]); m[8, 2] = i2 * x[6]
    return m


def build_diffusion(state: AtomicState, params: SystemParams,
                    gamma1: float | None = None,
                    gamma2: float | None = None) -> np.ndarray:
    """Langevin diffusion matrix <F F+> at the given steady state.

    gamma1 and gamma2 are the branching rates of the excited state into the
    two ground states; both default to gamma/2 (equal branching). The matrix
    is Hermitian and positive semidefinite for a physical state.
    """
    return _diffusion_from_vector(
        state.x, params.gamma,
        0.5 * params.gamma if gamma1 is None else gamma1,
        0.5 * params.gamma if gamma2 is None else gamma2,
    )


def _diffusion_from_vector(x: np.ndarray, gam: float, g1: float, g2: float) -> np.ndarray:
    d = np.zeros((9, 9), dtype=complex)
    d[2, 2] = g2 * x[5]
    d[3, 3] = g1 * x[5]; d[3, 7] = -g1 * x[1]; d[3, 8] = -g1 * x[0]
    d[4, 4] = g2 * x[5]; d[4, 7] = -g2 * x[1]; d[4, 8] = -g2 * x[0]
    d[6, 6] = g1 * x[5]
    d[7, 3] = -g1 * x[7]; d[7, 4] = -g2 * x[7]
    d[7, 7] = g2 * x[5] + gam * x[4]; d[7, 8] = gam * x[2]
    d[8, 3] = -g1 * x[8]; d[8, 4] = -g2 * x[8]
    d[8, 7] = gam * x[6]; d[8, 8] = g1 * x[5] + gam * x[3]
    return d


def _noise_rows(t: np.ndarray) -> np.ndarray:
    """The 4x9 matrix mapping Langevin forces onto the four field modes.

    Rows are (T row 9, -T row 1, T row 8, -T row 2): the probe and
    coupling dipole responses and their adjoint partners.
    """
    return np.stack([t[8], -t[0], t[7], -t[1]])


@dataclass(frozen=True)
class ResponseBundle:
    """Everything the fluctuation transport needs at one point."""

    m1: np.ndarray
    t: np.ndarray
    m2: np.ndarray
    d: np.ndarray
    coeffs: tuple
    v4x9: np.ndarray


def response_coefficients(params: SystemParams, omega_p: complex,
                          omega_c: complex) -> ResponseBundle:
    """Assemble the linear-response bundle at the given local fields.

    ``coeffs`` holds (A1, B1, C1, D1, A2, B2, C2, D2): the probe-dipole
    response row (row 9 of T M2) followed by the coupling-dipole row
    (row 8).
    """
    t, x, m1 = _response(params, omega_p, omega_c)
    m2 = _m2_from_vector(x)
    d = _diffusion_from_vector(x, params.gamma, 0.5 * params.gamma, 0.5 * params.gamma)
    tm = t @ m2
    coeffs = (tm[8, 0], tm[8, 1], tm[8, 2], tm[8, 3],
              tm[7, 0], tm[7, 1], tm[7, 2], tm[7, 3])
    return ResponseBundle(m1=m1, t=t, m2=m2, d=d, coeffs=coeffs, v4x9=_noise_rows(t))
