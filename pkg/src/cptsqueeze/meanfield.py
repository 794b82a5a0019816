"""Mean-field propagation through the medium.

The envelope equations d(omega_p)/dxi = i (gamma alpha / 2) sigma13 and
d(omega_c)/dxi = i (gamma alpha / 2) sigma23 are integrated with
fixed-step classical RK4, re-solving the local Bloch steady state at
every stage point. Fixed stepping keeps results bit-reproducible; the
public entry point verifies convergence by doubling the grid (up to four
times) and returns the finer solution.

All stage-point steady states are cached on the returned solution so the
correlation and spectrum transport can reuse them without re-solving.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import _response
from .errors import NonConvergenceError, ParameterError, SingularSystemError
from .params import AtomicState, FieldProfile, SystemParams

# RK4 stage offsets within one step, as fractions of h.
_STAGE_FRAC = (0.0, 0.5, 0.5, 1.0)


@dataclass(frozen=True)
class MeanFieldSolution:
    """Converged mean-field profile plus the per-stage Bloch cache."""

    params: SystemParams
    profile: FieldProfile
    states: list  # AtomicState at each grid node
    stage_fields: np.ndarray  # (n_steps, 4, 2) complex: (omega_p, omega_c)
    stage_x: np.ndarray  # (n_steps, 4, 9) complex steady states
    stage_t: np.ndarray  # (n_steps, 4, 9, 9) complex response matrices

    @property
    def n_steps(self) -> int:
        return self.stage_fields.shape[0]


def _integrate(params: SystemParams, n: int):
    """One fixed-grid RK4 pass; returns node fields and the stage cache."""
    h = 1.0 / n
    op, oc = params.omega_p0, params.omega_c0
    k_coef = 0.5j * params.gamma * params.alpha

    nodes = np.empty((n + 1, 2), dtype=complex)
    node_x = np.empty((n + 1, 9), dtype=complex)
    stage_fields = np.empty((n, 4, 2), dtype=complex)
    stage_x = np.empty((n, 4, 9), dtype=complex)
    stage_t = np.empty((n, 4, 9, 9), dtype=complex)

    nodes[0] = (op, oc)
    for i in range(n):
        ks = []
        for s, frac in enumerate(_STAGE_FRAC):
            if s == 0:
                opi, oci = op, oc
            else:
                dp, dc = ks[s - 1]
                opi = op + frac * h * dp
                oci = oc + frac * h * dc
            try:
                t, x, _ = _response(params, opi, oci)
            except SingularSystemError as err:
                raise SingularSystemError(
                    f"{err} at xi = {(i + frac) * h:.4f} "
                    f"(|omega_p| = {abs(opi):.3e}, |omega_c| = {abs(oci):.3e})",
                    cond=err.cond, xi=(i + frac) * h,
                ) from None
            stage_fields[i, s] = (opi, oci)
            stage_x[i, s] = x
            stage_t[i, s] = t
            ks.append((k_coef * x[8], k_coef * x[7]))
        node_x[i] = stage_x[i, 0]
        op = op + h / 6.0 * (ks[0][0] + 2 * ks[1][0] + 2 * ks[2][0] + ks[3][0])
        oc = oc + h / 6.0 * (ks[0][1] + 2 * ks[1][1] + 2 * ks[2][1] + ks[3][1])
        nodes[i + 1] = (op, oc)
    _, node_x[n], _ = _response(params, op, oc)
    return nodes, node_x, stage_fields, stage_x, stage_t


def _rel_change(a: complex, b: complex, scale: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-12 * scale)


def propagate_mean(params: SystemParams, *, rel_tol: float = 1e-6,
                   max_doublings: int = 4) -> MeanFieldSolution:
    """Propagate the mean envelopes across xi in [0, 1].

    Starts from ``params.xi_steps`` grid steps and doubles the grid until
    the output fields change by less than ``rel_tol`` relative, returning
    the finer solution. Raises NonConvergenceError if four doublings are
    not enough, and SingularSystemError if the fields are absorbed to
    numerical zero inside the medium.
    """
    if params.input_power <= 0.0 and params.gamma12 <= 0.0:
        raise ParameterError(
            "propagation needs a nonzero input field (|omega_p0|^2 + |omega_c0|^2 > 0)"
        )
    scale = max(abs(params.omega_p0), abs(params.omega_c0))

    n = params.xi_steps
    coarse = _integrate(params, n)
    for _ in range(max_doublings):
        n *= 2
        fine = _integrate(params, n)
        dp = _rel_change(coarse[0][-1, 0], fine[0][-1, 0], scale)
        dc = _rel_change(coarse[0][-1, 1], fine[0][-1, 1], scale)
        if max(dp, dc) < rel_tol:
            nodes, node_x, stage_fields, stage_x, stage_t = fine
            profile = FieldProfile(
                xi=np.linspace(0.0, 1.0, n + 1),
                omega_p=nodes[:, 0], omega_c=nodes[:, 1],
            )
            states = [AtomicState(node_x[i]) for i in range(n + 1)]
            return MeanFieldSolution(
                params=params, profile=profile, states=states,
                stage_fields=stage_fields, stage_x=stage_x, stage_t=stage_t,
            )
        coarse = fine
    raise NonConvergenceError(
        f"mean-field grid refinement did not converge after {max_doublings} "
        f"doublings (last grid {n} steps)"
    )


def transmission(profile: FieldProfile) -> tuple[float, float]:
    """Output/input intensity ratios (T_p, T_c).

    T_c is defined as 1 for a zero coupling input; a zero probe input has
    no defined probe transmission and raises ParameterError.
    """
    p0 = abs(profile.omega_p[0])
    c0 = abs(profile.omega_c[0])
    if p0 == 0.0:
        raise ParameterError("probe input is zero; probe transmission undefined")
    t_p = abs(profile.omega_p[-1]) ** 2 / p0 ** 2
    t_c = 1.0 if c0 == 0.0 else abs(profile.omega_c[-1]) ** 2 / c0 ** 2
    return t_p, t_c
