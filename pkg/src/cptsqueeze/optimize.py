"""Parameter studies over the full numerical model.

Scans evaluate the complete propagate-then-variance pipeline, so they are
expensive but smooth in the interesting regime. Optimization is a coarse
logarithmic grid followed by golden-section refinement inside the
bracketing cells; if the coarse minimum sits on the grid edge or the
bracket is not unimodal, the best coarse cell is reported instead.

Strongly anti-squeezed cells (very large two-photon detuning at high
optical density) exceed what double precision can represent and are
recorded as failures rather than values; the optimum never lives there.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field

import numpy as np

from .correlations import output_squeezing
from .errors import CptError, NonConvergenceError, ParameterError, SingularSystemError
from .params import (DETUNING_SETTINGS, SqueezingResult, SystemParams,
                     split_detuning, validate_params)

GOLDEN_RATIO_CONJ = (math.sqrt(5.0) - 1.0) / 2.0

#: Default coarse grids: (low, high, points), log-spaced.
RABI_GRID = (0.1, 4.0, 25)
DETUNING_GRID = (1e-4, 0.3, 25)
RABI_TOL = 1e-3
DETUNING_TOL = 1e-5


@dataclass(frozen=True)
class ScanResult:
    """Tabulated 1-D scan with its refined optimum."""

    axis: np.ndarray
    variance: np.ndarray
    t_p: np.ndarray
    t_c: np.ndarray
    x_opt: float
    v_opt: float
    t_p_opt: float
    t_c_opt: float
    bracket: tuple | None
    failures: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CellError:
    """Failure record for one grid cell."""

    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class SweepResult:
    """Dense 2-D map of squeezing results over (omega, delta)."""

    omega_axis: np.ndarray
    delta_axis: np.ndarray
    cells: list  # cells[i][j]: SqueezingResult or CellError at (omega_i, delta_j)


def golden_section(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimize f on [lo, hi] to absolute x-tolerance tol.

    Assumes unimodality on the bracket; on exact ties the smaller
    argument side is kept.
    """
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


def _evaluate(params: SystemParams):
    """(V, Tp, Tc) for one parameter point, or a failure message."""
    try:
        res = output_squeezing(params)
    except (SingularSystemError, NonConvergenceError) as err:
        return None, str(err)
    if not (math.isfinite(res.variance) and res.variance > 0.0):
        return None, f"unphysical variance {res.variance!r}"
    return res, None


def _scan_and_refine(make_params, grid: np.ndarray, tol: float) -> ScanResult:
    variance = np.full(grid.size, np.inf)
    t_p = np.full(grid.size, np.nan)
    t_c = np.full(grid.size, np.nan)
    failures: dict = {}
    for i, value in enumerate(grid):
        res, err = _evaluate(make_params(value))
        if err is not None:
            failures[i] = err
            continue
        variance[i] = res.variance
        t_p[i] = res.transmission_p
        t_c[i] = res.transmission_c
    if not np.isfinite(variance).any():
        raise NonConvergenceError("every grid cell of the scan failed")

    i_best = int(np.argmin(variance))
    x_opt, v_opt = float(grid[i_best]), float(variance[i_best])
    tp_opt, tc_opt = float(t_p[i_best]), float(t_c[i_best])
    bracket = None
    interior = 0 < i_best < grid.size - 1
    if interior and i_best - 1 not in failures and i_best + 1 not in failures:
        lo, hi = float(grid[i_best - 1]), float(grid[i_best + 1])

        def objective(x: float) -> float:
            res, _ = _evaluate(make_params(x))
            return np.inf if res is None else res.variance

        x_ref, v_ref = golden_section(objective, lo, hi, tol)
        if v_ref <= v_opt and math.isfinite(v_ref):
            res, err = _evaluate(make_params(x_ref))
            if err is None:
                x_opt, v_opt = x_ref, res.variance
                tp_opt, tc_opt = res.transmission_p, res.transmission_c
                bracket = (lo, hi)
    return ScanResult(
        axis=grid, variance=variance, t_p=t_p, t_c=t_c,
        x_opt=x_opt, v_opt=v_opt, t_p_opt=tp_opt, t_c_opt=tc_opt,
        bracket=bracket, failures=failures,
    )


def _base_params(alpha: float, delta: float, setting: str,
                 omega_p: complex, omega_c: complex,
                 xi_steps: int | None) -> SystemParams:
    dp, dc = split_detuning(setting, delta)
    kwargs = {} if xi_steps is None else {"xi_steps": xi_steps}
    return SystemParams(alpha=alpha, delta=delta, delta_p=dp, delta_c=dc,
                        omega_p0=omega_p, omega_c0=omega_c, **kwargs)


def optimize_over_rabi(alpha: float, delta: float, setting: str = "symmetric",
                       *, grid: tuple = RABI_GRID, tol: float = RABI_TOL,
                       xi_steps: int | None = None) -> ScanResult:
    """Minimize V over the common input Rabi frequency at fixed delta."""
    if delta == 0.0:
        raise ParameterError(
            "delta = 0 is the exact transparency point: V = 1 at every input "
            "power and no interior optimum exists"
        )
    lo, hi, n = grid
    values = np.geomspace(lo, hi, int(n))
    return _scan_and_refine(
        lambda om: _base_params(alpha, delta, setting, om, om, xi_steps),
        values, tol,
    )


def optimize_over_detuning(alpha: float, omega: float, setting: str = "symmetric",
                           *, grid: tuple = DETUNING_GRID, tol: float = DETUNING_TOL,
                           xi_steps: int | None = None) -> ScanResult:
    """Minimize V over the two-photon detuning at fixed input power."""
    if not omega > 0:
        raise ParameterError("optimize_over_detuning needs omega > 0")
    lo, hi, n = grid
    values = np.geomspace(lo, hi, int(n))
    return _scan_and_refine(
        lambda de: _base_params(alpha, de, setting, omega, omega, xi_steps),
        values, tol,
    )


def _sweep_cell(args):
    alpha, om, de, setting, xi_steps = args
    try:
        params = _base_params(alpha, de, setting, om, om, xi_steps)
        res, err = _evaluate(params)
    except CptError as exc:
        return CellError(str(exc))
    return res if err is None else CellError(err)


def sweep_map(alpha: float, omega_range, delta_range, resolution: int,
              setting: str = "symmetric", *, xi_steps: int | None = None,
              workers: int = 1) -> SweepResult:
    """Dense rectangular (omega, delta) map of squeezing results.

    Cell evaluations are independent; failures are recorded per cell and
    never abort the sweep. ``workers > 1`` distributes cells over
    processes; the result is identical either way.
    """
    if resolution < 2:
        raise ParameterError("resolution must be >= 2")
    omegas = np.geomspace(*omega_range, int(resolution))
    deltas = np.geomspace(*delta_range, int(resolution))
    jobs = [(alpha, om, de, setting, xi_steps) for om in omegas for de in deltas]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_sweep_cell, jobs, chunksize=4))
    else:
        flat = [_sweep_cell(job) for job in jobs]
    cells = [flat[i * len(deltas):(i + 1) * len(deltas)] for i in range(len(omegas))]
    return SweepResult(omega_axis=omegas, delta_axis=deltas, cells=cells)


def ratio_scan(alpha: float, omega_c: float, ratios,
               delta_range: tuple = DETUNING_GRID, *,
               tol: float = DETUNING_TOL,
               xi_steps: int | None = None) -> dict:
    """Best V over delta for each probe/coupling amplitude ratio.

    The probe input is r * omega_c; detunings follow the symmetric split.
    Returns {ratio: ScanResult}.
    """
    lo, hi, n = delta_range
    values = np.geomspace(lo, hi, int(n))
    out = {}
    for r in ratios:
        if r <= 0:
            raise ParameterError("ratios must be positive")
        out[float(r)] = _scan_and_refine(
            lambda de, r=r: _base_params(alpha, de, "symmetric",
                                         r * omega_c, omega_c, xi_steps),
            values, tol,
        )
    return out


def detuning_setting_compare(alpha: float, omega: float, delta: float, *,
                             grid: tuple = RABI_GRID, tol: float = RABI_TOL,
                             xi_steps: int | None = None) -> dict:
    """Optimized V over the input power for each named detuning setting.

    ``omega`` seeds nothing physical here (the scan covers the whole grid);
    it is kept in the signature for symmetry with the other studies.
    Returns {setting: ScanResult}.
    """
    return {
        setting: optimize_over_rabi(alpha, delta, setting,
                                    grid=grid, tol=tol, xi_steps=xi_steps)
        for setting in DETUNING_SETTINGS
    }
