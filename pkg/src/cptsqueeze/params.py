"""Domain types and parameter validation.

Unit conventions used everywhere in this package:

* the excited-state decay rate Gamma is the rate unit (gamma = 1 by
  default) and all detunings, Rabi frequencies and noise frequencies are
  expressed in units of Gamma;
* the propagation coordinate is the dimensionless xi = z/L in [0, 1], so
  the medium length never appears on its own;
* the optical density alpha is the only place the medium "size" enters.

The single-photon Rabi frequency ``g_norm`` is informational only: with
alpha tied to g^2 N L / (c Gamma), g cancels from every propagated
quantity, so it never enters the numerics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .errors import ParameterError

# Ordering of the steady-state vector x: each entry is a density-matrix
# element sigma_ij of the three-level system (|1>, |2> ground, |3> excited).
STATE_LABELS = (
    "sigma31", "sigma32", "sigma21",
    "sigma11", "sigma22", "sigma33",
    "sigma12", "sigma23", "sigma13",
)

# Index of the adjoint partner of each entry (sigma_ij <-> sigma_ji).
ADJOINT_PERM = (8, 7, 6, 3, 4, 5, 2, 1, 0)

#: Named one-photon detuning splits for a given two-photon detuning delta.
DETUNING_SETTINGS = ("symmetric", "probe-only", "coupling-only")


def split_detuning(setting: str, delta: float) -> tuple[float, float]:
    """Return (delta_p, delta_c) for a named detuning setting."""
    if setting == "symmetric":
        dp = 0.5 * delta
    elif setting == "probe-only":
        dp = delta
    elif setting == "coupling-only":
        dp = 0.0
    else:
        raise ParameterError(
            f"unknown detuning setting {setting!r}; expected one of {DETUNING_SETTINGS}"
        )
    return dp, dp - delta


@dataclass(frozen=True)
class SystemParams:
    """Physical configuration of one propagation problem.

    All rates are in units of gamma (the excited-state decay rate), which
    defaults to 1 and defines the unit system.
    """

    alpha: float
    delta: float
    delta_p: float
    delta_c: float
    omega_p0: complex
    omega_c0: complex
    gamma: float = 1.0
    gamma12: float = 0.0
    lc: float = 0.0
    xi_steps: int = 2000
    g_norm: Optional[float] = None

    def __post_init__(self):
        for name in ("alpha", "delta", "delta_p", "delta_c", "gamma", "gamma12", "lc"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        for name in ("omega_p0", "omega_c0"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ParameterError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.alpha < 0:
            raise ParameterError(f"optical density must be >= 0, got {self.alpha}")
        if self.gamma <= 0:
            raise ParameterError(f"gamma must be > 0, got {self.gamma}")
        if self.gamma12 < 0:
            raise ParameterError(f"gamma12 must be >= 0, got {self.gamma12}")
        if self.xi_steps < 2:
            raise ParameterError(f"xi_steps must be >= 2, got {self.xi_steps}")
        if abs(self.delta - (self.delta_p - self.delta_c)) > 1e-12:
            raise ParameterError(
                f"two-photon detuning mismatch: delta={self.delta} but "
                f"delta_p - delta_c = {self.delta_p - self.delta_c}"
            )
        # Normalize so delta == delta_p - delta_c holds exactly.
        object.__setattr__(self, "delta", self.delta_p - self.delta_c)

    @property
    def input_power(self) -> float:
        return abs(self.omega_p0) ** 2 + abs(self.omega_c0) ** 2

    def with_fields(self, omega_p0: complex, omega_c0: complex) -> "SystemParams":
        return replace(self, omega_p0=omega_p0, omega_c0=omega_c0)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "delta_p": self.delta_p,
            "delta_c": self.delta_c,
            "omega_p0": [self.omega_p0.real, self.omega_p0.imag],
            "omega_c0": [self.omega_c0.real, self.omega_c0.imag],
            "gamma": self.gamma,
            "gamma12": self.gamma12,
            "lc": self.lc,
            "xi_steps": self.xi_steps,
            "g_norm": self.g_norm,
        }


_RAW_KEYS = {
    "alpha", "delta", "setting", "delta_p", "delta_c",
    "omega", "omega_p", "omega_c",
    "gamma", "gamma12", "lc", "xi_steps", "g_norm",
}


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def validate_params(raw: Mapping) -> SystemParams:
    """Build a validated SystemParams from a flat parameter record.

    The record must contain ``alpha``, ``delta`` and field amplitudes
    (either a common ``omega`` for both inputs, or ``omega_p``/``omega_c``).
    One-photon detunings come either explicitly (``delta_p``, ``delta_c``)
    or through a named ``setting``; the default is the "symmetric" split
    delta_p = -delta_c = delta/2.
    """
    unknown = set(raw) - _RAW_KEYS
    if unknown:
        raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
    if "alpha" not in raw:
        raise ParameterError("missing required key 'alpha'")
    if "delta" not in raw:
        raise ParameterError("missing required key 'delta'")
    if "omega" in raw:
        if "omega_p" in raw or "omega_c" in raw:
            raise ParameterError("give either 'omega' or 'omega_p'/'omega_c', not both")
        om = _as_complex(raw["omega"])
        omega_p, omega_c = om, om
    elif "omega_p" in raw or "omega_c" in raw:
        omega_p = _as_complex(raw.get("omega_p", 0.0))
        omega_c = _as_complex(raw.get("omega_c", 0.0))
    else:
        raise ParameterError("missing field amplitudes ('omega' or 'omega_p'/'omega_c')")

    delta = float(raw["delta"])
    if "delta_p" in raw or "delta_c" in raw:
        if "setting" in raw:
            raise ParameterError("give either explicit detunings or a 'setting', not both")
        if not ("delta_p" in raw and "delta_c" in raw):
            raise ParameterError("explicit detunings need both 'delta_p' and 'delta_c'")
        dp, dc = float(raw["delta_p"]), float(raw["delta_c"])
    else:
        dp, dc = split_detuning(raw.get("setting", "symmetric"), delta)

    kwargs = {}
    for key in ("gamma", "gamma12", "lc"):
        if key in raw:
            kwargs[key] = float(raw[key])
    if "xi_steps" in raw:
        kwargs["xi_steps"] = int(raw["xi_steps"])
    if "g_norm" in raw and raw["g_norm"] is not None:
        kwargs["g_norm"] = float(raw["g_norm"])

    return SystemParams(
        alpha=float(raw["alpha"]), delta=delta, delta_p=dp, delta_c=dc,
        omega_p0=omega_p, omega_c0=omega_c, **kwargs,
    )


@dataclass(frozen=True)
class AtomicState:
    """Steady-state density-matrix vector, ordered as in STATE_LABELS."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        if x.shape != (9,):
            raise ParameterError(f"atomic state must have 9 entries, got shape {x.shape}")
        object.__setattr__(self, "x", x)

    @property
    def rho(self) -> np.ndarray:
        """The reconstructed 3x3 density matrix."""
        x = self.x
        return np.array([
            [x[3], x[6], x[8]],
            [x[2], x[4], x[7]],
            [x[0], x[1], x[5]],
        ])

    def validate(self, tol: float = 1e-10, psd_tol: float = 1e-9) -> None:
        """Raise ParameterError if this is not a physical density matrix."""
        x = self.x
        pops = x[3:6]
        if np.abs(pops.imag).max() > tol:
            raise ParameterError(f"populations not real within {tol}")
        if pops.real.min() < -tol or pops.real.max() > 1 + tol:
            raise ParameterError("populations outside [0, 1]")
        if abs(pops.real.sum() - 1.0) > tol:
            raise ParameterError("populations do not sum to 1")
        for i, j in ((6, 2), (8, 0), (7, 1)):
            if abs(x[i] - np.conj(x[j])) > tol:
                raise ParameterError(
                    f"conjugation pair broken: {STATE_LABELS[i]} != conj({STATE_LABELS[j]})"
                )
        ev = np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))
        if ev.min() < -psd_tol:
            raise ParameterError(f"density matrix not PSD: min eigenvalue {ev.min():.3e}")


@dataclass(frozen=True)
class FieldProfile:
    """Mean Rabi-frequency envelopes on the dimensionless length grid."""

    xi: np.ndarray
    omega_p: np.ndarray
    omega_c: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        op = np.asarray(self.omega_p, dtype=complex)
        oc = np.asarray(self.omega_c, dtype=complex)
        if not (xi.shape == op.shape == oc.shape) or xi.ndim != 1:
            raise ParameterError("profile arrays must be 1-D and equal length")
        if xi[0] != 0.0 or xi[-1] != 1.0 or np.any(np.diff(xi) <= 0):
            raise ParameterError("xi grid must increase strictly from 0 to 1")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "omega_p", op)
        object.__setattr__(self, "omega_c", oc)


@dataclass(frozen=True)
class CorrelationState:
    """Second moments of the field fluctuations at one position.

    ``c_pp`` is <a_p a_p>, ``n_p`` is <a_p+ a_p>, and likewise for the
    coupling mode; ``c_pc`` is <a_p a_c> and ``x_pc`` is <a_p+ a_c>.
    The remaining second moments follow by conjugation.
    """

    c_pp: complex
    n_p: float
    c_cc: complex
    n_c: float
    c_pc: complex
    x_pc: complex

    def validate(self, tol: float = 1e-10) -> None:
        if self.n_p < -tol or self.n_c < -tol:
            raise ParameterError(
                f"negative occupation moments: n_p={self.n_p}, n_c={self.n_c}"
            )


@dataclass(frozen=True)
class SqueezingResult:
    """Optimal-quadrature output variance with transmissions attached."""

    variance: float
    variance_db: float
    theta_opt: float
    transmission_p: float
    transmission_c: float
    params_echo: SystemParams

    def as_dict(self) -> dict:
        return {
            "variance": self.variance,
            "variance_db": self.variance_db,
            "theta_opt": self.theta_opt,
            "transmission_p": self.transmission_p,
            "transmission_c": self.transmission_c,
        }


@dataclass(frozen=True)
class SpectrumResult:
    """Quadrature-noise spectrum at a fixed quadrature angle."""

    omega: np.ndarray
    s: np.ndarray
    theta_used: float
    bandwidth: Optional[float] = None
    period: Optional[float] = None
    failures: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        s = np.asarray(self.s, dtype=float)
        if w.shape != s.shape or w.ndim != 1:
            raise ParameterError("spectrum arrays must be 1-D and equal length")
        if np.any(np.diff(w) <= 0):
            raise ParameterError("omega grid must be strictly increasing")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "s", s)


def to_db(variance: float) -> float:
    """Variance on the decibel scale; vacuum is 0 dB."""
    return 10.0 * math.log10(variance)
