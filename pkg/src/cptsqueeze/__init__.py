"""Squeezed-light generation in a cavity-free CPT medium.

A coherent state propagating through a three-level Lambda ensemble held
near two-photon resonance evolves into a squeezed state; the optical
density plays the role an optical cavity usually does. This package
propagates the mean fields and the linearized quantum-fluctuation
correlations through the medium, optimizes over the drive parameters,
and computes quadrature-noise spectra.
"""

from .analytic import AnalyticFactors, analytic_factors, analytic_optimum
from .bloch import (ResponseBundle, build_diffusion, build_m1, build_m2,
                    response_coefficients, steady_state)
from .correlations import (LocalNoiseMatrices, local_matrices,
                           optimal_variance, output_squeezing,
                           propagate_correlations, quadrature_variance)
from .errors import (CptError, FeatureUndefinedError, NonConvergenceError,
                     ParameterError, SingularSystemError)
from .meanfield import MeanFieldSolution, propagate_mean, transmission
from .optimize import (ScanResult, SweepResult, detuning_setting_compare,
                       optimize_over_detuning, optimize_over_rabi, ratio_scan,
                       sweep_map)
from .params import (AtomicState, CorrelationState, FieldProfile,
                     SpectrumResult, SqueezingResult, SystemParams,
                     split_detuning, to_db, validate_params)
from .spectra import (SpectralMatrices, frequency_response,
                      spectral_local_matrices, spectrum_features,
                      squeezing_spectrum)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFactors", "AtomicState", "CorrelationState", "CptError",
    "FeatureUndefinedError", "FieldProfile", "LocalNoiseMatrices",
    "MeanFieldSolution", "NonConvergenceError", "ParameterError",
    "ResponseBundle", "ScanResult", "SingularSystemError", "SpectralMatrices",
    "SpectrumResult", "SqueezingResult", "SweepResult", "SystemParams",
    "analytic_factors", "analytic_optimum", "build_diffusion", "build_m1",
    "build_m2", "detuning_setting_compare", "frequency_response",
    "local_matrices", "optimal_variance", "optimize_over_detuning",
    "optimize_over_rabi", "output_squeezing", "propagate_correlations",
    "propagate_mean", "quadrature_variance", "ratio_scan",
    "response_coefficients", "spectral_local_matrices", "spectrum_features",
    "split_detuning", "squeezing_spectrum", "steady_state", "sweep_map",
    "to_db", "transmission", "validate_params",
]
