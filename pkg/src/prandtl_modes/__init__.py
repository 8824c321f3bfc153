"""Kummer-function quasi-eigenmodes of linearised Prandtl equations."""

from ._backend import BACKEND
from .errors import (
    DegenerateSystem,
    ExcludedParameter,
    InvalidMode,
    InvalidShear,
    MaxDepthExceeded,
    NonConvergent,
    PoleArgument,
    PrandtlModesError,
    SectorViolation,
    SingularPoint,
    UnsupportedMu,
)
from .frames import Frame, ModeSpec, ShearFlow, build_frame, mu_direct
from .specfun import erf_c, erfi_c, gamma_c, kummer_m, kummer_m_prime, pochhammer
from .quadrature import cauchy_derivative, integrate_segment, integrate_segments
from .solutions import (
    psi_mu,
    psi_neg_odd,
    r_series,
    series_coeff,
    tau_criterion,
    upsilon_m1_explicit,
    w_criterion,
    x_tau,
    y_mu,
)
from .modes import (
    CoefficientTriple,
    SampledProfile,
    UpsilonBasis,
    sample_profile,
    solve_boundary_coefficients,
    stream_function,
    stream_function_prime,
    upsilon,
    velocity_field,
)
from .asymptotics import (
    AsymptoticConstants,
    classify_growth,
    criterion_uniqueness_scan,
    kummer_asymptotic,
    upsilon_asymptotic,
)
from .oracle import ResidualReport, check_recurrences, residual, run_suite
from .shearlayer import CriticalPoint, example_flow_critical_point, shear_layer_V, v_sl

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PrandtlModesError",
    "NonConvergent",
    "PoleArgument",
    "SingularPoint",
    "MaxDepthExceeded",
    "InvalidShear",
    "InvalidMode",
    "DegenerateSystem",
    "SectorViolation",
    "ExcludedParameter",
    "UnsupportedMu",
    "ShearFlow",
    "ModeSpec",
    "Frame",
    "build_frame",
    "mu_direct",
    "kummer_m",
    "kummer_m_prime",
    "erf_c",
    "erfi_c",
    "gamma_c",
    "pochhammer",
    "integrate_segment",
    "integrate_segments",
    "cauchy_derivative",
    "x_tau",
    "y_mu",
    "r_series",
    "series_coeff",
    "tau_criterion",
    "w_criterion",
    "psi_mu",
    "psi_neg_odd",
    "upsilon_m1_explicit",
    "CoefficientTriple",
    "UpsilonBasis",
    "SampledProfile",
    "upsilon",
    "solve_boundary_coefficients",
    "stream_function",
    "stream_function_prime",
    "velocity_field",
    "sample_profile",
    "AsymptoticConstants",
    "kummer_asymptotic",
    "upsilon_asymptotic",
    "classify_growth",
    "criterion_uniqueness_scan",
    "ResidualReport",
    "check_recurrences",
    "residual",
    "run_suite",
    "CriticalPoint",
    "shear_layer_V",
    "v_sl",
    "example_flow_critical_point",
]
