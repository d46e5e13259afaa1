"""Finite-size key rates and channel-estimation planning for Gaussian CV-QKD.

The package is organised bottom-up:

``model``
    parameter containers and the loss/noise algebra of the link
``estimation``
    channel estimators, their analytic variance models, confidence bounds
``keyrate``
    covariance construction, Holevo bound, asymptotic and finite-size rates
``montecarlo``
    sampled transmissions validating the analytic variance models
``optimizer``
    parameter optimization, empirical scaling fits, range limits
``cli``
    command line front end and scenario presets
"""

__version__ = "0.1.0"

from .model import (
    ChannelParams,
    SourceParams,
    ModulationParams,
    ProtocolParams,
    FiberModel,
    SINGLE,
    DOUBLE,
    MODIFIED,
    aggregated_noise_variance,
    aggregated_noise_variance_double,
    distance_to_transmittance,
    transmittance_to_distance,
    excess_noise_from_fiber,
    channel_at_distance,
)
from .estimation import (
    EstimationScheme,
    SampleSet,
    VarianceModel,
    ConfidenceBounds,
    estimate_covariance,
    estimate_T,
    estimate_Veps,
    variance_single,
    variance_double,
    variance_modified_double,
    opt_combine,
    confidence_coefficient,
    confidence_bounds,
    expected_bounds,
    ideal_bounds,
)
from .keyrate import (
    CovarianceMatrix2Mode,
    SymplecticSpectrum,
    KeyRateReport,
    build_eb_covariance,
    symplectic_eigenvalues,
    von_neumann_entropy,
    mutual_information,
    holevo_bound,
    asymptotic_key_rate,
    finite_size_correction,
    finite_key_rate,
    worst_case_corner,
    theoretical_noise_limit,
    theoretical_key_rate_limit,
    veps_up_approx,
)
from .montecarlo import (
    TrialConfig,
    EmpiricalStats,
    ValidationRow,
    simulate_transmission,
    run_trials,
    validate_variance_models,
)
from .optimizer import (
    OptimizationProblem,
    OptimizationResult,
    ExponentialFit,
    PowerLawFit,
    optimize_key_rate,
    evaluate_point,
    fit_power_law,
    fit_exponential_decay,
    optimal_ratio_curve,
    optimal_ratio_zero_crossing,
    fit_exponential_keyrate,
    max_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
