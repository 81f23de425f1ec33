"""Bayesian recovery of the initial condition of the heat equation in the
Gaussian white-noise sequence model: conjugate posteriors, credible balls,
intervals and bands, frequentist coverage experiments, and numerical
verification of the series asymptotics behind them.
"""

from .credible import (
    CredibleBall,
    QuadraticForm,
    QuantileEstimate,
    credible_ball,
    frequentist_radius,
    quadratic_form_quantile,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    Mu0Source,
    PanelData,
    PanelSpec,
    emit_figure_data,
    figure_one_panels,
    figure_two_panels,
    figure_three_panels,
    figure_four_panels,
    render_panel,
    run_ball_coverage,
    run_interval_coverage,
    run_risk_curve,
)
from .functionals import (
    FunctionalPosterior,
    InadmissibleFunctionalError,
    LinearFunctional,
    admissible_truncation,
    credible_interval,
    functional_bias,
    functional_posterior,
    pointwise_band,
)
from .posterior import (
    PosteriorSummary,
    RiskDecomposition,
    compute_posterior,
    posterior_draw,
    posterior_mean_function,
    posterior_weights,
    risk_decomposition,
)
from .priors import (
    FunctionalMode,
    PriorFamily,
    PriorSpec,
    ScalingRule,
    prior_variances,
    rate_matched_tau,
)
from .sequence import (
    CoefficientSequence,
    HeatOperator,
    ObservationSet,
    SobolevNorm,
    default_truncation,
    forward_solution,
    heat_eigenvalues,
    simulate_observations,
    sine_basis_eval,
    sobolev_norm,
    true_signal_coefficients,
    true_signal_function,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientSequence",
    "CredibleBall",
    "ExperimentConfig",
    "ExperimentReport",
    "FunctionalMode",
    "FunctionalPosterior",
    "HeatOperator",
    "InadmissibleFunctionalError",
    "LinearFunctional",
    "Mu0Source",
    "ObservationSet",
    "PanelData",
    "PanelSpec",
    "PosteriorSummary",
    "PriorFamily",
    "PriorSpec",
    "QuadraticForm",
    "QuantileEstimate",
    "RiskDecomposition",
    "ScalingRule",
    "SobolevNorm",
    "admissible_truncation",
    "credible_ball",
    "credible_interval",
    "compute_posterior",
    "default_truncation",
    "emit_figure_data",
    "figure_one_panels",
    "figure_two_panels",
    "figure_three_panels",
    "figure_four_panels",
    "forward_solution",
    "frequentist_radius",
    "functional_bias",
    "functional_posterior",
    "heat_eigenvalues",
    "pointwise_band",
    "posterior_draw",
    "posterior_mean_function",
    "posterior_weights",
    "prior_variances",
    "quadratic_form_quantile",
    "rate_matched_tau",
    "render_panel",
    "risk_decomposition",
    "run_ball_coverage",
    "run_interval_coverage",
    "run_risk_curve",
    "simulate_observations",
    "sine_basis_eval",
    "sobolev_norm",
    "true_signal_coefficients",
    "true_signal_function",
]
