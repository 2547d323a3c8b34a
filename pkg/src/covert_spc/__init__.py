"""Covert, reliable short-packet transmission against a detect-and-jam warder."""

from .covertness import (
    CovertnessReport,
    QuadratureConfig,
    avg_detection_error_approx,
    avg_detection_error_quadrature,
    avg_kl_lower_bound,
    covertness_report,
    detection_error_prob,
    kl_lower_bound,
    optimal_threshold,
    xi_lower_approx,
)
from .model import (
    ChannelRealization,
    Constraints,
    SystemParams,
    TransmissionConfig,
    load_scenario,
    sample_channels,
    willie_noise_floor,
)
from .optimizer import (
    InnerSolution,
    OptimizationResult,
    effective_throughput,
    optimize,
    solve_covert_power,
    solve_rate,
)
from .reliability import (
    avg_decoding_error,
    avg_decoding_error_passive,
    decoding_error_prob,
    snr_pdf,
)
from .simulator import SimConfig, SimEstimate, simulate
from .specfun import exp_integral_e1, q_function, reg_lower_gamma

__version__ = "0.1.0"
