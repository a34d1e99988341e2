"""sparse-afe: adaptive-filter benchmarks for sparse FIR channel estimation.

A small numpy library plus CLI that runs seeded Monte Carlo learning-curve
experiments for four gradient-family adaptive filters (LMS, zero-attracting
LMS, normalized LMS, and the mixed-norm LMS-LMF with fixed or time-varying
mixing) against randomly drawn sparse channels.
"""
from .algorithms import (
    LMS,
    LMMN,
    NLMS,
    ZALMS,
    AlgorithmSpec,
    DivergenceError,
    FilterState,
    initial_state,
    lmmn_step,
    lms_step,
    nlms_step,
    predict_and_error,
    push_regressor,
    step,
    update_mixing_parameter,
    zalms_step,
)
from .harness import (
    STATIONARY,
    TRACKING,
    AlgorithmResult,
    ExperimentConfig,
    ExperimentResult,
    TrialData,
    draw_trial_data,
    resolve_workers,
    run_experiment,
    run_trial,
    table_presets,
)
from .metrics import (
    DB_FLOOR,
    LearningCurve,
    convergence_iteration,
    ensemble_average,
    from_db,
    msd_instant,
    steady_state_msd,
    to_db,
    total_deviation,
)
from .signals import (
    ChannelModel,
    ChannelSchedule,
    SampleStream,
    build_convolution_matrix,
    generate_input_sequence,
    generate_sparse_channel,
    make_tracking_schedule,
    noise_variance_for_snr,
    synthesize_desired,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    "LMS",
    "ZALMS",
    "NLMS",
    "LMMN",
    "AlgorithmSpec",
    "FilterState",
    "DivergenceError",
    "initial_state",
    "push_regressor",
    "predict_and_error",
    "lms_step",
    "zalms_step",
    "nlms_step",
    "lmmn_step",
    "update_mixing_parameter",
    "step",
    "ChannelModel",
    "SampleStream",
    "ChannelSchedule",
    "generate_sparse_channel",
    "generate_input_sequence",
    "noise_variance_for_snr",
    "synthesize_desired",
    "build_convolution_matrix",
    "make_tracking_schedule",
    "trial_rng",
    "DB_FLOOR",
    "LearningCurve",
    "msd_instant",
    "ensemble_average",
    "to_db",
    "from_db",
    "steady_state_msd",
    "convergence_iteration",
    "total_deviation",
    "STATIONARY",
    "TRACKING",
    "ExperimentConfig",
    "TrialData",
    "AlgorithmResult",
    "ExperimentResult",
    "table_presets",
    "draw_trial_data",
    "run_trial",
    "run_experiment",
    "resolve_workers",
    "__version__",
]
