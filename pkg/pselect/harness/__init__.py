from .output import (
    DISTS,
    HIGHDIM_B,
    REFERENCE_DESIGN_SEED,
    DesignSpec,
    ErrorModel,
    ExperimentConfig,
    ExperimentSummary,
    ManyMeansSummary,
)
from .generator import gen_design, gen_errors, repetition_rng
from .diagnostics import ks_statistic, selection_rates, summarize, support_recovered
from .experiments import (
    EXPERIMENTS,
    ExperimentRunner,
    run_hetero_experiment,
    run_highdim_experiment,
    run_null_experiment,
    run_signal_experiment,
)
from .manymeans import manymeans_pivot, mixture_params, run_manymeans_experiment
from .writer import rebuild_summary, summary_frame, write_experiment, write_manymeans

__all__ = [
    'DISTS',
    'HIGHDIM_B',
    'REFERENCE_DESIGN_SEED',
    'DesignSpec',
    'ErrorModel',
    'ExperimentConfig',
    'ExperimentSummary',
    'ManyMeansSummary',
    'gen_design',
    'gen_errors',
    'repetition_rng',
    'ks_statistic',
    'selection_rates',
    'summarize',
    'support_recovered',
    'EXPERIMENTS',
    'ExperimentRunner',
    'run_hetero_experiment',
    'run_highdim_experiment',
    'run_null_experiment',
    'run_signal_experiment',
    'manymeans_pivot',
    'mixture_params',
    'run_manymeans_experiment',
    'rebuild_summary',
    'summary_frame',
    'write_experiment',
    'write_manymeans',
]
