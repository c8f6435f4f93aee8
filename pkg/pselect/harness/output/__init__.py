from .model_output import ErrorModel, DesignSpec
from .experiment_output import (
    DISTS,
    HIGHDIM_B,
    REFERENCE_DESIGN_SEED,
    ExperimentConfig,
    ExperimentSummary,
    ManyMeansSummary,
)

__all__ = [
    'ErrorModel',
    'DesignSpec',
    'ExperimentConfig',
    'ExperimentSummary',
    'ManyMeansSummary',
    'DISTS',
    'HIGHDIM_B',
    'REFERENCE_DESIGN_SEED',
]
