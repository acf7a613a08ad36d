from .boundary import boundary_v1c, classify_hermitian_phase
from .collapse import collapse_cost, scaling_collapse
from .dependencies import get_cache_repository, get_sweep_service
from .repositories import CacheRepository
from .schemas import (
    AveragedRow,
    CollapseFit,
    HermitianPhase,
    Observable,
    ResultRow,
    ResultTable,
    SweepAxis,
    SweepManifest,
    SweepSpec,
    TransitionCriterion,
)
from .services import (
    SweepService,
    default_phi_samples,
    derive_phi,
    evaluate_job,
    evaluate_params,
    job_params,
)
from .transitions import detect_transition

__all__ = [
    "AveragedRow",
    "CacheRepository",
    "CollapseFit",
    "HermitianPhase",
    "Observable",
    "ResultRow",
    "ResultTable",
    "SweepAxis",
    "SweepManifest",
    "SweepService",
    "SweepSpec",
    "TransitionCriterion",
    "boundary_v1c",
    "classify_hermitian_phase",
    "collapse_cost",
    "default_phi_samples",
    "derive_phi",
    "detect_transition",
    "evaluate_job",
    "evaluate_params",
    "get_cache_repository",
    "get_sweep_service",
    "job_params",
    "scaling_collapse",
]
