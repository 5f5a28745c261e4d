from .cohort import DEFAULT_PLANTED, ROUTINE_PLANTED, Cohort, CohortConfig, Patient, generate, planted_beta
from .io import cohort_frame, meta_path, read_cohort_csv, write_cohort_csv
from .sampling import make_training_set, split, windows_dataset

__all__ = [
    "DEFAULT_PLANTED",
    "Cohort",
    "CohortConfig",
    "Patient",
    "ROUTINE_PLANTED",
    "cohort_frame",
    "generate",
    "make_training_set",
    "meta_path",
    "planted_beta",
    "read_cohort_csv",
    "split",
    "windows_dataset",
    "write_cohort_csv",
]
