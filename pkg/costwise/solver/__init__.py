from .admm import fit_group
from .config import FitConfig
from .dataset import Dataset, Standardizer, extend_dataset, extend_design, extended_names
from .fista import fit_l1, fit_scaled_l1
from .loss import logistic_loss, logistic_loss_grad
from .model_io import SavedModel, load_model, model_to_dict, save_model
from .prox import project_l1, prox_linf, soft_threshold
from .registry import FitMethod, FitProblem, get_method, get_registry, register

__all__ = [
    "Dataset",
    "FitConfig",
    "FitMethod",
    "FitProblem",
    "SavedModel",
    "Standardizer",
    "extend_dataset",
    "extend_design",
    "extended_names",
    "fit_group",
    "fit_l1",
    "fit_scaled_l1",
    "get_method",
    "get_registry",
    "load_model",
    "logistic_loss",
    "logistic_loss_grad",
    "model_to_dict",
    "project_l1",
    "prox_linf",
    "register",
    "save_model",
    "soft_threshold",
]
