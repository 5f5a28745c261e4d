from .dnf import feature_dnf, literal_dnf
from .form import ThreeLayerForm, Way, form_to_dict, reduce
from .nnf import to_nnf

__all__ = [
    "ThreeLayerForm",
    "Way",
    "feature_dnf",
    "form_to_dict",
    "literal_dnf",
    "reduce",
    "to_nnf",
]
