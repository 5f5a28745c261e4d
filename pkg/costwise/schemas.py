# costwise/schemas.py
"""
Wire format of a circuit file (JSON object).

    {
      "version": 1,
      "layers": ["feature", "measurement", "test", "activity"],
      "selection_layer": 3,
      "channels": [{"name": "financial", "anchor_layer": 3, "aggregation": "SUM", "unit": "$"}, ...],
      "nodes": [{"id": "bmp", "layer": 3, "gate": "AND", "children": ["a_blood"],
                 "costs": {"financial": 25}, "wait_minutes": 50}, ...]
    }

Layers are numbered from 1 (outputs) to len(layers) (inputs). A child may sit
more than one layer deeper in the file; the loader inserts pass-through nodes.
Only types are checked here; semantic rules live in `circuit.validate`.
The saved-model format (ModelFile) lives here too.
"""
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

SCHEMA_VERSION = 1


class NodeIn(BaseModel):
    id: str
    layer: int
    gate: Literal["AND", "OR", "NOT", "INPUT"]
    children: List[str] = Field(default_factory=list)
    costs: Dict[str, float] = Field(default_factory=dict)
    wait_minutes: Optional[float] = None


class ChannelIn(BaseModel):
    name: str
    anchor_layer: int
    aggregation: Literal["SUM", "MAX"]
    unit: str = ""


class CircuitFile(BaseModel):
    version: int = SCHEMA_VERSION
    layers: List[str]
    nodes: List[NodeIn]
    channels: List[ChannelIn] = Field(default_factory=list)
    selection_layer: int


class StandardizerIn(BaseModel):
    mean: List[float]
    scale: List[float]


class ModelFile(BaseModel):
    """Saved model (`fit -o model.json`); `index` lists (feature, way position) per coefficient."""

    format: Literal[1] = 1
    method: str = "group"
    index: List[Tuple[str, int]]
    beta: List[float]
    intercept: float
    support_eps: float
    standardizer: Optional[StandardizerIn] = None
    config: Dict[str, Any]
    wait_cap: Optional[float] = None
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    extra: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_coefficient_per_entry(self) -> "ModelFile":
        if len(self.beta) != len(self.index):
            raise ValueError(f"{len(self.beta)} coefficients for {len(self.index)} index entries")
        if self.standardizer is not None and len(self.standardizer.mean) != len(self.standardizer.scale):
            raise ValueError("standardizer mean and scale differ in length")
        return self


class CohortMeta(BaseModel):
    """Sidecar of a cohort CSV (`cohort.csv` -> `cohort.meta.json`)."""

    format: Literal[1] = 1
    horizon: int = Field(gt=0)
    seed: Optional[int] = None
    noise: Optional[float] = None
    beta_star: Dict[str, float] = Field(default_factory=dict)
    feature_names: List[str] = Field(default_factory=list)
