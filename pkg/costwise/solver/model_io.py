from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import ValidationError

from ..errors import DataError
from ..regularizer.index import ExtendedIndex
from ..regularizer.model import ExtendedModel
from ..schemas import ModelFile
from .config import FitConfig
from .dataset import Standardizer

logger = logging.getLogger("costwise.solver")

MODEL_FORMAT = 1


@dataclass
class SavedModel:
    model: ExtendedModel
    index: ExtendedIndex
    config: FitConfig
    standardizer: Optional[Standardizer] = None
    wait_cap: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)


def model_to_dict(saved: SavedModel) -> Dict[str, Any]:
    m = saved.model
    return {
        "format": MODEL_FORMAT,
        "method": m.method,
        "index": [[f, p] for f, p in saved.index.entries],
        "beta": np.asarray(m.beta, dtype=float).tolist(),
        "intercept": float(m.intercept),
        "support_eps": float(m.support_eps),
        "standardizer": saved.standardizer.to_dict() if saved.standardizer is not None else None,
        "config": saved.config.model_dump(),
        "wait_cap": saved.wait_cap,
        "diagnostics": m.diagnostics,
        "extra": saved.extra,
    }


def save_model(path: Union[str, Path], saved: SavedModel) -> Path:
    p = Path(path)
    p.write_text(json.dumps(model_to_dict(saved), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("[model] saved %s (%d coordinates)", p.name, len(saved.index))
    return p


def load_model(path: Union[str, Path]) -> SavedModel:
    p = Path(path)
    if not p.exists():
        raise DataError(f"model file not found: {p}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"model file {p} is not valid JSON: {e}") from e
    try:
        spec = ModelFile.model_validate(raw)
        config = FitConfig.model_validate(spec.config)
    except ValidationError as e:
        err = e.errors()[0]
        loc = ".".join(str(x) for x in err["loc"]) or "<root>"
        raise DataError(f"model file {p} is malformed: {loc}: {err['msg']}") from e

    index = ExtendedIndex(entries=tuple(spec.index))
    model = ExtendedModel(
        beta=np.asarray(spec.beta, dtype=float),
        intercept=spec.intercept,
        support_eps=spec.support_eps,
        index=index,
        method=spec.method,
        diagnostics=dict(spec.diagnostics),
    )
    std = spec.standardizer
    return SavedModel(
        model=model,
        index=index,
        config=config,
        standardizer=Standardizer.from_dict(std.model_dump()) if std is not None else None,
        wait_cap=spec.wait_cap,
        extra=dict(spec.extra),
    )
