from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

from ..reduction.form import ThreeLayerForm


@dataclass(frozen=True)
class ExtendedIndex:
    """
    Position of every (feature, way) pair in the extended vector.

    Ordered as the ways of a ThreeLayerForm: features lexicographically, then
    their ways. Ways are 1-based, positions 0-based.
    """

    entries: Tuple[Tuple[str, int], ...]

    @classmethod
    def from_form(cls, form: ThreeLayerForm) -> "ExtendedIndex":
        return cls(entries=tuple((w.feature_id, w.index) for w in form.ways))

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def ranges(self) -> Dict[str, range]:
        out: Dict[str, List[int]] = {}
        for j, (f, _) in enumerate(self.entries):
            out.setdefault(f, []).append(j)
        return {f: range(js[0], js[-1] + 1) for f, js in out.items()}

    @cached_property
    def features(self) -> Tuple[str, ...]:
        return tuple(self.ranges)

    def position(self, feature_id: str, way: int) -> int:
        r = self.ranges[feature_id]
        if not 1 <= way <= len(r):
            raise KeyError(f"{feature_id} has no way {way}")
        return r.start + way - 1
