"""Mixed continuous/integer/categorical parameter spaces and their encoding
onto the unit hypercube used by the surrogate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from ..errors import OutOfRange

__all__ = ["Continuous", "Integer", "Categorical", "ParamSpace"]

LINEAR = "linear"
LOG10 = "log10"


@dataclass(frozen=True)
class Continuous:
    name: str
    lo: float
    hi: float
    scale: str = LINEAR

    def __post_init__(self):
        _check_bounds(self.name, self.lo, self.hi, self.scale)

    @property
    def width(self) -> int:
        return 1


@dataclass(frozen=True)
class Integer:
    name: str
    lo: int
    hi: int
    scale: str = LINEAR

    def __post_init__(self):
        _check_bounds(self.name, self.lo, self.hi, self.scale)

    @property
    def width(self) -> int:
        return 1


@dataclass(frozen=True)
class Categorical:
    name: str
    choices: tuple

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if len(self.choices) < 2:
            raise ValueError(f"{self.name}: categorical needs >= 2 choices")

    @property
    def width(self) -> int:
        return len(self.choices)


Dimension = Union[Continuous, Integer, Categorical]


def _check_bounds(name: str, lo, hi, scale: str) -> None:
    if lo >= hi:
        raise ValueError(f"{name}: need lo < hi, got [{lo}, {hi}]")
    if scale not in (LINEAR, LOG10):
        raise ValueError(f"{name}: unknown scale {scale!r}")
    if scale == LOG10 and lo <= 0:
        raise ValueError(f"{name}: log10 scale needs lo > 0")


def _to_unit(value: float, lo: float, hi: float, scale: str) -> float:
    if scale == LOG10:
        return (math.log10(value) - math.log10(lo)) / (math.log10(hi) - math.log10(lo))
    return (value - lo) / (hi - lo)


def _from_unit(u: float, lo: float, hi: float, scale: str) -> float:
    u = min(max(u, 0.0), 1.0)
    if scale == LOG10:
        return 10.0 ** (math.log10(lo) + u * (math.log10(hi) - math.log10(lo)))
    return lo + u * (hi - lo)


@dataclass(frozen=True)
class ParamSpace:
    """Ordered list of dimensions; encoded width counts one-hot blocks."""

    dimensions: tuple

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise ValueError("duplicate dimension names")

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.dimensions]

    @property
    def encoded_dim(self) -> int:
        return sum(d.width for d in self.dimensions)

    def encode(self, assignment: dict[str, Any]) -> np.ndarray:
        """Map a concrete assignment into [0, 1]^D."""
        out = np.empty(self.encoded_dim)
        pos = 0
        for dim in self.dimensions:
            if dim.name not in assignment:
                raise OutOfRange(f"missing parameter {dim.name!r}")
            value = assignment[dim.name]
            if isinstance(dim, Categorical):
                if value not in dim.choices:
                    raise OutOfRange(f"{dim.name}: {value!r} not in {dim.choices}")
                block = np.zeros(dim.width)
                block[dim.choices.index(value)] = 1.0
                out[pos : pos + dim.width] = block
            else:
                v = float(value)
                if not (dim.lo <= v <= dim.hi):
                    raise OutOfRange(f"{dim.name}: {v} outside [{dim.lo}, {dim.hi}]")
                out[pos] = _to_unit(v, dim.lo, dim.hi, dim.scale)
            pos += dim.width
        return out

    def decode(self, x: np.ndarray) -> dict[str, Any]:
        """Inverse of encode: integers round, categoricals take the argmax."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.encoded_dim,):
            raise OutOfRange(f"encoded vector must have length {self.encoded_dim}")
        out: dict[str, Any] = {}
        pos = 0
        for dim in self.dimensions:
            if isinstance(dim, Categorical):
                out[dim.name] = dim.choices[int(np.argmax(x[pos : pos + dim.width]))]
            elif isinstance(dim, Integer):
                v = _from_unit(float(x[pos]), dim.lo, dim.hi, dim.scale)
                out[dim.name] = int(min(max(int(np.floor(v + 0.5)), dim.lo), dim.hi))
            else:
                out[dim.name] = _from_unit(float(x[pos]), dim.lo, dim.hi, dim.scale)
            pos += dim.width
        return out

    def contains(self, assignment: dict[str, Any]) -> bool:
        try:
            self.encode(assignment)
            return True
        except OutOfRange:
            return False

    # --- JSON config form -------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        out = []
        for dim in self.dimensions:
            if isinstance(dim, Categorical):
                out.append({"name": dim.name, "type": "categorical", "choices": list(dim.choices)})
            elif isinstance(dim, Integer):
                out.append(
                    {"name": dim.name, "type": "integer", "lo": dim.lo, "hi": dim.hi, "scale": dim.scale}
                )
            else:
                out.append(
                    {"name": dim.name, "type": "continuous", "lo": dim.lo, "hi": dim.hi, "scale": dim.scale}
                )
        return out

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "ParamSpace":
        dims: list[Dimension] = []
        for spec in obj:
            kind = spec.get("type")
            if kind == "categorical":
                dims.append(Categorical(spec["name"], tuple(spec["choices"])))
            elif kind == "integer":
                dims.append(
                    Integer(spec["name"], int(spec["lo"]), int(spec["hi"]), spec.get("scale", LINEAR))
                )
            elif kind == "continuous":
                dims.append(
                    Continuous(spec["name"], float(spec["lo"]), float(spec["hi"]), spec.get("scale", LINEAR))
                )
            else:
                raise ValueError(f"unknown dimension type {kind!r}")
        return cls(tuple(dims))
