"""Shipped hyperparameter presets and best-known cut values."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

from .solver import SolverConfig

__all__ = ["Preset", "PresetError", "load_presets", "get_preset", "BestKnownRegistry"]


class PresetError(KeyError):
    pass


@dataclass(frozen=True)
class Preset:
    """One row of the preset table. ``None`` marks a value the table leaves
    open, a list the values that were scanned."""
    name: str
    algo: str
    p: Any = None
    sweeps: Any = None
    iterations: Any = None
    lam: Any = None
    tau: Any = None
    gamma: Any = None
    eta: Any = None

    def config(self, **overrides) -> SolverConfig:
        """SolverConfig from this preset; ``overrides`` (None values ignored)
        must fill every field the preset leaves open or lists."""
        vals = {
            "algo": self.algo, "p": self.p, "max_sweeps": self.sweeps,
            "iterations": self.iterations, "lam": self.lam, "tau": self.tau,
            "gamma": self.gamma, "eta": self.eta,
        }
        if self.algo == "ils":
            vals["lam"] = 1.0
        vals.update({k: v for k, v in overrides.items() if v is not None})
        needed = {"qiils": ("p", "max_sweeps", "lam"), "ils": ("p", "max_sweeps"),
                  "qiigs": ("p", "max_sweeps", "lam", "tau"), "lqa": ("gamma", "eta"),
                  "gcs": ()}[vals["algo"]]
        missing = [k for k in needed if vals[k] is None or isinstance(vals[k], list)]
        if missing:
            raise PresetError(f"preset {self.name!r} leaves {', '.join(missing)} open; "
                              "pass explicit values")
        if vals["iterations"] is None or isinstance(vals["iterations"], list):
            if vals["algo"] in ("qiils", "qiigs", "ils") and vals.get("sweep_budget") is None:
                raise PresetError(f"preset {self.name!r} fixes no iteration count; "
                                  "pass iterations or a sweep budget")
            vals["iterations"] = 10 ** 9
        clean = {k: v for k, v in vals.items() if v is not None}
        return SolverConfig(**clean)


@lru_cache(maxsize=None)
def load_presets() -> dict[str, Preset]:
    text = resources.files("qiils").joinpath("data/presets.json").read_text()
    out = {}
    for row in json.loads(text)["presets"]:
        row = dict(row)
        row["lam"] = row.pop("lambda", None)
        out[row["name"]] = Preset(**row)
    return out


def get_preset(name: str) -> Preset:
    presets = load_presets()
    if name not in presets:
        raise PresetError(f"unknown preset {name!r}")
    return presets[name]


class BestKnownRegistry:
    """Instance name -> best-known cut. Unknown names give ``None``."""

    def __init__(self, extra: Optional[dict[str, float]] = None):
        text = resources.files("qiils").joinpath("data/best_known.json").read_text()
        self._values = {k: float(v) for k, v in json.loads(text).items()}
        if extra:
            self._values.update({k: float(v) for k, v in extra.items()})

    def get(self, name: Optional[str]) -> Optional[float]:
        if name is None:
            return None
        return self._values.get(name)

    def register(self, name: str, value: float) -> None:
        self._values[name] = float(value)

    def __contains__(self, name) -> bool:
        return name in self._values

    def as_dict(self) -> dict[str, float]:
        return dict(self._values)
