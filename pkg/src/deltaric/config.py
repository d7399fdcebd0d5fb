"""Tolerances and optimizer settings shared by every module."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

CONFIG_ENV_VAR = "DELTARIC_CONFIG"


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iter: int = 10_000
    ftol: float = 1e-12
    seed: int = 0
    workers: int = 1
    # cap on coordinate-pairing enumeration; above it the safety bound is skipped
    max_pairings: int = 200_000
    # Haar frames drawn inside delta_q_ric to fill DeltaReport.oracle_gap; 0 disables
    oracle_samples: int = 0


@dataclass(frozen=True)
class Config:
    tol_sym: float = 1e-12
    tol_tg: float = 1e-10
    tol_min: float = 1e-8
    tol_pu: float = 1e-8
    tol_einstein: float = 1e-8
    tol_eq: float = 1e-8
    tol_cert: float = 1e-6
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def with_overrides(self, **kw) -> "Config":
        """Return a copy with top-level or optimizer fields replaced (None values ignored)."""
        top = {f.name for f in fields(self)} - {"optimizer"}
        opt = {f.name for f in fields(OptimizerConfig)}
        top_kw, opt_kw = {}, {}
        for key, value in kw.items():
            if value is None:
                continue
            if key in top:
                top_kw[key] = value
            elif key in opt:
                opt_kw[key] = value
            else:
                raise KeyError(f"unknown config key {key!r}")
        return replace(self, optimizer=replace(self.optimizer, **opt_kw), **top_kw)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path: str | os.PathLike | None = None) -> Config:
    """Read a JSON config file; falls back to $DELTARIC_CONFIG, then defaults.

    The file may hold top-level tolerance keys and an ``optimizer`` object.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return Config()
    data = json.loads(Path(path).read_text())
    opt = data.pop("optimizer", {}) or {}
    return Config().with_overrides(**data, **opt)
