"""JSON model configuration files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .correlations import OptimizerConfig
from .linalg import is_unitary
from .measurement import MeasurementModel

MAX_TRIPARTITE_DIM = 64


class ConfigError(ValueError):
    pass


ComplexPair = tuple[float, float]


class OptimizerSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    restarts: int = Field(4, ge=1)
    max_iters: int = Field(2000, ge=1)
    tol: float = Field(1e-7, gt=0)
    seed: int = Field(0, ge=0)
    outcomes: Optional[int] = Field(None, ge=1)

    def build(self) -> OptimizerConfig:
        return OptimizerConfig(self.restarts, self.max_iters, self.tol, self.seed, self.outcomes)


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    system_amplitudes: list[ComplexPair]
    apparatus_spectrum: list[float]
    apparatus_dim: int = Field(ge=1)
    apparatus_basis: Optional[list[list[ComplexPair]]] = None
    interaction: Literal["shift"] = "shift"
    optimizer: OptimizerSection = OptimizerSection()

    @field_validator("system_amplitudes")
    @classmethod
    def _normalized(cls, v):
        if not v:
            raise ValueError("at least one amplitude is required")
        norm2 = sum(re * re + im * im for re, im in v)
        if abs(norm2 - 1.0) > 1e-10:
            raise ValueError(f"squared norm is {norm2:.12g}, expected 1")
        return v

    @field_validator("apparatus_spectrum")
    @classmethod
    def _probability(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("entries must be nonnegative")
        if abs(sum(v) - 1.0) > 1e-10:
            raise ValueError(f"entries sum to {sum(v):.12g}, expected 1")
        return v

    @model_validator(mode="after")
    def _shapes(self):
        n = self.apparatus_dim
        if len(self.apparatus_spectrum) != n:
            raise ValueError(f"apparatus_spectrum: expected {n} entries, got {len(self.apparatus_spectrum)}")
        if len(self.system_amplitudes) > n:
            raise ValueError("apparatus_dim: must be at least the number of system_amplitudes")
        if n * n * len(self.system_amplitudes) > MAX_TRIPARTITE_DIM:
            raise ValueError(
                f"apparatus_dim: environment-apparatus-system dimension exceeds {MAX_TRIPARTITE_DIM}"
            )
        if self.apparatus_basis is not None:
            b = _complex_matrix(self.apparatus_basis)
            if b.shape != (n, n) or not is_unitary(b, 1e-10):
                raise ValueError("apparatus_basis: must be an N x N unitary matrix")
        return self

    def build(self) -> tuple[MeasurementModel, OptimizerConfig]:
        a = np.array([complex(re, im) for re, im in self.system_amplitudes])
        basis = None if self.apparatus_basis is None else _complex_matrix(self.apparatus_basis)
        model = MeasurementModel(a, np.array(self.apparatus_spectrum), basis, self.interaction)
        return model, self.optimizer.build()


def _complex_matrix(rows) -> np.ndarray:
    try:
        return np.array([[complex(re, im) for re, im in row] for row in rows])
    except (TypeError, ValueError):
        return np.zeros((0, 0))


def parse_config(data: dict) -> ModelConfig:
    try:
        return ModelConfig.model_validate(data)
    except ValidationError as exc:
        messages = []
        for err in exc.errors():
            loc = ".".join(str(part) for part in err["loc"])
            msg = err["msg"].removeprefix("Value error, ")
            messages.append(f"{loc}: {msg}" if loc else msg)
        raise ConfigError("; ".join(messages)) from None


def load_config(path: str | Path) -> ModelConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return parse_config(data)
