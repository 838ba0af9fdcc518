#!/usr/bin/env python3
"""
Run configuration loading
"""
import hashlib
from pathlib import Path
from typing import Any, List, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .models import ProblemInstance, SolverSettings, Tolerances
from ..common.exceptions import ConfigError, DomainError
from ..common.numeric_utils import to_fraction

Number = Union[int, float, str]

# Minimum pairwise distance of generated configurations
GENERIC_MIN_DISTANCE = 0.1


def generic_configuration(seed: int, n: int) -> List[complex]:
    """
    Points drawn uniformly from [-1, 1]^2 with pairwise distances above 0.1

    Args:
        seed: Generator seed
        n: Number of points

    Returns:
        n complex numbers
    """
    rng = np.random.default_rng(seed)
    points: List[complex] = []
    while len(points) < n:
        candidate = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        if all(abs(candidate - p) > GENERIC_MIN_DISTANCE for p in points):
            points.append(candidate)
    return points


class RunConfig(BaseModel):
    """Problem and solver settings of one run"""
    model_config = ConfigDict(extra="forbid")

    m: List[int] = Field(..., description="Nonnegative integer exponents; zeros are dropped with their z")
    k: int = Field(..., description="Number of variables t")
    z: Union[str, List[Tuple[Number, Number]]] = Field(..., description="[re, im] pairs or 'generic:<seed>'")
    mode: Literal["exact", "float"] = "float"
    tolerances: Tolerances = Field(default_factory=Tolerances)
    seed: int = Field(0, ge=0, description="Master RNG seed")
    s: float = Field(32.0, gt=1.0, description="Homotopy start scale")
    workers: int = Field(1, ge=1)
    multistart: int = Field(0, ge=0, description="Random starts for the top-up (0 = off)")

    @field_validator("m")
    @classmethod
    def _nonnegative(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("m must not be empty")
        if any(v < 0 for v in value):
            raise ValueError(f"m must contain nonnegative integers, got {value}")
        if not any(value):
            raise ValueError("m must have a positive entry")
        return value

    @field_validator("k")
    @classmethod
    def _positive_k(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"k must be a positive integer, got {value}")
        return value

    @field_validator("z")
    @classmethod
    def _generic_token(cls, value: Any) -> Any:
        if isinstance(value, str):
            prefix, _, seed = value.partition(":")
            if prefix != "generic" or not seed.strip().isdigit():
                raise ValueError(f"z must be a list of [re, im] pairs or 'generic:<seed>', got {value!r}")
        return value

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """
        Read a JSON configuration file

        Args:
            path: File path

        Returns:
            Validated RunConfig
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        try:
            config = cls.model_validate_json(text)
        except ValidationError as e:
            raise ConfigError(f"Invalid config {path}: {e}") from e
        config.points()
        return config

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Copy with the given (non-None) fields replaced; tol_* keys go into tolerances"""
        update = {}
        tolerances = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key.startswith("tol_"):
                tolerances[key[4:]] = value
            else:
                update[key] = value
        if tolerances:
            update["tolerances"] = self.tolerances.model_copy(update=tolerances)
        data = self.model_dump()
        data.update({k: v.model_dump() if isinstance(v, BaseModel) else v for k, v in update.items()})
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid override: {e}") from e

    def points(self) -> List[Any]:
        """
        The configuration z as scalars

        Returns:
            Fractions in exact mode, complex numbers otherwise
        """
        if isinstance(self.z, str):
            values: List[Any] = generic_configuration(int(self.z.split(":", 1)[1]), len(self.m))
            if self.mode == "exact":
                raise ConfigError("Exact mode needs an explicit rational real configuration")
            return values
        if len(self.z) != len(self.m):
            raise ConfigError(f"len(z)={len(self.z)} does not match len(m)={len(self.m)}")
        values = []
        for idx, (re, im) in enumerate(self.z):
            try:
                if self.mode == "exact":
                    if to_fraction(im) != 0:
                        raise ConfigError(f"Exact mode needs real z; z_{idx + 1} has imaginary part {im}")
                    values.append(to_fraction(re))
                else:
                    values.append(complex(float(to_fraction(re)), float(to_fraction(im))))
            except DomainError as e:
                raise ConfigError(f"z_{idx + 1}: {e}") from e
        if len(set(values)) != len(values):
            raise ConfigError("Configuration points must be pairwise distinct")
        return values

    def instance(self) -> ProblemInstance:
        """ProblemInstance for (m, k, z)"""
        try:
            return ProblemInstance.create(self.m, self.k, self.points())
        except DomainError as e:
            raise ConfigError(str(e)) from e

    def solver_settings(self) -> SolverSettings:
        return SolverSettings(
            tol_newton=self.tolerances.newton,
            tol_dedup=self.tolerances.dedup,
            tol_line=self.tolerances.line,
            s=self.s,
            workers=self.workers,
            multistart=self.multistart,
            seed=self.seed,
        )

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form"""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()

