#!/usr/bin/env python3
"""
Machine-readable run reports

Complex numbers are stored as [re, im] pairs and rationals as "p/q" strings.
"""
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from .config import RunConfig
from .models import CriticalPoint
from ..common.exceptions import ConfigError
from ..common.numeric_utils import complex_pair, format_fraction

ComplexPair = Tuple[float, float]


def pairs(values: Iterable[Any]) -> List[ComplexPair]:
    return [complex_pair(v) for v in values]


def finite(value: Optional[float]) -> Optional[float]:
    """None for missing or non-finite values (JSON has no NaN)"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def polynomial_record(poly: Any) -> List[Union[str, ComplexPair]]:
    """Ascending coefficients, "p/q" for exact polynomials"""
    if poly is None:
        return []
    if poly.exact:
        return [format_fraction(Fraction(c)) for c in poly.coeffs]
    return pairs(poly.coeffs)


class CountRecord(BaseModel):
    """Exact counts for (m, k)"""
    w: int
    d: int
    sharp: int
    regime: str
    expected: int
    dual_k: int
    dim_sing: int
    good_pair: bool
    admissible_sequences: Optional[int] = None
    univalued_equations: int
    nondegenerate_spaces: Optional[int] = None


class OrbitRecord(BaseModel):
    """One critical orbit"""
    t: List[ComplexPair]
    lam: List[ComplexPair]
    lam_exact: Optional[List[str]] = None
    residual: Optional[float] = None
    hessian_det: Optional[ComplexPair] = None
    hessian_cond: Optional[float] = None

    @classmethod
    def of(cls, point: CriticalPoint, lam_exact: Optional[List[Fraction]] = None) -> "OrbitRecord":
        return cls(
            t=pairs(point.t),
            lam=pairs(point.lam),
            lam_exact=[format_fraction(v) for v in lam_exact] if lam_exact is not None else None,
            residual=finite(point.residual_norm),
            hessian_det=complex_pair(point.hessian_det) if point.hessian_det is not None else None,
            hessian_cond=finite(point.hessian_cond),
        )

    def point(self) -> CriticalPoint:
        return CriticalPoint(
            t=tuple(complex(re, im) for re, im in self.t),
            lam=tuple(complex(re, im) for re, im in self.lam),
            residual_norm=self.residual,
            hessian_det=complex(*self.hessian_det) if self.hessian_det is not None else None,
            hessian_cond=self.hessian_cond,
        )


class FuchsianRecord(BaseModel):
    """Associated equation and solution space of one orbit"""
    orbit: int
    exact: bool
    F: List[Union[str, ComplexPair]] = Field(default_factory=list)
    G: List[Union[str, ComplexPair]] = Field(default_factory=list)
    H: List[Union[str, ComplexPair]] = Field(default_factory=list)
    u1: List[Union[str, ComplexPair]] = Field(default_factory=list)
    u2: List[Union[str, ComplexPair]] = Field(default_factory=list)
    exponents_ok: bool = False
    wronskian_error: Optional[float] = None
    dual_roots: Optional[List[ComplexPair]] = None
    dual_residual: Optional[float] = None
    nondegenerate: Optional[bool] = None
    passed: bool = False
    reason: str = ""


class BetheRecord(BaseModel):
    """Bethe vector checks of one orbit"""
    orbit: int
    e_residual: float
    eigenvalues: List[ComplexPair]
    eigen_residuals: List[float]
    eigen_sum_gap: Optional[float] = None
    shapovalov_norm: ComplexPair
    hessian_det: ComplexPair
    norm_identity_error: Optional[float] = None
    degenerate: bool = False
    passed: bool = False


class LineRecord(BaseModel):
    """One critical line in lambda-space"""
    base: List[ComplexPair]
    direction: List[ComplexPair]
    source_t: Optional[List[ComplexPair]] = None
    H: List[Union[str, ComplexPair]] = Field(default_factory=list)
    sample_residual: Optional[float] = None


class BasisRecord(BaseModel):
    """Bethe vectors in singular-vector coordinates"""
    determinant: ComplexPair
    column_norm_product: float
    is_basis: bool


class RunReport(BaseModel):
    """Everything one command computed"""
    command: str
    config: RunConfig
    config_hash: str
    m: List[int]
    k: int
    z: List[ComplexPair]
    regime: str
    expected: int
    found: int
    counts: Optional[CountRecord] = None
    orbits: List[OrbitRecord] = Field(default_factory=list)
    fuchsian: List[FuchsianRecord] = Field(default_factory=list)
    bethe: List[BetheRecord] = Field(default_factory=list)
    lines: List[LineRecord] = Field(default_factory=list)
    intersecting_lines: int = 0
    basis: Optional[BasisRecord] = None
    genericity_flags: List[str] = Field(default_factory=list)
    seeds_used: int = 0
    seeds_failed: int = 0
    multistart_added: int = 0
    passed: bool = False
    exit_code: int = 0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def save(self, path: Union[str, Path]) -> None:
        """Write the report as UTF-8 JSON"""
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunReport":
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise ConfigError(f"Cannot load report {path}: {e}") from e

    def check_fresh(self, config: Optional[RunConfig] = None) -> None:
        """
        Raise ConfigError when the report does not belong to its (or the given) config

        Args:
            config: Current configuration to compare against
        """
        if self.config.config_hash() != self.config_hash:
            raise ConfigError("Stale report: stored hash does not match the stored config")
        if config is not None and config.config_hash() != self.config_hash:
            raise ConfigError("Stale report: config hash mismatch")

    def critical_points(self) -> List[CriticalPoint]:
        return [record.point() for record in self.orbits]
