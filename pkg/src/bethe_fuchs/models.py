"""
Domain models
"""
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..common.exceptions import DomainError
from ..common.numeric_utils import (
    ARRANGEMENT_MARGIN,
    DEDUP_TOL,
    DIVISION_TOL,
    LINE_TOL,
    NEWTON_TOL,
    VERIFY_TOL,
    all_exact,
    closest_pair,
    require_distinct,
    to_fraction,
)

WeightIndex = Tuple[int, ...]


class ExponentVector(BaseModel):
    """Exponents m = (m_1, ..., m_n), highest weights of the tensor factors"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: Tuple[Fraction, ...] = Field(..., description="Rational exponents")

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> Tuple[Fraction, ...]:
        if isinstance(value, (str, bytes)) or not isinstance(value, Sequence):
            raise DomainError(f"Exponents must be a sequence, got {value!r}")
        if len(value) < 1:
            raise DomainError("Exponent vector must have n >= 1 entries")
        return tuple(to_fraction(v) for v in value)

    @classmethod
    def of(cls, values: "Sequence[Any] | ExponentVector") -> "ExponentVector":
        """Build from any sequence of rationals (or pass through)"""
        if isinstance(values, ExponentVector):
            return values
        return cls(entries=tuple(values))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> Fraction:
        """l(m) = m_1 + ... + m_n"""
        return sum(self.entries, Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    @property
    def is_nonnegative_integral(self) -> bool:
        return self.is_integral and all(e >= 0 for e in self.entries)

    def ints(self) -> Tuple[int, ...]:
        """Entries as ints (integral vectors only)"""
        if not self.is_integral:
            raise DomainError(f"Exponents are not integral: {self.display()}")
        return tuple(int(e) for e in self.entries)

    def display(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


class TensorVector(BaseModel):
    """Vector of L_{m_1} (x) ... (x) L_{m_n} in the weight space l(m) - 2k"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: Tuple[int, ...]
    k: int
    coeffs: Dict[WeightIndex, Any] = Field(default_factory=dict, description="f_J v -> scalar")

    @property
    def weight(self) -> int:
        return sum(self.m) - 2 * self.k

    def coefficient(self, index: WeightIndex) -> Any:
        return self.coeffs.get(tuple(index), 0)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs.values())

    def scaled(self, factor: Any) -> "TensorVector":
        return TensorVector(m=self.m, k=self.k, coeffs={j: factor * c for j, c in self.coeffs.items()})

    def __add__(self, other: "TensorVector") -> "TensorVector":
        if other.m != self.m or other.k != self.k:
            raise DomainError("Cannot add vectors from different weight spaces")
        coeffs = dict(self.coeffs)
        for j, c in other.coeffs.items():
            coeffs[j] = coeffs.get(j, 0) + c
        return TensorVector(m=self.m, k=self.k, coeffs={j: c for j, c in coeffs.items() if c != 0})

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scaled(-1)


class GoodPairReport(BaseModel):
    """Result of the good-pair classification"""
    model_config = ConfigDict(frozen=True)

    is_good: bool
    partition: Tuple[int, int, int] = Field(..., description="(a, b, c) block sizes")
    witness: Tuple[int, ...] = Field(default=(), description="Reordering of the original indices")
    reason: str = ""


class Configuration(BaseModel):
    """Pairwise distinct points z_1, ..., z_n"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    z: Tuple[complex, ...]
    exact: Optional[Tuple[Fraction, ...]] = Field(default=None, description="Exact rational copy of z")

    @classmethod
    def of(cls, values: "Sequence[Any] | Configuration") -> "Configuration":
        """Build from scalars; exact when every value is int / Fraction"""
        if isinstance(values, Configuration):
            return values
        values = list(values)
        require_distinct(values)
        exact = tuple(Fraction(v) for v in values) if all_exact(values) else None
        return cls(z=tuple(complex(v) for v in values), exact=exact)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def min_distance(self) -> float:
        return closest_pair(self.z)[0]

    def values(self, exact: bool = False) -> Tuple[Any, ...]:
        """Exact rationals when requested and available, complex otherwise"""
        if exact:
            if self.exact is None:
                raise DomainError("Configuration has no exact rational form")
            return self.exact
        return self.z


class ProblemInstance(BaseModel):
    """The (m, k, z) triple of a master function Phi_{k,n}(t; z, m)"""
    model_config = ConfigDict(frozen=True)

    m: Tuple[int, ...]
    k: int
    config: Configuration

    @classmethod
    def create(cls, m: Sequence[int], k: int, z: "Sequence[Any] | Configuration") -> "ProblemInstance":
        """
        Build an instance, stripping zero exponents together with their z

        Args:
            m: Nonnegative integer exponents
            k: Number of variables t
            z: Configuration (len(z) == len(m))

        Returns:
            ProblemInstance with positive m
        """
        config = Configuration.of(z)
        if len(m) != config.n:
            raise DomainError(f"len(m)={len(m)} does not match len(z)={config.n}")
        if k < 1:
            raise DomainError(f"k must be a positive integer, got {k}")
        keep = []
        for idx, value in enumerate(m):
            if int(value) != value or value < 0:
                raise DomainError(f"Exponent m_{idx + 1}={value} is not a nonnegative integer")
            if value > 0:
                keep.append(idx)
        if not keep:
            raise DomainError("All exponents are zero")
        if len(keep) < len(m):
            exact = config.exact
            config = Configuration(
                z=tuple(config.z[i] for i in keep),
                exact=tuple(exact[i] for i in keep) if exact is not None else None,
            )
        return cls(m=tuple(int(m[i]) for i in keep), k=k, config=config)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def total(self) -> int:
        return sum(self.m)

    @property
    def z(self) -> Tuple[complex, ...]:
        return self.config.z

    def with_k(self, k: int) -> "ProblemInstance":
        return ProblemInstance(m=self.m, k=k, config=self.config)


class CriticalPoint(BaseModel):
    """Canonical representative of an S_k-orbit of critical points"""
    model_config = ConfigDict(frozen=True)

    t: Tuple[complex, ...]
    lam: Tuple[complex, ...] = Field(..., description="Elementary symmetric functions of t")
    residual_norm: Optional[float] = None
    hessian_det: Optional[complex] = None
    hessian_cond: Optional[float] = None

    @property
    def k(self) -> int:
        return len(self.t)


class RegimeKind(str, Enum):
    """The four cases of the l(m) + 1 - k versus k split"""
    ISOLATED_POINTS = "IsolatedPoints"
    NO_CRITICAL_EQUAL_EXPONENTS = "NoCriticalEqualExponents"
    CRITICAL_LINES = "CriticalLines"
    NO_CRITICAL_NEGATIVE_DUAL = "NoCriticalNegativeDual"


class RegimeLabel(BaseModel):
    """Regime of (m, k) and the number of orbits or lines it predicts"""
    model_config = ConfigDict(frozen=True)

    kind: RegimeKind
    expected_count: int
    dual_k: int = Field(..., description="l(m) + 1 - k")


class N2Solution(BaseModel):
    """Closed-form solution of the n = 2 critical point system in lambda-space"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    case: str = Field(..., description="i, ii, iii, iv, or 'none' when no label applies")
    rank: int
    lam: Optional[Tuple[Fraction, ...]] = None
    line_base: Optional[Tuple[Fraction, ...]] = None
    line_direction: Optional[Tuple[Fraction, ...]] = None
    in_arrangement: bool = False
    consistent: bool = Field(True, description="False when the recursion has no solution at all")


class AdmissibleSequence(BaseModel):
    """I = (i_1, ..., i_n) labelling an asymptotic critical point at z^(s)"""
    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...]

    def partial_sums(self, m: Sequence[Any]) -> List[Fraction]:
        """a_l = m_1 + ... + m_{l-1} - 2(i_1 + ... + i_{l-1}) for l = 1..n"""
        sums = []
        acc = Fraction(0)
        for l, i in enumerate(self.indices):
            sums.append(acc)
            acc += to_fraction(m[l]) - 2 * i
        return sums


class SolverSettings(BaseModel):
    """Numerical settings of the critical point solver"""
    model_config = ConfigDict(frozen=True)

    tol_newton: float = NEWTON_TOL
    tol_dedup: float = DEDUP_TOL
    tol_line: float = LINE_TOL
    tol_corrector: float = 1e-9
    margin: float = ARRANGEMENT_MARGIN
    s: float = 32.0
    s_doublings: int = 4
    max_iter: int = 100
    max_polish: int = 40
    detour_retries: int = 6
    initial_step: float = 0.02
    max_step: float = 0.1
    min_step: float = 1e-9
    max_track_steps: int = 20000
    workers: int = 1
    multistart: int = 0
    seed: int = 0


class NewtonResult(BaseModel):
    """Outcome of a damped Newton refinement"""
    model_config = ConfigDict(frozen=True)

    success: bool
    t: Tuple[complex, ...]
    point: Optional[CriticalPoint] = None
    iterations: int = 0
    residual_norm: float = float("inf")
    reason: str = ""


class TrackResult(BaseModel):
    """Outcome of a homotopy path from z_start to z_target"""
    model_config = ConfigDict(frozen=True)

    success: bool
    point: Optional[CriticalPoint] = None
    tau: float = Field(0.0, description="Furthest homotopy parameter reached")
    steps: int = 0
    detours: int = 0
    reason: str = ""


class CriticalLine(BaseModel):
    """Straight line of critical points in lambda-space"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base_lambda: Tuple[complex, ...]
    direction_lambda: Tuple[complex, ...]
    source_orbit: Optional[CriticalPoint] = Field(None, description="Dual critical point (None when l(m)+1-k = 0)")
    equation: Any = Field(None, description="FuchsianEquation whose solutions sweep the line")
    sample_residual: float = Field(0.0, description="Largest residual over sampled points")


class SolveReport(BaseModel):
    """Result of solving for all isolated critical orbits"""
    model_config = ConfigDict(frozen=True)

    regime: RegimeLabel
    orbits: List[CriticalPoint]
    expected: int
    found: int
    genericity_flags: List[str] = Field(default_factory=list)
    seeds_used: int = 0
    seeds_failed: int = 0
    collisions: int = 0
    multistart_added: int = 0


class HamiltonianMatrix(BaseModel):
    """Matrix of H_i(z) on the weight basis"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    i: int = Field(..., description="Site index (0-based)")
    entries: Any = Field(..., description="sympy Matrix (exact) or complex ndarray")
    exact: bool
    basis: Tuple[WeightIndex, ...]


class ExponentTable(BaseModel):
    """Exponents at every singular point of a Fuchsian equation"""
    model_config = ConfigDict(frozen=True)

    finite: List[Tuple[Any, Any]]
    infinity: Tuple[Any, Any]
    fuchs_sum: Any
    fuchs_ok: bool


class FuchsianEquation(BaseModel):
    """F u'' + G u' + H u = 0"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    F: Any
    G: Any
    H: Any
    z: Tuple[Any, ...]
    m: Tuple[int, ...]
    k: int = Field(..., description="Degree of the defining polynomial solution")
    exact: bool = False

    @property
    def n(self) -> int:
        return len(self.m)


class SolutionSpace(BaseModel):
    """Two-dimensional space of polynomial solutions"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u1: Any = Field(..., description="Generic solution, degree k1")
    u2: Any = Field(..., description="Special solution, degree k2")
    wronskian: Any = Field(..., description="Monic W(u1, u2)")
    k1: int
    k2: int
    wronskian_error: float = 0.0
    generic_simple_roots: bool = True


class NondegeneracyReport(BaseModel):
    """Whether a solution space is nondegenerate, with reasons when not"""
    model_config = ConfigDict(frozen=True)

    ok: bool
    reasons: List[str] = Field(default_factory=list)


class BetheVector(BaseModel):
    """v(t0, z) = sum_J A_J(t0, z) f_J v with its eigen-data"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: TensorVector
    source: CriticalPoint
    eigenvalues: Tuple[complex, ...]
    e_residual: float
    eigen_residuals: Tuple[float, ...]
    shapovalov_norm: complex
    passed: bool


class NormIdentityResult(BaseModel):
    """Comparison of S(v, v) with the Hessian determinant of ln Phi"""
    model_config = ConfigDict(frozen=True)

    relative_error: float
    shapovalov_norm: complex
    hessian_det: complex
    degenerate: bool = False


class BasisCheck(BaseModel):
    """Bethe vectors expressed in a basis of singular vectors"""
    model_config = ConfigDict(frozen=True)

    determinant: complex
    column_norm_product: float
    is_basis: bool


class Tolerances(BaseModel):
    """Tolerance overrides"""
    newton: float = NEWTON_TOL
    dedup: float = DEDUP_TOL
    line: float = LINE_TOL
    division: float = DIVISION_TOL
    verify: float = VERIFY_TOL


class RoundTripResult(BaseModel):
    """Fuchsian checks for one critical orbit"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    equation: Any = Field(..., description="Associated FuchsianEquation")
    space: Any = Field(None, description="SolutionSpace when verification succeeded")
    exact: bool = False
    exponents_ok: bool = False
    dual_roots: Optional[Tuple[complex, ...]] = None
    dual_residual: Optional[float] = None
    nondegenerate: Optional[NondegeneracyReport] = None
    passed: bool = False
    reason: str = ""
