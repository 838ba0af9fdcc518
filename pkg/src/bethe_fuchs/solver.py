#!/usr/bin/env python3
"""
Critical point solver

Seeds come from admissible sequences at z^(s) = (s, s^2, ..., s^n); each seed is
refined by Newton's method and tracked to the target configuration.
"""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from .fuchsian import associated_equation, build_fg, recognize_rational, verify_all_polynomial
from .master_function import (
    arrangement_gap,
    canonical_orbit,
    classify_regime,
    dedup_orbits,
    hessian_at,
    n2_seed_roots,
    orbit_sort_key,
    relative_residual,
    residual_at,
    residual_z_derivative,
    roots_from_lambda,
    same_orbit,
)
from .models import (
    AdmissibleSequence,
    CriticalLine,
    CriticalPoint,
    FuchsianEquation,
    NewtonResult,
    ProblemInstance,
    RegimeKind,
    SolveReport,
    SolverSettings,
    TrackResult,
)
from .polynomial import Polynomial
from .representation import classify_good_pair
from ..common.console_utils import log
from ..common.exceptions import DomainError, RegimeError, VerificationError
from ..common.numeric_utils import ARRANGEMENT_MARGIN, as_complex_array, diameter, to_fraction

# Tracking stops capping steps geometrically once the remaining move is this many target diameters
ENDGAME = 1.0
# A point farther out than this many configuration radii counts as escaping to infinity
ESCAPE_FACTOR = 1e6
# Hessian condition number above which an orbit is reported as near-degenerate
DEGENERATE_COND = 1e10
# Relative closeness of two z_l reported as a non-generic configuration
CLOSE_CONFIGURATION = 1e-4
# Multistart accepts only points this far (relatively) from the arrangement
MULTISTART_GAP = 1e-6


def admissible_triple(m1: Any, m2: Any, k: int) -> bool:
    """
    Whether {m1, m2; k} is admissible

    Args:
        m1: Rational exponent
        m2: Rational exponent
        k: Nonnegative integer

    Returns:
        m1 + m2 - 2k >= 0 and k <= m_i for every m_i that is a nonnegative integer
    """
    a, b = to_fraction(m1), to_fraction(m2)
    if k < 0 or a + b - 2 * k < 0:
        return False
    for value in (a, b):
        if value.denominator == 1 and value >= 0 and k > value:
            return False
    return True


def admissible_sequences(m: Sequence[Any], k: int) -> List[AdmissibleSequence]:
    """
    All admissible sequences for a good pair {m, k}

    Args:
        m: Exponents in good-pair order
        k: Number of variables

    Returns:
        Sequences in depth-first order, larger i_l tried first
    """
    report = classify_good_pair(m, k)
    if not report.is_good:
        raise DomainError(f"{{m, k}} is not a good pair: {report.reason}")
    exps = [to_fraction(v) for v in m]
    n = len(exps)
    out: List[AdmissibleSequence] = []

    def walk(level: int, prefix: List[int], a: Fraction, remaining: int) -> None:
        if level == n:
            if remaining == 0:
                out.append(AdmissibleSequence(indices=tuple(prefix)))
            return
        if level == 0:
            walk(1, [0], exps[0], remaining)
            return
        choices = [remaining] if level == n - 1 else range(remaining, -1, -1)
        for i in choices:
            if admissible_triple(a, exps[level], i):
                walk(level + 1, prefix + [i], a + exps[level] - 2 * i, remaining - i)

    walk(0, [], Fraction(0), k)
    return out


def start_configuration(n: int, s: float) -> np.ndarray:
    """z^(s) = (s, s^2, ..., s^n)"""
    return np.asarray([s ** (l + 1) for l in range(n)], dtype=complex)


def seed_point(sequence: AdmissibleSequence, m: Sequence[Any], k: int, s: float) -> np.ndarray:
    """
    Asymptotic critical point at z^(s) for one admissible sequence

    Args:
        sequence: Admissible sequence I
        m: Exponents
        k: Number of variables
        s: Scale (s >> 1)

    Returns:
        k complex coordinates, block l scaled by s^l
    """
    if sum(sequence.indices) != k:
        raise DomainError(f"Sequence {sequence.indices} does not sum to k={k}")
    blocks = []
    for level, (a, i) in enumerate(zip(sequence.partial_sums(m), sequence.indices)):
        if i == 0:
            continue
        blocks.append((s ** (level + 1)) * n2_seed_roots(a, m[level], i))
    if not blocks:
        return np.zeros(0, dtype=complex)
    return np.concatenate(blocks)


class BetheSolver:
    """Finds the critical orbits and critical lines of a master function"""

    def __init__(self, settings: Optional[SolverSettings] = None):
        """
        Initialize the solver

        Args:
            settings: Numerical settings (defaults when omitted)
        """
        self.settings = settings or SolverSettings()

    # Newton

    def _escaped(self, t: np.ndarray, z: np.ndarray) -> bool:
        radius = float(np.max(np.abs(z))) + diameter(list(z)) + 1.0
        return bool(len(t)) and float(np.max(np.abs(t))) > ESCAPE_FACTOR * radius

    def _newton(self, t0: np.ndarray, z: np.ndarray, m: np.ndarray, tol: float,
                max_iter: int) -> Tuple[bool, np.ndarray, int, float, str]:
        margin = self.settings.margin
        t = np.array(t0, dtype=complex)
        if len(t) == 0:
            return True, t, 0, 0.0, ""
        gap, pair = arrangement_gap(t, z)
        if gap <= margin:
            return False, t, 0, float("inf"), f"start point on the arrangement ({pair[0]} ~ {pair[1]})"
        res = relative_residual(t, z, m)
        iterations = 0
        while res > tol:
            if iterations >= max_iter:
                return False, t, iterations, res, f"no convergence in {max_iter} iterations"
            iterations += 1
            r = residual_at(t, z, m)
            try:
                step = np.linalg.solve(hessian_at(t, z, m), -r)
            except np.linalg.LinAlgError:
                return False, t, iterations, res, "singular Hessian"
            norm = float(np.linalg.norm(r))
            damping = 1.0
            accepted = False
            while damping >= 2.0 ** -12:
                trial = t + damping * step
                gap, _ = arrangement_gap(trial, z)
                if gap > margin and np.all(np.isfinite(trial)):
                    trial_norm = float(np.linalg.norm(residual_at(trial, z, m)))
                    if trial_norm < norm:
                        accepted = True
                        break
                damping /= 2.0
            if not accepted:
                return False, t, iterations, res, "line search failed (arrangement or no descent)"
            t = trial
            if self._escaped(t, z):
                return False, t, iterations, res, "coordinates escaped to infinity"
            res = relative_residual(t, z, m)

        # polish while the Newton step keeps shrinking
        previous = float("inf")
        for _ in range(self.settings.max_polish):
            try:
                step = np.linalg.solve(hessian_at(t, z, m), -residual_at(t, z, m))
            except np.linalg.LinAlgError:
                break
            size = float(np.max(np.abs(step)))
            if not size < previous or size == 0.0:
                break
            trial = t + step
            if arrangement_gap(trial, z)[0] <= margin:
                break
            trial_res = relative_residual(trial, z, m)
            if trial_res > max(tol, res):
                break
            t, res, previous = trial, trial_res, size
        return True, t, iterations, res, ""

    def _point(self, t: np.ndarray, z: np.ndarray, m: np.ndarray, res: float) -> CriticalPoint:
        hess = hessian_at(t, z, m)
        det = complex(np.linalg.det(hess)) if len(t) else 1 + 0j
        cond = float(np.linalg.cond(hess)) if len(t) else 1.0
        return canonical_orbit(t, residual_norm=res, hessian_det=det, hessian_cond=cond)

    def newton_refine(self, t0: Sequence[Any], inst: ProblemInstance, tol: Optional[float] = None,
                      max_iter: Optional[int] = None) -> NewtonResult:
        """
        Damped Newton iteration on the Bethe equations

        Args:
            t0: Starting point off the arrangement
            inst: Problem instance
            tol: Relative residual tolerance (settings default)
            max_iter: Iteration cap (settings default)

        Returns:
            NewtonResult; failures carry a reason instead of raising
        """
        z = as_complex_array(inst.z)
        m = np.asarray(inst.m, dtype=float)
        tol = self.settings.tol_newton if tol is None else tol
        max_iter = self.settings.max_iter if max_iter is None else max_iter
        ok, t, iterations, res, reason = self._newton(as_complex_array(t0), z, m, tol, max_iter)
        if not ok:
            return NewtonResult(success=False, t=tuple(t), iterations=iterations, residual_norm=res, reason=reason)
        return NewtonResult(success=True, t=tuple(t), point=self._point(t, z, m, res),
                            iterations=iterations, residual_norm=res)

    # Homotopy

    def _tangent(self, t: np.ndarray, z: np.ndarray, dz: np.ndarray, m: np.ndarray) -> np.ndarray:
        rhs = residual_z_derivative(t, z, m) @ dz
        return -np.linalg.solve(hessian_at(t, z, m), rhs)

    def _track(self, t_start: np.ndarray, z0: np.ndarray, z1: np.ndarray, m: np.ndarray,
               detour: Optional[np.ndarray]) -> TrackResult:
        st = self.settings
        d = np.zeros_like(z0) if detour is None else detour

        def z_at(tau: float) -> np.ndarray:
            return (1 - tau) * z0 + tau * z1 + tau * (1 - tau) * d

        def dz_at(tau: float) -> np.ndarray:
            return z1 - z0 + (1 - 2 * tau) * d

        span = float(np.max(np.abs(z1 - z0)))
        target_scale = max(diameter(list(z1)), 1e-12)
        tau, t, h = 0.0, np.array(t_start, dtype=complex), st.initial_step
        successes, steps = 0, 0
        while tau < 1.0:
            if steps >= st.max_track_steps:
                return TrackResult(success=False, tau=tau, steps=steps, reason="step budget exhausted")
            steps += 1
            remaining = 1.0 - tau
            h = min(h, st.max_step)
            if remaining * span > ENDGAME * target_scale:
                h = min(h, 0.5 * remaining)
            else:
                h = min(h, remaining)
            try:
                k1 = self._tangent(t, z_at(tau), dz_at(tau), m)
                k2 = self._tangent(t + 0.5 * h * k1, z_at(tau + 0.5 * h), dz_at(tau + 0.5 * h), m)
                k3 = self._tangent(t + 0.5 * h * k2, z_at(tau + 0.5 * h), dz_at(tau + 0.5 * h), m)
                k4 = self._tangent(t + h * k3, z_at(tau + h), dz_at(tau + h), m)
                predicted = t + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
                ok = self._correct(predicted, z_at(tau + h), m)
            except np.linalg.LinAlgError:
                ok = None
            if ok is not None:
                tau = 1.0 if h >= remaining else tau + h
                t = ok
                successes += 1
                if successes >= 3:
                    h *= 2.0
                    successes = 0
                continue
            successes = 0
            h /= 2.0
            if h < st.min_step:
                return TrackResult(success=False, tau=tau, steps=steps, reason=f"step underflow at tau={tau:.6g}")
        ok, t, _, res, reason = self._newton(t, z1, m, st.tol_newton, st.max_iter)
        if not ok:
            return TrackResult(success=False, tau=1.0, steps=steps, reason=f"endpoint refinement failed: {reason}")
        return TrackResult(success=True, point=self._point(t, z1, m, res), tau=1.0, steps=steps)

    def _correct(self, predicted: np.ndarray, z: np.ndarray, m: np.ndarray) -> Optional[np.ndarray]:
        """Corrector: a few Newton steps with a jump guard; None on failure"""
        if len(predicted) == 0:
            return predicted
        if not np.all(np.isfinite(predicted)):
            return None
        gap, _ = arrangement_gap(predicted, z)
        scale = diameter(list(predicted) + list(z)) or 1.0
        if gap <= self.settings.margin:
            return None
        t = predicted.copy()
        for _ in range(4):
            if relative_residual(t, z, m) <= self.settings.tol_corrector:
                break
            t = t + np.linalg.solve(hessian_at(t, z, m), -residual_at(t, z, m))
            if not np.all(np.isfinite(t)):
                return None
        if relative_residual(t, z, m) > self.settings.tol_corrector:
            return None
        if float(np.max(np.abs(t - predicted))) > 0.1 * gap * scale:
            return None
        if arrangement_gap(t, z)[0] <= self.settings.margin or self._escaped(t, z):
            return None
        return t

    def _detour(self, rng: np.random.Generator, z0: np.ndarray, z1: np.ndarray) -> np.ndarray:
        span = float(np.max(np.abs(z1 - z0))) or 1.0
        return span * (rng.standard_normal(len(z0)) + 1j * rng.standard_normal(len(z0)))

    def track_path(self, t_start: Sequence[Any], z_start: Sequence[Any], z_target: Sequence[Any],
                   m: Sequence[int], rng: Optional[np.random.Generator] = None) -> TrackResult:
        """
        Continue a critical point from z_start to z_target

        Args:
            t_start: Critical point at z_start
            z_start: Start configuration
            z_target: Target configuration
            m: Exponents
            rng: Source of detours (seeded from the settings when omitted)

        Returns:
            TrackResult with the refined critical point at z_target
        """
        z0, z1 = as_complex_array(z_start), as_complex_array(z_target)
        mm = np.asarray(m, dtype=float)
        t = as_complex_array(t_start)
        if np.array_equal(z0, z1):
            ok, t, _, res, reason = self._newton(t, z1, mm, self.settings.tol_newton, self.settings.max_iter)
            if not ok:
                return TrackResult(success=False, reason=reason)
            return TrackResult(success=True, point=self._point(t, z1, mm, res), tau=1.0)
        rng = rng or np.random.default_rng(self.settings.seed)
        result = self._track(t, z0, z1, mm, None)
        detours = 0
        while not result.success and detours < self.settings.detour_retries:
            detours += 1
            log(f"[yellow]Path failed ({result.reason}); retrying with detour {detours}[/yellow]")
            result = self._track(t, z0, z1, mm, self._detour(rng, z0, z1))
        return result.model_copy(update={"detours": detours})

    # Orbits

    def _seed_start(self, sequence: AdmissibleSequence, inst: ProblemInstance) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        m = np.asarray(inst.m, dtype=float)
        s = self.settings.s
        for _ in range(self.settings.s_doublings + 1):
            z_start = start_configuration(inst.n, s)
            t_seed = seed_point(sequence, inst.m, inst.k, s)
            ok, t, _, _, reason = self._newton(t_seed, z_start, m, self.settings.tol_newton, self.settings.max_iter)
            if ok:
                return t, z_start
            log(f"[yellow]Seed {sequence.indices} failed at s={s:g} ({reason}); doubling s[/yellow]")
            s *= 2.0
        return None

    def _solve_seed(self, sequence: AdmissibleSequence, inst: ProblemInstance,
                    rng: np.random.Generator) -> Tuple[Optional[Tuple[np.ndarray, np.ndarray]], TrackResult]:
        start = self._seed_start(sequence, inst)
        if start is None:
            return None, TrackResult(success=False, reason="seed refinement failed")
        t, z_start = start
        return start, self.track_path(t, z_start, inst.z, inst.m, rng)

    def solve_all(self, inst: ProblemInstance) -> SolveReport:
        """
        All isolated critical orbits of Phi_{k,n}(t; z, m)

        Args:
            inst: Problem instance in the isolated-points regime

        Returns:
            SolveReport comparing the number of orbits found with w(m, k)
        """
        regime = classify_regime(inst.m, inst.k)
        if regime.kind != RegimeKind.ISOLATED_POINTS:
            use = "critical_lines" if regime.kind == RegimeKind.CRITICAL_LINES else "count (there are no critical points)"
            raise RegimeError("solve_all needs isolated critical points", regime.kind.value, use)

        sequences = admissible_sequences(inst.m, inst.k)
        streams = [np.random.default_rng(s) for s in np.random.SeedSequence(self.settings.seed).spawn(len(sequences) + 1)]

        def run(idx: int):
            return self._solve_seed(sequences[idx], inst, streams[idx])

        if self.settings.workers > 1 and len(sequences) > 1:
            with ThreadPoolExecutor(max_workers=self.settings.workers) as executor:
                outcomes = list(executor.map(run, range(len(sequences))))
        else:
            outcomes = [run(idx) for idx in range(len(sequences))]

        points: List[CriticalPoint] = []
        failed, collisions = 0, 0
        z1 = as_complex_array(inst.z)
        m = np.asarray(inst.m, dtype=float)
        for idx, (start, result) in enumerate(outcomes):
            if not result.success:
                failed += 1
                log(f"[red]Seed {sequences[idx].indices} lost: {result.reason}[/red]")
                continue
            point = result.point
            if any(same_orbit(point, other, self.settings.tol_dedup) for other in points):
                point = self._retrack_collision(start, z1, m, points, streams[idx])
                if point is None:
                    collisions += 1
                    continue
            points.append(point)

        orbits, merged = dedup_orbits(points, self.settings.tol_dedup)
        collisions += merged
        added = 0
        if self.settings.multistart > 0 and len(orbits) < regime.expected_count:
            extra = self.multistart_search(inst, self.settings.multistart, rng=streams[-1])
            combined, _ = dedup_orbits(orbits + extra, self.settings.tol_dedup)
            added = len(combined) - len(orbits)
            orbits = combined

        flags = self._genericity_flags(inst, orbits, regime.expected_count, collisions)
        return SolveReport(
            regime=regime,
            orbits=orbits,
            expected=regime.expected_count,
            found=len(orbits),
            genericity_flags=flags,
            seeds_used=len(sequences),
            seeds_failed=failed,
            collisions=collisions,
            multistart_added=added,
        )

    def _retrack_collision(self, start: Optional[Tuple[np.ndarray, np.ndarray]], z1: np.ndarray, m: np.ndarray,
                           known: List[CriticalPoint], rng: np.random.Generator) -> Optional[CriticalPoint]:
        if start is None:
            return None
        t, z0 = start
        for attempt in range(self.settings.detour_retries):
            result = self._track(t, z0, z1, m, self._detour(rng, z0, z1))
            if result.success and not any(same_orbit(result.point, other, self.settings.tol_dedup) for other in known):
                log(f"[green]Collision resolved by detour {attempt + 1}[/green]")
                return result.point
        return None

    def _genericity_flags(self, inst: ProblemInstance, orbits: List[CriticalPoint], expected: int,
                          collisions: int) -> List[str]:
        flags = []
        if len(orbits) != expected:
            flags.append("count_mismatch")
        if collisions:
            flags.append("orbit_collision")
        if any(p.hessian_cond is not None and p.hessian_cond > DEGENERATE_COND for p in orbits):
            flags.append("near_degenerate_hessian")
        scale = diameter(list(inst.z)) or 1.0
        if inst.n > 1 and inst.config.min_distance < CLOSE_CONFIGURATION * scale:
            flags.append("close_configuration")
        return flags

    def multistart_search(self, inst: ProblemInstance, count: int,
                          rng: Optional[np.random.Generator] = None) -> List[CriticalPoint]:
        """
        Newton from random starts in a disc around z

        Args:
            inst: Problem instance (any regime)
            count: Number of random starts
            rng: Random source (seeded from the settings when omitted)

        Returns:
            Distinct critical orbits found, away from the arrangement
        """
        rng = rng or np.random.default_rng(self.settings.seed)
        z = as_complex_array(inst.z)
        m = np.asarray(inst.m, dtype=float)
        center = complex(np.mean(z))
        radius = 2.0 * max(diameter(list(z)), 1.0)
        found: List[CriticalPoint] = []
        for _ in range(count):
            while True:
                r = radius * np.sqrt(rng.random(inst.k))
                phase = 2 * np.pi * rng.random(inst.k)
                t0 = center + r * np.exp(1j * phase)
                if arrangement_gap(t0, z)[0] > 1e-3:
                    break
            ok, t, _, res, _ = self._newton(t0, z, m, self.settings.tol_newton, self.settings.max_iter)
            if not ok or arrangement_gap(t, z)[0] <= MULTISTART_GAP:
                continue
            point = self._point(t, z, m, res)
            if not any(same_orbit(point, other, self.settings.tol_dedup) for other in found):
                found.append(point)
        return sorted(found, key=orbit_sort_key)

    # Critical lines

    def critical_lines(self, inst: ProblemInstance) -> List[CriticalLine]:
        """
        Lines of critical points in lambda-space for 0 <= l(m) + 1 - k < k

        Args:
            inst: Problem instance in the critical-lines regime

        Returns:
            One CriticalLine per dual orbit (one line when l(m) + 1 - k = 0)
        """
        regime = classify_regime(inst.m, inst.k)
        if regime.kind != RegimeKind.CRITICAL_LINES:
            use = "solve_all" if regime.kind == RegimeKind.ISOLATED_POINTS else "count (there are no critical points)"
            raise RegimeError("critical_lines needs the critical-lines regime", regime.kind.value, use)
        dual = regime.dual_k
        exact = inst.config.exact is not None
        rng = np.random.default_rng(np.random.SeedSequence(self.settings.seed).spawn(2)[1])
        lines = []
        if dual == 0:
            lines.append(self._integral_line(inst, exact, rng))
            return lines

        report = self.solve_all(inst.with_k(dual))
        for orbit in report.orbits:
            equation = self._line_equation(orbit, inst)
            space = verify_all_polynomial(equation, dual, seed=self.settings.seed)
            lines.append(self._line_from(space.u1, space.u2, inst, orbit, equation, rng))
        return lines

    def _line_equation(self, orbit: CriticalPoint, inst: ProblemInstance) -> FuchsianEquation:
        if inst.config.exact is not None:
            lam = recognize_rational(orbit, inst.config.exact, inst.m)
            if lam is not None:
                return associated_equation(orbit, inst.config.exact, inst.m, exact=True, lam=lam)
        return associated_equation(orbit, inst.z, inst.m)

    def _integral_line(self, inst: ProblemInstance, exact: bool, rng: np.random.Generator) -> CriticalLine:
        points = list(inst.config.exact) if exact else list(inst.z)
        weight = Polynomial([1], exact=exact)
        for zl, ml in zip(points, inst.m):
            factor = Polynomial([-zl, 1], exact=exact)
            for _ in range(ml):
                weight = weight * factor
        u1 = weight.integral() * (Fraction(inst.total + 1) if exact else float(inst.total + 1))
        u2 = Polynomial([1], exact=exact)
        F, G = build_fg(points, inst.m, exact=exact)
        equation = FuchsianEquation(F=F, G=G, H=Polynomial([], exact=exact), z=tuple(points), m=inst.m,
                                    k=inst.k, exact=exact)
        return self._line_from(u1, u2, inst, None, equation, rng)

    def _line_from(self, u1: Polynomial, u2: Polynomial, inst: ProblemInstance, orbit: Optional[CriticalPoint],
                   equation: FuchsianEquation, rng: np.random.Generator) -> CriticalLine:
        k = inst.k
        if u1.degree != k:
            raise VerificationError(f"Generic solution has degree {u1.degree}, expected {k}", {"degree": u1.degree})
        base = tuple(complex(((-1) ** i) * u1.coefficient(k - i)) for i in range(1, k + 1))
        direction = tuple(complex(((-1) ** i) * u2.coefficient(k - i)) for i in range(1, k + 1))
        line = CriticalLine(base_lambda=base, direction_lambda=direction, source_orbit=orbit, equation=equation)
        worst = 0.0
        scale = max(1.0, float(np.max(np.abs(as_complex_array(base)))))
        for _ in range(3):
            c = scale * complex(rng.standard_normal(), rng.standard_normal())
            worst = max(worst, line_residual(line, inst, c))
        if worst > self.settings.tol_line:
            log(f"[yellow]Line sample residual {worst:.3e} exceeds {self.settings.tol_line:.1e}[/yellow]")
        return line.model_copy(update={"sample_residual": worst})


def line_point(line: CriticalLine, c: complex) -> np.ndarray:
    """Critical point with symmetric coordinates base + c * direction"""
    lam = as_complex_array(line.base_lambda) + c * as_complex_array(line.direction_lambda)
    return roots_from_lambda(lam)


def line_residual(line: CriticalLine, inst: ProblemInstance, c: complex) -> float:
    """
    Relative Bethe residual at the line point with parameter c

    Args:
        line: Critical line
        inst: Problem instance
        c: Line parameter

    Returns:
        Relative residual (inf when the point hits the arrangement)
    """
    t = line_point(line, c)
    z = as_complex_array(inst.z)
    if arrangement_gap(t, z)[0] <= ARRANGEMENT_MARGIN:
        return float("inf")
    return relative_residual(t, z, np.asarray(inst.m, dtype=float))


def lines_intersect(a: CriticalLine, b: CriticalLine, tol: float = 1e-8) -> bool:
    """
    Whether two lines in lambda-space meet

    Args:
        a: First line
        b: Second line
        tol: Relative least-squares residual counted as a meeting point

    Returns:
        True when base_a + c dir_a = base_b + d dir_b has a solution
    """
    da, db = as_complex_array(a.direction_lambda), as_complex_array(b.direction_lambda)
    rhs = as_complex_array(b.base_lambda) - as_complex_array(a.base_lambda)
    A = np.stack([da, -db], axis=1)
    coeffs, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    miss = float(np.linalg.norm(A @ coeffs - rhs))
    scale = max(1.0, float(np.linalg.norm(as_complex_array(a.base_lambda))),
                float(np.linalg.norm(as_complex_array(b.base_lambda))))
    return miss <= tol * scale
