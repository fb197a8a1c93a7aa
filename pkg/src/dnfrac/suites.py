"""Randomised verification suites behind ``dnfrac verify``."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .dn_operator import (
    DnSequence,
    HilferParams,
    caputo_sequence,
    hilfer_sequence,
    rl_sequence,
)
from .errors import DnfracError, ValidationError
from .oracle import validate_algebra
from .solver import (
    CauchyData,
    ProblemSpec,
    SeriesSolution,
    _series_terms,
    cauchy_solution,
    eval_solution,
    fundamental_solution,
    fundamental_system,
    verify_cauchy_limits,
    verify_residual,
)
from .special_fn import MittagLefflerParams, gamma, ml_eval

__all__ = [
    "SuiteResult",
    "SUITES",
    "random_sequence",
    "random_problem",
    "summation_condition",
    "run_suites",
]

# relative error of a floating-point sum is roughly condition * eps
MAX_CONDITION = 1e6
RESIDUAL_GRID = [0.1 + 0.9 * i / 19 for i in range(20)]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_rel_err: float
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"SUITE {self.name} {verdict} max_rel_err={self.max_rel_err:.3e}"


def random_sequence(rng: random.Random, max_m: int = 4) -> DnSequence:
    """Uniform gamma_k in (0, 1], redrawn until the order is positive."""
    while True:
        m = rng.randint(1, max_m)
        gammas = [1.0 - rng.random() for _ in range(m + 1)]
        try:
            return DnSequence(tuple(gammas))
        except ValidationError:
            continue


def random_problem(
    rng: random.Random,
    max_m: int = 4,
    max_s: float = 2.0,
    max_lam: float = 5.0,
) -> ProblemSpec:
    """Random termwise-regular problem with complex lambda, |lambda| <= max_lam."""
    while True:
        seq = random_sequence(rng, max_m)
        s = rng.uniform(0.0, max_s)
        lam = cmath.rect(max_lam * math.sqrt(rng.random()), rng.uniform(-math.pi, math.pi))
        spec = ProblemSpec(seq, s, lam)
        if spec.termwise_regular:
            return spec


def summation_condition(spec: ProblemSpec, grid: Iterable[float]) -> float:
    """max over modes and grid of sum|c_n z^n| / |sum c_n z^n|.

    Returns inf when a series cannot even be summed (overflow or no
    truncation within the cap).
    """
    worst = 1.0
    for sol in fundamental_system(spec):
        for y in grid:
            try:
                terms = _series_terms(sol, spec.lam * y**sol.step, 1e-16)
            except (DnfracError, OverflowError):
                return math.inf
            total = abs(sum(terms))
            if total == 0 or not math.isfinite(total):
                return math.inf
            worst = max(worst, math.fsum(abs(t) for t in terms) / total)
    return worst


def well_conditioned_problems(
    rng: random.Random, count: int, grid: Iterable[float] = RESIDUAL_GRID, **kwargs
) -> tuple[list[ProblemSpec], int]:
    """Draw ``count`` problems whose series sums have condition <= MAX_CONDITION.

    Returns the problems and the number of rejected draws.
    """
    grid = list(grid)
    accepted, rejected = [], 0
    while len(accepted) < count:
        spec = random_problem(rng, **kwargs)
        if summation_condition(spec, grid) <= MAX_CONDITION:
            accepted.append(spec)
        else:
            rejected += 1
    return accepted, rejected


def residual_suite(seed: int, tol: float, problems: int = 20) -> SuiteResult:
    rng = random.Random(seed)
    specs, rejected = well_conditioned_problems(rng, problems)
    worst = 0.0
    failures = []
    for spec in specs:
        for sol in fundamental_system(spec):
            report = verify_residual(spec, sol, RESIDUAL_GRID, tol)
            worst = max(worst, report.max_rel_error)
            if not report.passed:
                failures.append(f"{spec.seq.gammas} s={spec.s:.3g} k={sol.mode}")
    detail = f"{problems} problems, {rejected} ill-conditioned draws skipped"
    if failures:
        detail += "; failed: " + "; ".join(failures[:3])
    return SuiteResult("residual", not failures, worst, detail)


def oracle_suite(seed: int, tol: float, trials: int = 100) -> SuiteResult:
    report = validate_algebra(seed, trials)
    return SuiteResult("oracle", report.passed, report.max_rel_error, report.detail)


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def reductions_suite(seed: int, tol: float) -> SuiteResult:
    """Special cases: Mittag-Leffler reduction at s = 0, the classical
    exp(lam y^2 / 2) solution, and the RL / Caputo / Hilfer exponent formulas."""
    rng = random.Random(seed)
    errors = []
    grid = [0.1 * i for i in range(1, 21)]

    for _ in range(5):
        while True:
            spec = random_problem(rng, max_s=0.0, max_lam=2.0)
            if spec.seq.alpha >= 0.5:
                break
        alpha = spec.seq.alpha
        for sol in fundamental_system(spec):
            ak = sol.base_exponent
            params = MittagLefflerParams(alpha, ak + 1.0)
            for y in grid[:10]:
                ref = gamma(ak + 1.0) * y**ak * ml_eval(params, spec.lam * y**alpha)
                errors.append(_rel(eval_solution(sol, y), ref))

    lam = cmath.rect(rng.uniform(0.2, 2.0), rng.uniform(-math.pi, math.pi))
    spec = ProblemSpec(DnSequence((1.0, 1.0)), 1.0, lam)
    sol = fundamental_solution(spec, 0)
    for y in grid:
        errors.append(_rel(eval_solution(sol, y), cmath.exp(lam * y * y / 2)))

    for _ in range(10):
        m = rng.randint(1, 4)
        alpha = m - rng.random()
        mu = rng.random()
        rl = rl_sequence(alpha, m)
        cap = caputo_sequence(alpha, m)
        hil = hilfer_sequence(HilferParams(alpha, mu, m))
        for k in range(m):
            errors.append(abs(rl.alphas[k] - (alpha + k - m)))
            errors.append(abs(cap.alphas[k] - k))
            errors.append(abs(hil.alphas[k] - (k - (1 - mu) * (m - alpha))))

    worst = max(errors)
    return SuiteResult("reductions", worst <= tol, worst)


def cauchy_suite(seed: int, tol: float, problems: int = 10) -> SuiteResult:
    rng = random.Random(seed)
    worst = 0.0
    passed = True
    for _ in range(problems):
        spec = random_problem(rng)
        data = CauchyData(
            tuple(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(spec.m))
        )
        report = verify_cauchy_limits(spec, data, tol)
        worst = max(worst, report.max_rel_error)
        passed &= report.passed
    return SuiteResult("cauchy", passed, worst)


SUITES: dict[str, Callable[[int, float], SuiteResult]] = {
    "oracle": oracle_suite,
    "residual": residual_suite,
    "reductions": reductions_suite,
    "cauchy": cauchy_suite,
}


def run_suites(name: str, seed: int, tol: float) -> list[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        if n not in SUITES:
            raise ValidationError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
        try:
            results.append(SUITES[n](seed, tol))
        except DnfracError as exc:
            results.append(SuiteResult(n, False, math.inf, str(exc)))
    return results
