"""Fundamental system, general solution and Cauchy problem for

    D^{gamma_0..gamma_m} u(y) = lam * y**s * u(y),   y > 0.

Mode k of the fundamental system is

    u_k(y) = y**alpha_k * sum_n c_n (lam * y**(alpha + s))**n

with c_0 = 1 and c_n = c_{n-1} Gamma(a n + b + 1 - alpha) / Gamma(a n + b + 1),
a = alpha + s, b = alpha_k.  Equivalently
u_k(y) = y**alpha_k E_{alpha, a/alpha, (alpha_k + s)/alpha}(lam y**a).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .dn_operator import (
    DnSequence,
    Monomial,
    PowerRuleResult,
    boundary_apply_monomial,
    dn_apply_monomial,
    dn_power_rule,
)
from .errors import (
    ConsistencyError,
    DnfracError,
    DomainError,
    TruncationFailure,
    UnsupportedDomain,
    ValidationError,
)
from .special_fn import (
    DEFAULT_CONFIG,
    KilbasSaigoParams,
    SeriesEvalConfig,
    gamma,
    gamma_ratio,
    ks_coefficients,
    ks_eval,
)

__all__ = [
    "ProblemSpec",
    "SeriesSolution",
    "CauchyData",
    "GeneralSolutionWeights",
    "ResidualReport",
    "fundamental_solution",
    "fundamental_system",
    "eval_solution",
    "general_solution",
    "cauchy_solution",
    "boundary_limit_matrix",
    "verify_residual",
    "verify_cauchy_limits",
    "default_grid",
]

STORED_COEFFS = 32
CROSS_CHECK_RTOL = 1e-12
TRUNCATION_CAP = 10_000
# exponents closer than this to zero are treated as the constant term
EXPONENT_ATOL = 1e-12
CAUCHY_PROBE_Y = 1e-6


@dataclass(frozen=True)
class ProblemSpec:
    """The equation D^{seq} u = lam * y**s * u."""

    seq: DnSequence
    s: float
    lam: complex

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s >= 0):
            raise ValidationError(f"degeneracy exponent s must be >= 0, got {self.s}")
        lam = complex(self.lam)
        if not cmath.isfinite(lam):
            raise ValidationError(f"lambda must be finite, got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def m(self) -> int:
        return self.seq.m

    @property
    def step(self) -> float:
        return self.seq.alpha + self.s

    @property
    def termwise_regular(self) -> bool:
        """True when every non-leading series term lies where the closed
        power rule holds: a + alpha_0 > alpha_{m-1}, i.e. gamma_0 + gamma_m + s > 1.

        Outside this region some terms are not integrable at y = 0 and the
        boundary limits of the Cauchy problem diverge.
        """
        return self.step + self.seq.alphas[0] > self.seq.alphas[-2]


@dataclass(frozen=True)
class SeriesSolution:
    """One member u_k of the fundamental system.

    ``coeffs`` holds c_0..c_N without the lam**n factors, which are
    applied at evaluation time.
    """

    mode: int
    base_exponent: float
    step: float
    order: float
    lam: complex
    coeffs: tuple[float, ...]
    ks_params: KilbasSaigoParams

    @property
    def s(self) -> float:
        return self.step - self.order

    def coeff_ratio(self, n: int) -> float:
        """c_n / c_{n-1} for n >= 1, valid far beyond the stored coefficients."""
        if n < 1:
            raise ValidationError(f"ratio index must be >= 1, got {n}")
        return gamma_ratio(self.step * n + self.base_exponent, 1.0 - self.order, 1.0)

    def coefficients(self, n: int) -> list[float]:
        """c_0..c_n, extending the stored prefix by the recurrence if needed."""
        if n < len(self.coeffs):
            return list(self.coeffs[: n + 1])
        return _recurrence(self.step, self.base_exponent, self.order, n)

    def __call__(self, y: float, cfg: SeriesEvalConfig = DEFAULT_CONFIG) -> complex:
        return eval_solution(self, y, cfg)


@dataclass(frozen=True)
class CauchyData:
    values: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))


@dataclass(frozen=True)
class GeneralSolutionWeights:
    values: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))


@dataclass(frozen=True)
class ResidualReport:
    max_rel_error: float
    worst_y: float
    terms_used: int
    passed: bool
    tolerance: float
    detail: str = ""

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} max_rel_err={self.max_rel_error:.3e} worst_y={self.worst_y:g} "
            f"terms={self.terms_used} tol={self.tolerance:g}"
        )


def _failed(tol: float, detail: str, worst_y: float = math.nan) -> ResidualReport:
    return ResidualReport(math.inf, worst_y, 0, False, tol, detail)


def _recurrence(step: float, base: float, order: float, n: int) -> list[float]:
    coeffs = [1.0]
    for j in range(1, n + 1):
        coeffs.append(coeffs[-1] * gamma_ratio(step * j + base, 1.0 - order, 1.0))
    return coeffs


def fundamental_solution(
    spec: ProblemSpec,
    k: int,
    cfg: SeriesEvalConfig = DEFAULT_CONFIG,
    n_coeffs: int = STORED_COEFFS,
) -> SeriesSolution:
    """Build mode k of the fundamental system, 0 <= k <= m-1."""
    seq = spec.seq
    if not 0 <= k <= seq.m - 1:
        raise IndexError(f"mode k must lie in [0, {seq.m - 1}], got {k}")
    alpha = seq.alpha
    a = spec.step
    b = seq.alphas[k]
    coeffs = _recurrence(a, b, alpha, n_coeffs)
    params = KilbasSaigoParams(alpha, a / alpha, (b + spec.s) / alpha)
    for n, (c, ck) in enumerate(zip(coeffs, ks_coefficients(params, n_coeffs))):
        if c == 0.0 and ck == 0.0:
            break
        if abs(c - ck) > CROSS_CHECK_RTOL * abs(c):
            raise ConsistencyError(
                f"recurrence and Kilbas-Saigo coefficient c_{n} disagree: {c} vs {ck}"
            )
    return SeriesSolution(k, b, a, alpha, spec.lam, tuple(coeffs), params)


def fundamental_system(
    spec: ProblemSpec, cfg: SeriesEvalConfig = DEFAULT_CONFIG
) -> list[SeriesSolution]:
    return [fundamental_solution(spec, k, cfg) for k in range(spec.m)]


def eval_solution(
    sol: SeriesSolution, y: float, cfg: SeriesEvalConfig = DEFAULT_CONFIG
) -> complex:
    """u_k(y) = y**b * E_{alpha,m,l}(lam * y**a)."""
    if not y > 0:
        raise DomainError(f"solutions are evaluated at y > 0, got {y}")
    return y**sol.base_exponent * ks_eval(sol.ks_params, sol.lam * y**sol.step, cfg)


def _check_length(values: Sequence, m: int, what: str) -> None:
    if len(values) != m:
        raise ValidationError(f"{what} must have length m = {m}, got {len(values)}")


def general_solution(
    spec: ProblemSpec,
    weights: GeneralSolutionWeights,
    y: float,
    cfg: SeriesEvalConfig = DEFAULT_CONFIG,
) -> complex:
    """sum_k d_k u_k(y)."""
    _check_length(weights.values, spec.m, "weights")
    total = 0j
    for d, sol in zip(weights.values, fundamental_system(spec, cfg)):
        if d != 0:
            total += d * eval_solution(sol, y, cfg)
    return total


def cauchy_solution(spec: ProblemSpec, data: CauchyData) -> GeneralSolutionWeights:
    """Weights d_k = A_k / Gamma(alpha_k + 1) matching lim D^{alpha_k} u = A_k."""
    _check_length(data.values, spec.m, "Cauchy data")
    return GeneralSolutionWeights(
        tuple(A / gamma(ak + 1.0) for A, ak in zip(data.values, spec.seq.alphas[:-1]))
    )


def default_grid() -> list[float]:
    return [round(0.1 * i, 10) for i in range(1, 21)]


def _series_terms(sol: SeriesSolution, z: complex, tol: float) -> list[complex]:
    """Terms c_n z**n up to the first N with |c_N z**N| <= tol * |partial sum|
    and ratio below 1/2, so the omitted tail is smaller still.

    The residual of a truncated series is exactly its last term (the
    recurrence cancels everything else), hence the bound on the term itself.
    """
    az = abs(z)
    terms = [1 + 0j]
    term = 1 + 0j
    running = 1 + 0j
    n = 0
    while True:
        if n >= TRUNCATION_CAP:
            raise TruncationFailure(
                f"no truncation within {TRUNCATION_CAP} terms for |z| = {az}"
            )
        n += 1
        term = term * z * sol.coeff_ratio(n)
        if not cmath.isfinite(term):
            raise TruncationFailure(f"series terms overflow for |z| = {az}")
        terms.append(term)
        running += term
        q = az * sol.coeff_ratio(n + 1)
        if q < 0.5 and abs(term) <= tol * abs(running):
            return terms
        if term == 0:
            return terms


def _dn_image(seq: DnSequence, delta: float) -> PowerRuleResult:
    try:
        return dn_power_rule(seq, delta)
    except UnsupportedDomain:
        return dn_apply_monomial(seq, Monomial(1.0, delta))


def verify_residual(
    spec: ProblemSpec,
    sol: SeriesSolution,
    y_grid: Optional[Iterable[float]] = None,
    tol: float = 1e-8,
) -> ResidualReport:
    """Apply the DN operator termwise to the truncated series of ``sol`` and
    compare with lam * y**s * u on the grid.

    The error is measured relative to |lam y**s u| (absolute when lam = 0).
    The truncation point is chosen so the neglected tail is below tol/10.
    """
    grid = list(default_grid() if y_grid is None else y_grid)
    if any(not y > 0 for y in grid):
        return _failed(tol, "grid points must be positive")
    seq = spec.seq
    b, a = sol.base_exponent, sol.step
    try:
        lead = _dn_image(seq, b)
    except DnfracError as exc:
        return _failed(tol, f"leading term: {exc}")
    if not lead.is_kernel:
        return _failed(tol, f"leading term y^{b} is not annihilated")

    images: list[Monomial] = []
    worst, worst_y, max_terms = 0.0, grid[0], 0
    for y in grid:
        z = spec.lam * y**a
        try:
            terms = _series_terms(sol, z, tol / 10)
            while len(images) < len(terms) - 1:
                n = len(images) + 1
                image = _dn_image(seq, a * n + b)
                if image.is_kernel:
                    return _failed(tol, f"term n={n} unexpectedly annihilated", y)
                images.append(image.monomial)
        except DnfracError as exc:
            return _failed(tol, str(exc), y)
        max_terms = max(max_terms, len(terms))
        # terms[n] already carries (lam y^a)^n; the image contributes
        # G_n y^(e_n) with e_n = a n + b - alpha, so scale by y^(e_n - a n)
        lhs = [
            terms[n] * images[n - 1].coeff * y ** (images[n - 1].exponent - a * n)
            for n in range(1, len(terms))
        ]
        rhs = [spec.lam * y**spec.s * t * y**b for t in terms]
        pairs = [l - r for l, r in zip(lhs, rhs)] + [-rhs[-1]]
        residual = complex(
            math.fsum(p.real for p in pairs), math.fsum(p.imag for p in pairs)
        )
        scale = abs(
            complex(math.fsum(r.real for r in rhs), math.fsum(r.imag for r in rhs))
        )
        err = abs(residual) / scale if scale > 0 else abs(residual)
        if err > worst or not math.isfinite(err):
            worst, worst_y = err, y
    return ResidualReport(worst, worst_y, max_terms, worst <= tol, tol)


def _boundary_limit(
    seq: DnSequence, j: int, sol: SeriesSolution, n_terms: int
) -> tuple[complex, list[tuple[int, Monomial]]]:
    """Symbolic lim_{y->0} D^{alpha_j} u_k over the first n_terms terms.

    Returns the limit and the surviving (n, monomial) images.  Raises
    DomainError when a term has a negative exponent (divergent limit) or a
    constant appears anywhere other than the leading term of mode j.
    """
    limit = 0j
    images = []
    for n, coeff in enumerate(sol.coefficients(n_terms - 1)):
        mono = Monomial(coeff * sol.lam**n, sol.step * n + sol.base_exponent)
        if mono.is_zero:
            continue
        image = boundary_apply_monomial(seq, j, mono)
        if image.is_kernel:
            continue
        e = image.monomial.exponent
        if abs(e) <= EXPONENT_ATOL:
            if (n, sol.mode) != (0, j):
                raise DomainError(
                    f"unexpected constant from term n={n} of mode {sol.mode} under D^alpha_{j}"
                )
            limit += image.monomial.coeff
        elif e < 0:
            raise DomainError(
                f"term n={n} of mode {sol.mode} gives y^{e:.6g} under D^alpha_{j}; "
                "the boundary limit diverges"
            )
        images.append((n, image.monomial))
    return limit, images


def boundary_limit_matrix(spec: ProblemSpec, n_terms: int = 4) -> list[list[complex]]:
    """Matrix L[j][k] = lim_{y->0} D^{alpha_j} u_k, computed symbolically.

    Exponents grow with n, so a few terms settle the sign pattern.
    """
    system = fundamental_system(spec)
    return [
        [_boundary_limit(spec.seq, j, sol, n_terms)[0] for sol in system]
        for j in range(spec.m)
    ]


def verify_cauchy_limits(
    spec: ProblemSpec,
    data: CauchyData,
    tol: float = 1e-8,
    n_terms: int = 24,
) -> ResidualReport:
    """Check lim_{y->0} D^{alpha_j} u = A_j for the Cauchy solution.

    The symbolic limit decides the verdict; the value of D^{alpha_j} u at
    y = 1e-6 is reported in ``detail`` as a smoke test only.
    """
    try:
        weights = cauchy_solution(spec, data)
        system = fundamental_system(spec)
    except DnfracError as exc:
        return _failed(tol, str(exc))
    worst, worst_j = 0.0, 0
    probe = []
    for j in range(spec.m):
        limit = 0j
        at_probe = 0j
        for d, sol in zip(weights.values, system):
            if d == 0:
                continue
            try:
                lim, images = _boundary_limit(spec.seq, j, sol, n_terms)
            except DnfracError as exc:
                return _failed(tol, str(exc), 0.0)
            limit += d * lim
            at_probe += d * sum(mono(CAUCHY_PROBE_Y) for _, mono in images)
        target = data.values[j]
        err = abs(limit - target) / abs(target) if target != 0 else abs(limit)
        probe.append(abs(at_probe - target))
        if err > worst:
            worst, worst_j = err, j
    detail = "probe |D^a_j u(1e-6) - A_j| = " + ", ".join(f"{p:.2e}" for p in probe)
    return ResidualReport(worst, 0.0, n_terms, worst <= tol, tol, detail)
