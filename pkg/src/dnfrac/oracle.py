"""Numerical cross-checks for the monomial algebra.

Riemann-Liouville integrals of t**delta are computed by tanh-sinh
quadrature, which copes with the integrable singularities at both ends of
[0, y]; derivatives are central differences with one Richardson step.
Nothing here uses the closed-form power rule, so agreement with
``dn_operator`` is an independent confirmation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dn_operator import DnSequence, Monomial, dn_apply_monomial, dn_stages, rl_step
from .errors import ConvergenceFailure, DomainError, ValidationError
from .solver import ResidualReport

__all__ = [
    "QuadratureConfig",
    "rl_integral_numeric",
    "rl_derivative_numeric",
    "validate_algebra",
]

ALGEBRA_RTOL = 1e-5
# log of the smallest integrand/weight product worth keeping
_LOG_CUTOFF = -45.0


@dataclass(frozen=True)
class QuadratureConfig:
    levels: int = 10
    abs_tol: float = 1e-9
    diff_step_rel: float = 1e-5

    def __post_init__(self):
        if not 4 <= self.levels <= 14:
            raise ValidationError(f"levels must lie in [4, 14], got {self.levels}")
        if not (self.abs_tol > 0 and self.diff_step_rel > 0):
            raise ValidationError("tolerances must be positive")


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=64)
def _nodes(u_max: float, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Abscissae u new at ``level`` and the matching log-weights pieces.

    Level 0 uses integer nodes; each later level adds the odd multiples
    of 2**-level.  Returns (v, log_cosh_u) where v = pi/2 sinh(u).
    """
    h = 2.0**-level
    k_max = int(math.floor(u_max / h))
    k = np.arange(-k_max, k_max + 1)
    if level > 0:
        k = k[k % 2 != 0]
    u = k * h
    v = 0.5 * math.pi * np.sinh(u)
    log_cosh_u = np.abs(u) + np.log1p(np.exp(-2.0 * np.abs(u))) - math.log(2.0)
    return v, log_cosh_u


def _log_integrand(v, log_cosh_u, delta, sigma, log_y):
    # t = y / (1 + e^{-2v}), y - t = y / (1 + e^{2v}), both without cancellation
    log_t = log_y - np.logaddexp(0.0, -2.0 * v)
    log_r = log_y - np.logaddexp(0.0, 2.0 * v)
    av = np.abs(v)
    log_cosh_v = av + np.log1p(np.exp(-2.0 * av)) - math.log(2.0)
    # dt/du = y * (pi/2) cosh(u) / (2 cosh(v)^2)
    log_jac = log_y + math.log(0.25 * math.pi) + log_cosh_u - 2.0 * log_cosh_v
    return delta * log_t + (sigma - 1.0) * log_r + log_jac


def rl_integral_numeric(
    sigma: float, delta: float, y: float, cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """I^sigma t**delta at y, i.e. the integral of t**delta (y-t)**(sigma-1) / Gamma(sigma)
    over [0, y], by tanh-sinh quadrature with level doubling."""
    if not sigma > 0:
        raise DomainError(f"integral order must be positive, got {sigma}")
    if not delta > -1:
        raise DomainError(f"t^{delta} is not integrable at 0")
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    # both endpoint factors decay like exp(-2 c |v|) with c = min(delta + 1, sigma)
    c = min(delta + 1.0, sigma, 1.0)
    u_max = math.asinh(-_LOG_CUTOFF / (math.pi * c)) + 0.5
    log_y = math.log(y)

    total = 0.0
    previous = None
    for level in range(cfg.levels + 1):
        v, log_cosh_u = _nodes(u_max, level)
        f = np.exp(_log_integrand(v, log_cosh_u, delta, sigma, log_y))
        total += math.fsum(f)
        estimate = total * 2.0**-level
        if previous is not None and level >= 3 and abs(estimate - previous) <= cfg.abs_tol:
            # the error of tanh-sinh roughly squares per level, so one more
            # halving after the change drops below abs_tol is ample
            v, log_cosh_u = _nodes(u_max, level + 1)
            f = np.exp(_log_integrand(v, log_cosh_u, delta, sigma, log_y))
            refined = (total + math.fsum(f)) * 2.0 ** -(level + 1)
            return refined / math.gamma(sigma)
        previous = estimate
    raise ConvergenceFailure(
        f"tanh-sinh did not converge in {cfg.levels} levels "
        f"(sigma={sigma}, delta={delta}, y={y})"
    )


def rl_derivative_numeric(
    gamma_ord: float, delta: float, y: float, cfg: QuadratureConfig = DEFAULT_QUAD
) -> float:
    """D^gamma t**delta at y for 0 < gamma <= 1, as the derivative of
    I^(1-gamma) t**delta by Richardson-extrapolated central differences."""
    if not 0.0 < gamma_ord <= 1.0:
        raise DomainError(f"derivative order must lie in (0, 1], got {gamma_ord}")
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    sigma = 1.0 - gamma_ord
    if sigma == 0.0:
        def F(t):
            return t**delta
    else:
        def F(t):
            return rl_integral_numeric(sigma, delta, t, cfg)

    h = y * cfg.diff_step_rel

    def central(step):
        return (F(y + step) - F(y - step)) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def _numeric_stage(order: float, mono: Monomial, y: float, cfg: QuadratureConfig) -> complex:
    """Numerically apply one DN stage (order in (-1, 1]) to a monomial at y."""
    if order > 0:
        return mono.coeff * rl_derivative_numeric(order, mono.exponent, y, cfg)
    if order == 0:
        return mono(y)
    return mono.coeff * rl_integral_numeric(-order, mono.exponent, y, cfg)


def _rel(numeric: complex, exact: complex) -> float:
    if exact == 0:
        return abs(numeric)
    return abs(numeric - exact) / abs(exact)


def validate_algebra(
    seed: int = 1, trials: int = 100, cfg: QuadratureConfig = DEFAULT_QUAD
) -> ResidualReport:
    """Randomised comparison of ``rl_step`` against quadrature.

    Every fifth draw sits on the kernel power delta = gamma - 1, where the
    algebra returns the kernel and the numeric value must be ~0.  Each
    trial also traces a random m = 1 sequence through ``dn_apply_monomial``
    and checks every stage against the numeric stage applied to the
    previous algebraic output.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = random.Random(seed)
    worst, worst_y, worst_case = 0.0, math.nan, ""

    def record(err, y, case):
        nonlocal worst, worst_y, worst_case
        if not err <= worst:
            worst, worst_y, worst_case = err, y, case

    for trial in range(trials):
        g = 1.0 - rng.random()
        y = rng.uniform(0.2, 2.0)
        delta = g - 1.0 if trial % 5 == 4 else rng.uniform(-0.9, 3.0)
        exact = rl_step(g, Monomial(1.0, delta))(y)
        numeric = rl_derivative_numeric(g, delta, y, cfg)
        record(_rel(numeric, exact), y, f"rl_step(gamma={g:.6g}, delta={delta:.6g})")

        while True:
            g0, g1 = 1.0 - rng.random(), 1.0 - rng.random()
            if g0 + g1 > 1.0:
                break
        seq = DnSequence((g0, g1))
        d0 = seq.alphas[0] + rng.uniform(0.05, 2.0)
        trace: list = []
        dn_apply_monomial(seq, Monomial(1.0, d0), trace)
        current = Monomial(1.0, d0)
        for order, stage in zip(dn_stages(seq), trace):
            numeric = _numeric_stage(order, current, y, cfg)
            record(_rel(numeric, stage(y)), y, f"trace {seq.gammas} delta={d0:.6g}")
            if stage.is_kernel:
                break
            current = stage.monomial

    return ResidualReport(
        worst, worst_y, trials, worst <= ALGEBRA_RTOL, ALGEBRA_RTOL, f"worst: {worst_case}"
    )
