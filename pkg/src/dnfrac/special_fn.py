"""Gamma kernels and series evaluation of the Mittag-Leffler and
Kilbas-Saigo functions.

Both functions are entire power series whose coefficient ratios are
gamma ratios.  Ratios are evaluated in log space (or through a Stirling
difference for large arguments), so the series can run far past the
point where individual gamma values overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, PoleError, TruncationFailure, ValidationError

__all__ = [
    "KilbasSaigoParams",
    "MittagLefflerParams",
    "SeriesEvalConfig",
    "gamma",
    "log_gamma",
    "gamma_ratio",
    "ml_eval",
    "ks_ratio",
    "ks_coefficients",
    "ks_eval",
]

# math.gamma overflows just above this point
GAMMA_MAX_ARG = 171.6243769563027

# B_{2k} / (2k (2k - 1)) for the Stirling correction series, k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 10.0
_DIRECT_MAX = 170.0
_ML_Z_GUARD = 100.0


@dataclass(frozen=True)
class SeriesEvalConfig:
    rel_tol: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValidationError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValidationError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONFIG = SeriesEvalConfig()


@dataclass(frozen=True)
class KilbasSaigoParams:
    """Parameters (alpha, m, l) of the Kilbas-Saigo function E_{alpha,m,l}."""

    alpha: float
    m_param: float
    l_param: float

    def __post_init__(self):
        for name in ("alpha", "m_param", "l_param"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.alpha <= 0:
            raise ValidationError(f"alpha > 0 required, got {self.alpha}")
        if self.m_param <= 0:
            raise ValidationError(f"m_param > 0 required, got {self.m_param}")
        if self.alpha * self.l_param + 1 <= 0:
            raise ValidationError(
                "alpha * l_param + 1 > 0 required so every gamma argument is "
                f"positive, got {self.alpha * self.l_param + 1}"
            )


@dataclass(frozen=True)
class MittagLefflerParams:
    """Parameters (alpha, beta) of the two-parameter Mittag-Leffler function."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"alpha > 0 required, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValidationError(f"beta > 0 required, got {self.beta}")


def gamma(x: float) -> float:
    """Gamma function on the real line.

    Raises PoleError at zero and the negative integers and OverflowError
    above ~171.62, where the result is not representable.
    """
    if math.isnan(x):
        raise DomainError("gamma of NaN")
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    if x > GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({x}) exceeds the double range")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _stirling_tail(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def _log_gamma_ratio(q: float, d: float) -> float:
    # ln Gamma(q + d) - ln Gamma(q) without cancelling the two large logs;
    # taking the shift d separately keeps rounding of q + d out of the result
    p = q + d
    if min(p, q) >= _STIRLING_MIN:
        return (
            (q - 0.5) * math.log1p(d / q)
            + d * math.log(p)
            - d
            + (_stirling_tail(p) - _stirling_tail(q))
        )
    return math.lgamma(p) - math.lgamma(q)


def gamma_ratio(x: float, a: float, b: float) -> float:
    """Return Gamma(x + a) / Gamma(x + b).

    Stays finite where the individual gamma values would overflow, since
    for large arguments the ratio behaves like x**(a - b).
    """
    p = x + a
    q = x + b
    if not (p > 0 and q > 0):
        raise DomainError(f"gamma_ratio needs positive arguments, got {p} and {q}")
    if p == q:
        return 1.0
    if min(p, q) < _STIRLING_MIN and max(p, q) < _DIRECT_MAX:
        return math.gamma(p) / math.gamma(q)
    return math.exp(_log_gamma_ratio(q, a - b))


def _sum_series(
    first: complex,
    ratio: Callable[[int], float],
    z: complex,
    cfg: SeriesEvalConfig,
) -> complex:
    """Sum first * sum_i prod_{j<i} (ratio(j) * z).

    Stops after two consecutive terms fall below rel_tol * |sum| while the
    next ratio times |z| is below 1/2.  The ratios used here decrease
    monotonically, so the tail is then bounded by a geometric series whose
    sum does not exceed the last retained term.
    """
    az = abs(z)
    terms = [complex(first)]
    running = complex(first)
    term = complex(first)
    small = 0
    i = 0
    r = ratio(0)
    while True:
        if i + 1 >= cfg.max_terms:
            raise TruncationFailure(
                f"series did not converge within {cfg.max_terms} terms (|z|={az})"
            )
        term = term * z * r
        terms.append(term)
        running += term
        i += 1
        r = ratio(i)
        if abs(term) <= cfg.rel_tol * abs(running):
            small += 1
        else:
            small = 0
        if small >= 2 and az * r < 0.5:
            break
    return complex(
        math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
    )


def ml_eval(
    params: MittagLefflerParams, z: complex, cfg: SeriesEvalConfig = DEFAULT_CONFIG
) -> complex:
    """Mittag-Leffler function E_{alpha,beta}(z) by direct series summation.

    Only meant for moderate arguments (``|z| <= 100``); for large negative
    arguments the alternating series loses digits to cancellation.
    """
    z = complex(z)
    if abs(z) > _ML_Z_GUARD:
        raise DomainError(f"ml_eval supports |z| <= {_ML_Z_GUARD}, got {abs(z)}")
    a, b = params.alpha, params.beta
    first = 1.0 / gamma(b) if b <= _DIRECT_MAX else math.exp(-log_gamma(b))
    return _sum_series(first, lambda n: gamma_ratio(a * n + b, 0.0, a), z, cfg)


def ks_ratio(params: KilbasSaigoParams, i: int) -> float:
    """Coefficient ratio c_{i+1} / c_i of the Kilbas-Saigo series."""
    a = params.alpha
    return gamma_ratio(a * (i * params.m_param + params.l_param), 1.0, a + 1.0)


def ks_coefficients(params: KilbasSaigoParams, n: int) -> list[float]:
    """Coefficients c_0..c_n of E_{alpha,m,l}.

    The coefficients decay roughly like (n!)**(-alpha) and underflow for
    large n and alpha; use ``ks_ratio`` when only ratios are needed.
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    coeffs = [1.0]
    for i in range(n):
        coeffs.append(coeffs[-1] * ks_ratio(params, i))
    return coeffs


def ks_eval(
    params: KilbasSaigoParams, z: complex, cfg: SeriesEvalConfig = DEFAULT_CONFIG
) -> complex:
    """Kilbas-Saigo function E_{alpha,m,l}(z) = sum_i c_i z**i.

    The function is entire, so the series converges for every finite z;
    accuracy for large |z| in the left half plane is limited by
    cancellation between terms.
    """
    z = complex(z)
    if not cmath.isfinite(z):
        raise DomainError(f"ks_eval needs a finite argument, got {z}")
    return _sum_series(1.0, lambda i: ks_ratio(params, i), z, cfg)
