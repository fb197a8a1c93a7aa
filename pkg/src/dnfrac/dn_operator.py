"""The Dzhrbashyan-Nersesyan operator as an exact algebra on monomials.

A sequence {gamma_0, ..., gamma_m} with gamma_k in (0, 1] defines

    D^{gamma} = D^{gamma_m - 1} D^{gamma_{m-1}} ... D^{gamma_1} D^{gamma_0}

where each D^{g} is a Riemann-Liouville differintegral.  On a monomial
C * y**delta every elementary step has a closed form, so the operator can
be applied exactly by tracking a coefficient and an exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DomainError, UnsupportedDomain, ValidationError
from .special_fn import gamma_ratio

__all__ = [
    "KERNEL_RTOL",
    "DnSequence",
    "Monomial",
    "PowerRuleResult",
    "HilferParams",
    "dn_sequence_new",
    "rl_sequence",
    "caputo_sequence",
    "hilfer_sequence",
    "rl_step",
    "dn_stages",
    "dn_apply_monomial",
    "dn_power_rule",
    "boundary_stages",
    "boundary_apply_monomial",
]

# |delta - alpha_k| <= KERNEL_RTOL * max(1, |alpha_k|) counts as a kernel power
KERNEL_RTOL = 1e-12


@dataclass(frozen=True)
class Monomial:
    """The term ``coeff * y**exponent``."""

    coeff: complex
    exponent: float

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def __call__(self, y: float) -> complex:
        if self.coeff == 0:
            return 0j
        return complex(self.coeff) * y**self.exponent

    def scaled(self, factor: complex) -> "Monomial":
        return Monomial(self.coeff * factor, self.exponent)


@dataclass(frozen=True)
class PowerRuleResult:
    """Either the kernel (the input was annihilated) or a single monomial."""

    monomial: Optional[Monomial] = None

    @classmethod
    def kernel(cls) -> "PowerRuleResult":
        return cls(None)

    @classmethod
    def term(cls, monomial: Monomial) -> "PowerRuleResult":
        return cls(monomial)

    @property
    def is_kernel(self) -> bool:
        return self.monomial is None

    def __call__(self, y: float) -> complex:
        return 0j if self.monomial is None else self.monomial(y)

    def __repr__(self):
        if self.monomial is None:
            return "PowerRuleResult(Kernel)"
        return f"PowerRuleResult({self.monomial!r})"


@dataclass(frozen=True)
class DnSequence:
    """Validated sequence gamma_0..gamma_m with derived orders alpha_k.

    ``alphas[k] = gamma_0 + ... + gamma_k - 1``; ``alpha`` is the total
    order alphas[m] and must be positive.
    """

    gammas: tuple[float, ...]
    alphas: tuple[float, ...] = field(init=False, compare=False)

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        if len(gammas) < 2:
            raise ValidationError(
                f"a sequence needs at least two entries (m >= 1), got {len(gammas)}"
            )
        for k, g in enumerate(gammas):
            if not (math.isfinite(g) and 0.0 < g <= 1.0):
                raise ValidationError(f"gamma_{k} = {g} must lie in (0, 1]")
        alphas = tuple(math.fsum(gammas[: k + 1]) - 1.0 for k in range(len(gammas)))
        if not alphas[-1] > 0:
            raise ValidationError(
                f"order alpha = sum(gamma) - 1 must be > 0, got {alphas[-1]}"
            )
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ValidationError("alpha_k must be strictly increasing")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "alphas", alphas)

    @property
    def m(self) -> int:
        return len(self.gammas) - 1

    @property
    def alpha(self) -> float:
        return self.alphas[-1]

    def is_kernel_power(self, delta: float) -> Optional[int]:
        """Index k <= m-1 with delta == alpha_k (within tolerance), else None."""
        for k, ak in enumerate(self.alphas[:-1]):
            if abs(delta - ak) <= KERNEL_RTOL * max(1.0, abs(ak)):
                return k
        return None


def dn_sequence_new(gammas: Sequence[float]) -> DnSequence:
    return DnSequence(tuple(gammas))


def _check_order(alpha: float, m: int) -> None:
    if int(m) != m or m < 1:
        raise ValidationError(f"m must be a positive integer, got {m}")
    if not (m - 1 < alpha <= m):
        raise ValidationError(f"need m - 1 < alpha <= m, got alpha={alpha}, m={m}")


def rl_sequence(alpha: float, m: int) -> DnSequence:
    """Sequence {alpha-m+1, 1, ..., 1} giving the Riemann-Liouville derivative."""
    _check_order(alpha, m)
    return DnSequence((alpha - m + 1.0,) + (1.0,) * m)


def caputo_sequence(alpha: float, m: int) -> DnSequence:
    """Sequence {1, ..., 1, alpha-m+1} giving the Caputo derivative."""
    _check_order(alpha, m)
    return DnSequence((1.0,) * m + (alpha - m + 1.0,))


@dataclass(frozen=True)
class HilferParams:
    alpha: float
    mu: float
    m: int

    def __post_init__(self):
        _check_order(self.alpha, self.m)
        if not 0.0 <= self.mu <= 1.0:
            raise ValidationError(f"mu must lie in [0, 1], got {self.mu}")


def hilfer_sequence(p: HilferParams) -> DnSequence:
    """Hilfer derivative of type mu written as a DN sequence.

    mu = 0 reproduces ``rl_sequence`` and mu = 1 reproduces
    ``caputo_sequence`` exactly.
    """
    gap = p.m - p.alpha
    first = 1.0 - (1.0 - p.mu) * gap
    last = 1.0 - p.mu * gap
    return DnSequence((first,) + (1.0,) * (p.m - 1) + (last,))


def _step(order: float, mono: Monomial, scale: float) -> PowerRuleResult:
    """One Riemann-Liouville differintegral of a monomial.

    For p - 1 < order <= p this is (d/dy)^p applied to the integral of
    order p - order.  ``scale`` sets the tolerance for recognising an
    exponent that sits on zero when a derivative is taken.
    """
    p = max(0, math.ceil(order))
    frac = order - p
    coeff = complex(mono.coeff)
    e = float(mono.exponent)
    if coeff == 0:
        return PowerRuleResult.term(Monomial(0j, e - order))
    if frac < 0:
        if e <= -1:
            raise DomainError(
                f"integral of order {-frac} diverges for exponent {e} <= -1"
            )
        coeff *= gamma_ratio(e + 1.0, 0.0, -frac)
        e -= frac
    for _ in range(p):
        if abs(e) <= KERNEL_RTOL * scale:
            return PowerRuleResult.kernel()
        coeff *= e
        e -= 1.0
    return PowerRuleResult.term(Monomial(coeff, e))


def rl_step(order: float, mono: Monomial) -> PowerRuleResult:
    """Apply the Riemann-Liouville differintegral D^order to a monomial.

    >>> rl_step(-1.0, Monomial(1.0, 0.0)).monomial
    Monomial(coeff=(1+0j), exponent=1.0)
    """
    return _step(order, mono, max(1.0, abs(mono.exponent)))


def dn_stages(seq: DnSequence) -> list[float]:
    """Orders of the elementary steps of the DN operator, in application order."""
    return list(seq.gammas[:-1]) + [seq.gammas[-1] - 1.0]


def _scale(seq: DnSequence, delta: float) -> float:
    return max(1.0, abs(delta), max(abs(a) for a in seq.alphas))


def dn_apply_monomial(
    seq: DnSequence, mono: Monomial, trace: Optional[list] = None
) -> PowerRuleResult:
    """Apply the DN operator stage by stage.

    If ``trace`` is a list, the result of every stage is appended to it.
    """
    if mono.exponent <= -1:
        raise DomainError(f"exponent must exceed -1, got {mono.exponent}")
    scale = _scale(seq, mono.exponent)
    result = PowerRuleResult.term(mono)
    for order in dn_stages(seq):
        result = _step(order, result.monomial, scale)
        if trace is not None:
            trace.append(result)
        if result.is_kernel:
            break
    return result


def dn_power_rule(seq: DnSequence, delta: float) -> PowerRuleResult:
    """Closed-form DN image of y**delta.

    Returns Gamma(delta+1)/Gamma(delta+1-alpha) * y**(delta-alpha) when
    delta > alpha_{m-1}, the kernel when delta is one of alpha_0..alpha_{m-1},
    and raises UnsupportedDomain otherwise (use ``dn_apply_monomial``).
    """
    if delta <= -1:
        raise DomainError(f"delta must exceed -1, got {delta}")
    if seq.is_kernel_power(delta) is not None:
        return PowerRuleResult.kernel()
    if not delta - seq.alphas[-2] > 0:
        raise UnsupportedDomain(
            f"closed form needs delta > alpha_(m-1) = {seq.alphas[-2]}, got {delta}"
        )
    coeff = gamma_ratio(delta + 1.0, 0.0, -seq.alpha)
    return PowerRuleResult.term(Monomial(complex(coeff), delta - seq.alpha))


def boundary_stages(seq: DnSequence, j: int) -> list[float]:
    """Orders of the steps of D^{alpha_j} = D^{gamma_j-1} d/dy ... D^{gamma_0-1}."""
    if not 0 <= j <= seq.m - 1:
        raise IndexError(f"boundary index j must lie in [0, {seq.m - 1}], got {j}")
    orders = [seq.gammas[0] - 1.0]
    for i in range(1, j + 1):
        orders += [1.0, seq.gammas[i] - 1.0]
    return orders


def boundary_apply_monomial(seq: DnSequence, j: int, mono: Monomial) -> PowerRuleResult:
    """Apply the Cauchy boundary operator D^{alpha_j} to a monomial."""
    orders = boundary_stages(seq, j)
    if mono.exponent <= -1:
        raise DomainError(f"exponent must exceed -1, got {mono.exponent}")
    scale = _scale(seq, mono.exponent)
    result = PowerRuleResult.term(mono)
    for order in orders:
        result = _step(order, result.monomial, scale)
        if result.is_kernel:
            break
    return result
