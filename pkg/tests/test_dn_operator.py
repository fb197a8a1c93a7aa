import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnfrac.dn_operator import (
    DnSequence,
    HilferParams,
    Monomial,
    boundary_apply_monomial,
    boundary_stages,
    caputo_sequence,
    dn_apply_monomial,
    dn_power_rule,
    dn_sequence_new,
    dn_stages,
    hilfer_sequence,
    rl_sequence,
    rl_step,
)
from dnfrac.errors import DomainError, UnsupportedDomain, ValidationError
from dnfrac.oracle import rl_derivative_numeric


def sequences(max_m=5):
    return (
        st.lists(st.floats(min_value=0.02, max_value=1.0), min_size=2, max_size=max_m + 1)
        .filter(lambda g: sum(g) - 1 > 1e-3)
        .map(dn_sequence_new)
    )


def coeff(result):
    assert not result.is_kernel
    return result.monomial.coeff


class TestSequence:
    def test_first_derivative(self):
        seq = dn_sequence_new([1, 1])
        assert seq.alphas == (0.0, 1.0)
        assert seq.alpha == 1.0 and seq.m == 1

    def test_half(self):
        seq = dn_sequence_new([0.5, 1])
        assert seq.alphas[0] == -0.5 and seq.alpha == 0.5

    def test_nonpositive_order(self):
        with pytest.raises(ValidationError, match="alpha"):
            dn_sequence_new([0.3, 0.4])

    @pytest.mark.parametrize("bad", [[0.0, 1.0], [1.2, 1.0], [0.5, float("nan")], [1.0]])
    def test_invalid(self, bad):
        with pytest.raises(ValidationError):
            dn_sequence_new(bad)

    @settings(max_examples=200, deadline=None)
    @given(sequences())
    def test_invariants(self, seq):
        assert all(b > a for a, b in zip(seq.alphas, seq.alphas[1:]))
        assert -1 < seq.alphas[0] <= 0
        for k, ak in enumerate(seq.alphas):
            assert ak == pytest.approx(sum(seq.gammas[: k + 1]) - 1, abs=1e-14)

    def test_immutable(self):
        seq = dn_sequence_new([0.5, 1])
        with pytest.raises(AttributeError):
            seq.gammas = (1.0, 1.0)


class TestFactories:
    def test_rl(self):
        assert rl_sequence(0.5, 1).gammas == (0.5, 1.0)
        assert rl_sequence(1, 1).gammas == (1.0, 1.0)
        seq = rl_sequence(2.5, 3)
        assert seq.gammas == (0.5, 1.0, 1.0, 1.0)
        assert seq.alphas == pytest.approx((-0.5, 0.5, 1.5, 2.5), abs=1e-15)

    def test_caputo(self):
        seq = caputo_sequence(0.5, 1)
        assert seq.gammas == (1.0, 0.5) and seq.alphas[0] == 0
        seq = caputo_sequence(1.7, 2)
        assert seq.gammas == pytest.approx((1, 1, 0.7), abs=1e-15)
        assert seq.alphas == pytest.approx((0, 1, 1.7), abs=1e-15)
        assert caputo_sequence(3, 3).gammas == (1.0,) * 4

    def test_hilfer(self):
        assert hilfer_sequence(HilferParams(0.5, 1, 1)).gammas == (1.0, 0.5)
        assert hilfer_sequence(HilferParams(0.5, 0, 1)).gammas == (0.5, 1.0)
        seq = hilfer_sequence(HilferParams(0.5, 0.5, 1))
        assert seq.gammas == (0.75, 0.75) and seq.alphas[0] == -0.25

    @pytest.mark.parametrize("alpha,m", [(1.5, 1), (0.5, 2), (2.0, 1), (1.0, 0)])
    def test_order_range(self, alpha, m):
        with pytest.raises(ValidationError):
            rl_sequence(alpha, m)
        with pytest.raises(ValidationError):
            caputo_sequence(alpha, m)

    def test_hilfer_mu_range(self):
        with pytest.raises(ValidationError):
            HilferParams(0.5, 1.5, 1)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6), st.floats(0.0, 1.0 - 1e-9), st.floats(0.0, 1.0))
    def test_closed_forms(self, m, frac, mu):
        alpha = m - frac
        rl, cap = rl_sequence(alpha, m), caputo_sequence(alpha, m)
        hil = hilfer_sequence(HilferParams(alpha, mu, m))
        for k in range(m):
            assert abs(rl.alphas[k] - (alpha + k - m)) <= 1e-14
            assert abs(cap.alphas[k] - k) <= 1e-14
            assert abs(hil.alphas[k] - (k - (1 - mu) * (m - alpha))) <= 1e-14
        assert hilfer_sequence(HilferParams(alpha, 0.0, m)) == rl
        assert hilfer_sequence(HilferParams(alpha, 1.0, m)) == cap


class TestRlStep:
    def test_integration_of_one(self):
        r = rl_step(-1.0, Monomial(1.0, 0.0))
        assert r.monomial == Monomial(1.0, 1.0)

    def test_kernel_power(self):
        assert rl_step(0.5, Monomial(1.0, -0.5)).is_kernel

    def test_half_derivative_of_y(self):
        # the quadrature oracle gives Gamma(2)/Gamma(1.5); Gamma(2)/Gamma(2.5)
        # belongs to the half integral y -> y^{1.5}
        r = rl_step(0.5, Monomial(1.0, 1.0))
        assert coeff(r) == pytest.approx(math.gamma(2) / math.gamma(1.5), rel=1e-15)
        assert rl_step(-0.5, Monomial(1.0, 1.0)).monomial.coeff == pytest.approx(
            math.gamma(2) / math.gamma(2.5), rel=1e-15
        )
        assert r.monomial.exponent == pytest.approx(0.5, abs=1e-15)
        numeric = rl_derivative_numeric(0.5, 1.0, 1.3)
        assert abs(numeric - r(1.3)) <= 1e-6 * abs(r(1.3))

    def test_identity(self):
        m = Monomial(2 - 1j, 0.7)
        assert rl_step(0.0, m).monomial == m

    def test_higher_order(self):
        # D^{2.5} y^3 = Gamma(4)/Gamma(1.5) y^{0.5}
        r = rl_step(2.5, Monomial(1.0, 3.0))
        assert coeff(r) == pytest.approx(6 / math.gamma(1.5), rel=1e-14)
        assert r.monomial.exponent == pytest.approx(0.5, abs=1e-14)
        # y^{0.5} lies in the kernel of D^{2.5}: 0.5 - 2.5 = -2
        assert rl_step(2.5, Monomial(1.0, 0.5)).is_kernel

    def test_divergent_integral(self):
        with pytest.raises(DomainError):
            rl_step(-0.5, Monomial(1.0, -1.0))

    def test_zero_monomial(self):
        r = rl_step(0.4, Monomial(0.0, 1.0))
        assert not r.is_kernel and r.monomial.is_zero

    def test_complex_coefficient(self):
        r = rl_step(-0.3, Monomial(1 + 2j, 0.5))
        assert coeff(r) == pytest.approx((1 + 2j) * math.gamma(1.5) / math.gamma(1.8), rel=1e-14)


class TestComposition:
    def test_first_derivative(self):
        r = dn_apply_monomial(dn_sequence_new([1, 1]), Monomial(1.0, 1.0))
        assert r.monomial == Monomial(1.0, 0.0)

    def test_rl_half(self):
        r = dn_apply_monomial(dn_sequence_new([0.5, 1]), Monomial(1.0, 1.5))
        assert coeff(r) == pytest.approx(math.gamma(2.5) / math.gamma(2), rel=1e-14)
        assert r.monomial.exponent == pytest.approx(1.0, abs=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(sequences())
    def test_kernel_powers(self, seq):
        for k in range(seq.m):
            assert dn_apply_monomial(seq, Monomial(1.0, seq.alphas[k])).is_kernel
            assert dn_power_rule(seq, seq.alphas[k]).is_kernel

    def test_trace(self):
        seq = dn_sequence_new([0.7, 0.9, 0.8])
        trace = []
        dn_apply_monomial(seq, Monomial(1.0, 2.0), trace)
        assert len(trace) == len(dn_stages(seq)) == 3
        assert trace[-1].monomial.exponent == pytest.approx(2.0 - seq.alpha, abs=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            dn_apply_monomial(dn_sequence_new([0.5, 1]), Monomial(1.0, -1.0))


class TestPowerRule:
    def test_rl_power_rule(self):
        r = dn_power_rule(rl_sequence(0.5, 1), 1.0)
        assert coeff(r) == pytest.approx(1 / math.gamma(1.5), rel=1e-15)
        assert rl_derivative_numeric(0.5, 1.0, 0.8) == pytest.approx(r(0.8), rel=1e-6)

    def test_three_term_sequence(self):
        seq = dn_sequence_new([0.7, 0.9, 0.8])
        delta = seq.alpha + 0.5 + seq.alphas[1]
        closed = dn_power_rule(seq, delta)
        composed = dn_apply_monomial(seq, Monomial(1.0, delta))
        assert coeff(closed) == pytest.approx(math.gamma(delta + 1) / math.gamma(delta + 1 - seq.alpha))
        assert coeff(closed) == pytest.approx(coeff(composed), rel=1e-12)
        assert closed.monomial.exponent == pytest.approx(composed.monomial.exponent, abs=1e-12)

    def test_unsupported(self):
        seq = dn_sequence_new([0.3, 1.0, 0.3])
        # alpha_1 = 0.3; delta in (alpha_0, alpha_1) is neither kernel nor covered
        with pytest.raises(UnsupportedDomain):
            dn_power_rule(seq, 0.0)
        with pytest.raises(DomainError):
            dn_power_rule(seq, -1.0)

    @settings(max_examples=300, deadline=None)
    @given(sequences(), st.floats(min_value=1e-3, max_value=6.0))
    def test_literal_product_form(self, seq, gap):
        # the uncancelled product with (delta - alpha_k) Gamma(delta - alpha_k) factors
        delta = seq.alphas[-2] + gap
        a = seq.alphas
        mpmath.mp.dps = 30
        num = mpmath.gamma(delta + 1)
        for k in range(seq.m):
            num *= (delta - a[k]) * mpmath.gamma(delta - a[k])
        den = mpmath.fprod(mpmath.gamma(delta - a[k] + 1) for k in range(seq.m + 1))
        assert coeff(dn_power_rule(seq, delta)) == pytest.approx(float(num / den), rel=1e-12)


class TestBoundary:
    seq = dn_sequence_new([0.6, 0.8, 0.9, 0.7])

    def test_stages(self):
        assert boundary_stages(self.seq, 0) == [pytest.approx(-0.4)]
        assert len(boundary_stages(self.seq, 2)) == 5
        with pytest.raises(IndexError):
            boundary_stages(self.seq, 3)
        with pytest.raises(IndexError):
            boundary_apply_monomial(self.seq, -1, Monomial(1.0, 0.0))

    def test_middle_case(self):
        a = self.seq.alphas
        r = boundary_apply_monomial(self.seq, 0, Monomial(1.0, a[0]))
        assert coeff(r) == pytest.approx(math.gamma(1 + a[0]), rel=1e-14)
        assert abs(r.monomial.exponent) <= 1e-14

    def test_below_diagonal(self):
        a = self.seq.alphas
        assert boundary_apply_monomial(self.seq, 1, Monomial(1.0, a[0])).is_kernel

    def test_above_diagonal(self):
        a = self.seq.alphas
        r = boundary_apply_monomial(self.seq, 0, Monomial(1.0, a[1]))
        assert coeff(r) == pytest.approx(math.gamma(1 + a[1]) / math.gamma(1 + a[1] - a[0]), rel=1e-14)
        assert r.monomial.exponent == pytest.approx(a[1] - a[0], abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(sequences(max_m=4))
    def test_three_case_formula(self, seq):
        a = seq.alphas
        for j in range(seq.m):
            for k in range(seq.m):
                r = boundary_apply_monomial(seq, j, Monomial(1.0, a[k]))
                if k < j:
                    assert r.is_kernel
                elif k == j:
                    assert coeff(r) == pytest.approx(math.gamma(1 + a[k]), rel=1e-12)
                    assert abs(r.monomial.exponent) <= 1e-12
                else:
                    ref = math.gamma(1 + a[k]) / math.gamma(1 + a[k] - a[j])
                    assert coeff(r) == pytest.approx(ref, rel=1e-12)
                    assert r.monomial.exponent == pytest.approx(a[k] - a[j], abs=1e-12)


def test_random_rl_step_against_quadrature():
    rng = random.Random(5)
    for _ in range(20):
        g = 1.0 - rng.random()
        delta = rng.uniform(-0.9, 3.0)
        y = rng.uniform(0.2, 2.0)
        exact = rl_step(g, Monomial(1.0, delta))(y)
        assert rl_derivative_numeric(g, delta, y) == pytest.approx(exact.real, rel=1e-6)
