import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gammaforge import numkernel as nk
from gammaforge.bessel import bessel_j0_auto, bessel_j1_auto
from gammaforge.errors import DomainError, InsufficientAccuracyError
from gammaforge.numkernel import BigReal
from gammaforge.quad import (
    Integrand,
    TailStrategy,
    bessel_power_tail,
    bessel_tail_over_t,
    integrate_finite,
    integrate_panels,
    laplace_closed_form,
    laplace_j0_hypergeometric,
    laplace_j0_quadrature,
    nielsen_integral,
    nielsen_integral_check,
    nielsen_integrand,
    weber_integral,
    weber_integral_check,
    _j0_power_integrand,
)
from gammaforge.special import exp_integral_E1, gamma_fn


class TestFinite:
    def test_constant(self):
        r = integrate_finite(lambda t: BigReal(1, t.precision), 0, 1, 30)
        assert abs(r.value - 1) <= r.error
        assert r.error <= nk.eps(30)

    def test_endpoint_singularity(self):
        f = Integrand(lambda t: 1 / nk.sqrt(t), endpoint_exponent=0.5)
        r = integrate_finite(f, 0, 1, 30)
        assert abs(r.value - 2) <= nk.eps(29)

    def test_exponential_integral_difference(self):
        r = integrate_panels(lambda t: nk.exp(-t) / t, 1, 20, 30)
        ref = exp_integral_E1(1, 40) - exp_integral_E1(20, 40)
        assert abs(r.value - ref) <= r.error + nk.eps(35)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            integrate_finite(lambda t: t, 1, 1, 20)

    @given(
        st.fractions(Fraction(-5), Fraction(5)),
        st.fractions(Fraction(1, 10), Fraction(5)),
        st.fractions(Fraction(1, 10), Fraction(5)),
        st.sampled_from(["exp", "cos", "poly"]),
    )
    @settings(max_examples=25)
    def test_additivity(self, a, w1, w2, kind):
        b, c = a + w1, a + w1 + w2
        fn = {
            "exp": lambda t: nk.exp(-t * t / 4),
            "cos": lambda t: nk.cos(t * 3) * t,
            "poly": lambda t: t * t * t - t * 2 + 1,
        }[kind]
        P = 25
        ab = integrate_finite(fn, a, b, P)
        bc = integrate_finite(fn, b, c, P)
        ac = integrate_finite(fn, a, c, P)
        assert abs(ab.value + bc.value - ac.value) <= ab.error + bc.error + ac.error

    def test_error_honesty(self):
        # p(t) e^{-t} with closed-form antiderivative; count bound violations
        rng = random.Random(20240611)
        trials, bad = 120, 0
        for _ in range(trials):
            k = rng.randint(0, 4)
            a = Fraction(rng.randint(-20, 20), 4)
            b = a + Fraction(rng.randint(1, 40), 4)
            P = rng.choice([15, 25, 35])
            r = integrate_finite(lambda t: nk.pow_int(t, k) * nk.exp(-t), a, b, P)
            exact = _poly_exp_integral(k, a, b, P + 15)
            if abs(r.value - exact) > r.error:
                bad += 1
        assert bad <= 0.01 * trials


def _poly_exp_integral(k, a, b, P):
    # int t^k e^{-t} = -e^{-t} sum_j k!/j! t^j
    def F(t):
        t = BigReal(t, P)
        s = sum((nk.pow_int(t, j) * (math.factorial(k) // math.factorial(j)) for j in range(k + 1)),
                BigReal(0, P))
        return -nk.exp(-t) * s

    return F(b) - F(a)


class TestBesselTail:
    @pytest.mark.slow
    def test_long_panel_oracle(self):
        tail = bessel_tail_over_t(20, 1, 25)
        panel = integrate_panels(_j0_power_integrand(1), 20, 2000, 25)
        far = bessel_power_tail(2000, 1, 25)
        assert abs(tail.value - panel.value - far.value) < nk.eps(22)

    def test_first_byparts_step(self):
        # int_{2x} J0/t = J0'(2x)/(2x) + 2 J0(2x)/(2x)^2 - 4 int_{2x} J0/t^3
        P, x = 30, 15
        T = BigReal(2 * x, P + 10)
        lhs = bessel_tail_over_t(T, 1, P).value
        j0 = bessel_j0_auto(T, P + 10)
        dj0 = -bessel_j1_auto(T, P + 10)
        rhs = dj0 / T + j0 * 2 / (T * T) - bessel_tail_over_t(T, 3, P).value * 4
        assert abs(lhs - rhs) <= nk.eps(P - 2)

    @pytest.mark.parametrize("lower,power", [(20, 1), (35, 1), (20, 2), (60, 3)])
    def test_envelope(self, lower, power):
        r = bessel_tail_over_t(lower, power, 20)
        env = nk.sqrt(BigReal(2, 30) / (nk.const_pi(30) * lower)) * nk.pow_int(
            BigReal(lower, 30), -power
        ) * 2
        assert abs(r.value) <= env

    def test_pure_byparts_refuses_small_lower(self):
        with pytest.raises(InsufficientAccuracyError):
            bessel_tail_over_t(5, 1, 30, allow_panel=False)
        with pytest.raises(InsufficientAccuracyError):
            bessel_power_tail(10, 1, 30)

    def test_tail_strategy_validation(self):
        with pytest.raises(ValueError):
            TailStrategy("exponential-decay", BigReal(1, 10), BigReal(0, 10), BigReal(-1, 10))
        with pytest.raises(ValueError):
            TailStrategy("levin", BigReal(1, 10), BigReal(0, 10), BigReal(0, 10))


class TestWeber:
    @pytest.mark.parametrize("mu", [Fraction(1), Fraction(1, 2), Fraction(1, 4)])
    def test_examples(self, mu):
        r = weber_integral_check(mu, 30, tolerance=nk.eps(20))
        assert r.passed
        assert abs(float(r.computed_residual)) < 1e-20
        assert r.notes["outside_proof_window"] == str(mu >= Fraction(1, 2)).lower()

    def test_closed_form_at_one(self):
        from gammaforge.quad import weber_closed_form

        assert abs(weber_closed_form(1, 30) - 1) <= nk.eps(29)

    def test_cutoff_doubling(self):
        v1, e1, T = weber_integral(Fraction(1, 4), 25)
        v2, e2, _ = weber_integral(Fraction(1, 4), 25, cutoff=2 * T)
        assert abs(v1 - v2) <= e1 + e2

    def test_domain(self):
        with pytest.raises(DomainError):
            weber_integral(Fraction(3, 2), 20)


class TestNielsen:
    def test_zero(self):
        r = nielsen_integral_check(30)
        assert r.passed and abs(float(r.computed_residual)) < 1e-25

    def test_integrand_limit(self):
        v = nielsen_integrand(BigReal(Fraction(1, 10**8), 30))
        assert abs(v + Fraction(1, 2)) < Fraction(1, 10**7)

    def test_split_invariance(self):
        a, ea, _ = nielsen_integral(28, cutoff=10)
        b, eb, _ = nielsen_integral(28, cutoff=25)
        assert abs(a - b) < nk.eps(24)

    def test_cutoff_doubling(self):
        a, ea, T = nielsen_integral(25)
        b, eb, _ = nielsen_integral(25, cutoff=2 * T)
        assert abs(a - b) <= ea + eb


class TestLaplace:
    @pytest.mark.parametrize("alpha,mu", [(2, Fraction(1, 4)), (3, Fraction(1, 3))])
    def test_examples(self, alpha, mu):
        r = laplace_j0_hypergeometric(alpha, mu, 30, tolerance=nk.eps(20))
        assert r.passed

    def test_large_alpha_limit(self):
        alpha, mu = 10**4, Fraction(1, 4)
        v, _, _ = laplace_j0_quadrature(alpha, mu, 20)
        base = nk.power(BigReal(alpha, 30), BigReal(-mu, 30)) * gamma_fn(mu, 30)
        ratio = v / base
        assert 1 - Fraction(1, 10**7) < ratio.to_fraction() < 1

    def test_tail_strategy_envelope(self):
        alpha, mu = 2, Fraction(1, 4)
        _, _, strat = laplace_j0_quadrature(alpha, mu, 25)
        T = strat.cutoff
        env = nk.exp(-T * alpha) * nk.power(T, BigReal(mu - 1, 30))
        assert strat.kind == "exponential-decay"
        assert strat.tail_error <= env

    def test_preconditions(self):
        with pytest.raises(DomainError):
            laplace_j0_hypergeometric(1, Fraction(1, 4), 20)
        with pytest.raises(DomainError):
            laplace_j0_hypergeometric(2, Fraction(1, 2), 20)
