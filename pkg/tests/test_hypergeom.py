from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modeq.errors import ConvergenceError, DomainError
from modeq.hypergeom import (
    SignatureParams,
    gauss_2f1_unit,
    multiplier,
    ratio_R,
    ratio_R_derivative,
    schwarz_map,
    schwarz_vertices,
)
from modeq.precision import context

from oracles import brute_2f1, f_half_agm, ratio_half_agm

T_VALUES = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 6), Fraction(2, 5)]
# (2/pi) K(1/sqrt 2) from the AGM at 400 bits
F_HALF_AT_HALF = "1.180340599016096226045337940558488587234"


def ulp(x, bits):
    ctx = context(bits)
    return ctx.ldexp(1, ctx.mag(x) - bits)


def reference_2f1(t, z, bits=400):
    ctx = mpmath.MPContext()
    ctx.prec = bits
    tt = ctx.mpf(t.numerator) / t.denominator
    return ctx.hyp2f1(tt, 1 - tt, 1, ctx.convert(z))


unit_open = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000))


class TestSignatureParams:
    @pytest.mark.parametrize("t, lam2", [(Fraction(1, 2), 4), (Fraction(1, 3), 3), (Fraction(1, 4), 2)])
    def test_lambda_squared(self, t, lam2):
        params = SignatureParams(t, 128)
        assert params.lambda_sq == lam2
        assert params.signature == 1 / t
        assert abs(params.lambda_t() ** 2 - lam2) < mpmath.mpf(2) ** -120

    def test_general_t_has_no_lambda(self):
        params = SignatureParams(Fraction(1, 5))
        assert params.lambda_sq is None
        assert not params.is_arithmetic

    def test_theta(self):
        params = SignatureParams(Fraction(1, 3), 128)
        assert abs(params.theta() - context(128).pi / 3) < mpmath.mpf(2) ** -125

    @pytest.mark.parametrize("t", [Fraction(0), Fraction(3, 5), Fraction(-1, 3)])
    def test_rejects_t(self, t):
        with pytest.raises(DomainError):
            SignatureParams(t)

    def test_rejects_low_precision(self):
        with pytest.raises(ValueError):
            SignatureParams(Fraction(1, 3), 52)

    def test_string_t(self):
        assert SignatureParams("1/3").t == Fraction(1, 3)
        assert SignatureParams.from_signature(4).t == Fraction(1, 4)


class TestGauss2F1:
    def test_zero(self):
        assert gauss_2f1_unit(SignatureParams(Fraction(1, 3)), 0) == 1

    def test_half_half_against_agm(self):
        params = SignatureParams(Fraction(1, 2), 128)
        value = gauss_2f1_unit(params, Fraction(1, 2))
        ctx = context(128)
        assert abs(value - ctx.mpf(F_HALF_AT_HALF)) <= 4 * ulp(value, 128)
        assert abs(value - f_half_agm(Fraction(1, 2))) <= 4 * ulp(value, 128)

    def test_third_against_brute_force(self):
        bits = 128
        params = SignatureParams(Fraction(1, 3), bits)
        z = context(bits).mpf("0.1")
        value = gauss_2f1_unit(params, z)
        ref = brute_2f1(Fraction(1, 3), z, terms=500, bits=4 * bits)
        assert abs(value - ref) <= 4 * ulp(value, bits)

    @pytest.mark.parametrize("t", T_VALUES)
    @pytest.mark.parametrize("z", ["0.001", "0.25", "0.5", "0.75", "0.97", "0.999999"])
    @pytest.mark.parametrize("bits", [53, 128, 256])
    def test_four_ulp_contract(self, t, z, bits):
        params = SignatureParams(t, bits)
        zz = context(bits).mpf(z)
        value = gauss_2f1_unit(params, zz)
        assert abs(value - reference_2f1(t, zz)) <= 4 * ulp(value, bits)

    @pytest.mark.parametrize("z", [-0.1, 1, 1.5])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            gauss_2f1_unit(SignatureParams(Fraction(1, 3)), z)

    def test_term_cap(self):
        with pytest.raises(ConvergenceError):
            gauss_2f1_unit(SignatureParams(Fraction(1, 3)), "0.4", max_terms=5)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            gauss_2f1_unit(SignatureParams(Fraction(1, 3)), "0.4", method="taylor")

    @settings(max_examples=40, deadline=None)
    @given(z=st.fractions(min_value=Fraction(2, 5), max_value=Fraction(3, 5)),
           t=st.sampled_from(T_VALUES))
    def test_branches_agree_near_half(self, z, t):
        bits = 128
        params = SignatureParams(t, bits)
        zz = context(bits).mpf(z.numerator) / z.denominator
        a = gauss_2f1_unit(params, zz, method="series")
        b = gauss_2f1_unit(params, zz, method="connection")
        assert abs(a - b) <= 8 * ulp(a, bits)

    def test_agm_equivalence_double_precision(self):
        import random

        rng = random.Random(1234)
        params = SignatureParams(Fraction(1, 2), 53)
        for _ in range(100):
            z = rng.uniform(0.001, 0.999)
            assert abs(gauss_2f1_unit(params, z) - f_half_agm(z)) < 1e-14

    @pytest.mark.parametrize("z", ["0.03", "0.5", "0.93"])
    def test_doubling_precision(self, z):
        low = SignatureParams(Fraction(1, 3), 100)
        zz = context(100).mpf(z)
        a = gauss_2f1_unit(low, zz)
        b = gauss_2f1_unit(low.with_precision(200), zz)
        assert abs(a - b) <= 4 * ulp(a, 100)


class TestRatio:
    @pytest.mark.parametrize("t", T_VALUES)
    def test_half_is_one(self, t):
        assert ratio_R(SignatureParams(t, 128), Fraction(1, 2)) == 1

    def test_singular_value(self):
        ctx = context(128)
        z = 17 - 12 * ctx.sqrt(2)
        r = ratio_R(SignatureParams(Fraction(1, 2), 128), z)
        assert abs(r - 2) < ctx.mpf(2) ** -110
        assert abs(r - ratio_half_agm(z)) < ctx.mpf(2) ** -110

    def test_reciprocal_at_099(self):
        params = SignatureParams(Fraction(1, 3), 128)
        small = ratio_R(params, "0.99")
        assert 0 < small < 1
        assert abs(small * ratio_R(params, "0.01") - 1) < mpmath.mpf(2) ** -120

    @settings(max_examples=50, deadline=None)
    @given(z=unit_open, t=st.sampled_from(T_VALUES))
    def test_reciprocal_symmetry(self, z, t):
        bits = 96
        params = SignatureParams(t, bits)
        zz = context(bits).mpf(z.numerator) / z.denominator
        prod = ratio_R(params, zz) * ratio_R(params, 1 - zz)
        assert abs(prod - 1) < mpmath.mpf(2) ** (-bits + 8)

    @settings(max_examples=50, deadline=None)
    @given(z1=unit_open, z2=unit_open, t=st.sampled_from(T_VALUES))
    def test_strictly_decreasing(self, z1, z2, t):
        if z1 == z2:
            return
        lo, hi = sorted((z1, z2))
        params = SignatureParams(t, 64)
        assert ratio_R(params, lo) > ratio_R(params, hi)

    def test_limits(self):
        params = SignatureParams(Fraction(1, 4), 64)
        near0 = [ratio_R(params, f"1e-{k}") for k in (5, 20, 80)]
        near1 = [ratio_R(params, 1 - context(64).mpf(10) ** -k) for k in (3, 6, 12)]
        assert near0[0] < near0[1] < near0[2]
        assert near1[0] > near1[1] > near1[2] > 0

    @pytest.mark.parametrize("z", [0, 1, -2])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            ratio_R(SignatureParams(Fraction(1, 3)), z)

    @pytest.mark.parametrize("t", T_VALUES)
    @pytest.mark.parametrize("z", ["0.02", "0.4", "0.8"])
    def test_derivative_matches_finite_difference(self, t, z):
        bits = 128
        params = SignatureParams(t, bits)
        ctx = context(bits)
        zz = ctx.mpf(z)
        h = ctx.mpf(10) ** -12
        fd = (ratio_R(params, zz + h) - ratio_R(params, zz - h)) / (2 * h)
        exact = ratio_R_derivative(params, zz)
        assert exact < 0
        assert abs(fd - exact) < 1e-18 * abs(exact)


class TestSchwarzMap:
    def test_at_half(self):
        assert schwarz_map(SignatureParams(Fraction(1, 3)), Fraction(1, 2)) == 1j

    def test_singular_value(self):
        ctx = context(128)
        w = schwarz_map(SignatureParams(Fraction(1, 2), 128), 17 - 12 * ctx.sqrt(2))
        assert w.real == 0
        assert abs(w.imag - 2) < 1e-30

    def test_decays_towards_one(self):
        params = SignatureParams(Fraction(1, 4), 64)
        ctx = context(64)
        vals = [schwarz_map(params, 1 - ctx.mpf(2) ** -k).imag for k in (2, 8, 16, 32, 48)]
        assert all(a > b > 0 for a, b in zip(vals, vals[1:]))
        # logarithmic decay: R ~ const / log(1/(1-z))
        assert vals[-1] < vals[0] / 4

    def test_vertex_metadata(self):
        v = schwarz_vertices(SignatureParams(Fraction(1, 3), 64))
        ctx = context(64)
        assert v.at_zero == "i*inf"
        assert v.at_one == 0
        assert abs(v.at_infinity - ctx.expjpi(ctx.mpf(1) / 6)) < 1e-18
        assert abs(v.angle_at_infinity - ctx.pi / 3) < 1e-18


class TestMultiplier:
    def test_identical_arguments(self):
        assert multiplier(SignatureParams(Fraction(1, 3)), "0.3", "0.3") == 1

    def test_against_agm(self):
        ctx = context(128)
        beta = 17 - 12 * ctx.sqrt(2)
        m = multiplier(SignatureParams(Fraction(1, 2), 128), Fraction(1, 2), beta)
        ref = f_half_agm(Fraction(1, 2)) / f_half_agm(beta)
        assert abs(m - ref) < 1e-35
        assert abs(m - (4 - 2 * ctx.sqrt(2))) < 1e-35

    def test_domain(self):
        with pytest.raises(DomainError):
            multiplier(SignatureParams(Fraction(1, 3)), "0.3", 1)
