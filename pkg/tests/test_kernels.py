import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from rbfcubature.kernels import (
    Kernel,
    kernel_eval,
    min_poly_degree,
    parse_kernel,
    support_radius,
    wendland_coefficients,
)

WENDLANDS = [Kernel.wendland(D, k) for D in (1, 2, 3) for k in (0, 1, 2)]
ALL_KERNELS = [Kernel.gauss(), *WENDLANDS] + [Kernel.phs(e) for e in (1, 2, 3, 4, 5, 6, 7)]


def _ids(kernels):
    return [k.token() for k in kernels]


class TestKernelEval:
    def test_gauss_at_zero(self):
        assert kernel_eval(Kernel.gauss(), 0.0) == 1.0

    def test_tps_zero_and_one(self):
        tps = Kernel.phs(2)
        assert kernel_eval(tps, 0.0) == 0.0
        assert kernel_eval(tps, 1.0) == 0.0

    def test_wendland_1_1_value(self):
        # (1 - r)^3 (3 r + 1) at r = 1/2
        assert kernel_eval(Kernel.wendland(1, 1), 0.5) == pytest.approx(0.3125, abs=1e-15)

    @pytest.mark.parametrize("kern", WENDLANDS, ids=_ids(WENDLANDS))
    def test_wendland_normalised_and_compact(self, kern):
        assert kernel_eval(kern, 0.0) == pytest.approx(1.0, abs=1e-15)
        r = np.array([1.0, 1.0 + 1e-12, 1.5, 10.0])
        assert np.all(kernel_eval(kern, r) == 0.0)

    @pytest.mark.parametrize(
        "D,k,closed",
        [
            (1, 0, lambda r: 1 - r),
            (1, 1, lambda r: (1 - r) ** 3 * (3 * r + 1)),
            (1, 2, lambda r: (1 - r) ** 5 * (8 * r**2 + 5 * r + 1)),
            (3, 0, lambda r: (1 - r) ** 2),
            (3, 1, lambda r: (1 - r) ** 4 * (4 * r + 1)),
            (3, 2, lambda r: (1 - r) ** 6 * (35 * r**2 + 18 * r + 3) / 3),
            (2, 1, lambda r: (1 - r) ** 4 * (4 * r + 1)),
        ],
    )
    def test_wendland_closed_forms(self, D, k, closed):
        r = np.linspace(0, 1, 101)
        np.testing.assert_allclose(kernel_eval(Kernel.wendland(D, k), r), closed(r), atol=1e-14)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            kernel_eval(Kernel.gauss(), -1e-300)

    @pytest.mark.parametrize("kern", ALL_KERNELS, ids=_ids(ALL_KERNELS))
    def test_finite_on_log_grid(self, kern):
        r = np.concatenate([[0.0], np.logspace(-12, 3, 400)])
        assert np.all(np.isfinite(kernel_eval(kern, r)))

    @pytest.mark.parametrize("exponent", [2, 4, 6])
    def test_tps_matches_direct_log_form(self, exponent):
        r = np.logspace(-8, 1, 500)
        direct = r**exponent * np.log(r)
        got = kernel_eval(Kernel.phs(exponent), r)
        np.testing.assert_allclose(got, direct, rtol=1e-14, atol=0)

    def test_gauss_is_platform_exp(self):
        r = np.linspace(0, 5, 77)
        assert np.array_equal(kernel_eval(Kernel.gauss(), r), np.exp(-r * r))

    def test_scalar_in_scalar_out(self):
        assert isinstance(kernel_eval(Kernel.phs(3), 2.0), float)
        assert kernel_eval(Kernel.phs(3), 2.0) == 8.0


class TestWendlandSmoothness:
    @staticmethod
    def _derivative_at_one(coeffs, order):
        # exact derivative of sum c_j r^j at r = 1
        total = Fraction(0)
        for j, c in enumerate(coeffs):
            if j >= order:
                total += c * math.perm(j, order)
        return total

    @pytest.mark.parametrize("D", [1, 2, 3])
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_c2k_at_support_boundary(self, D, k):
        coeffs = wendland_coefficients(D, k)
        for order in range(2 * k + 1):
            assert self._derivative_at_one(coeffs, order) == 0

    def test_unknown_parameters_rejected(self):
        with pytest.raises(ValueError):
            Kernel.wendland(4, 1)
        with pytest.raises(ValueError):
            Kernel.wendland(1, 3)


class TestSupportAndOrder:
    def test_support_radius(self):
        assert support_radius(Kernel.wendland(1, 0), 2.0) == 0.5
        assert support_radius(Kernel.gauss(), 1.0) == math.inf
        assert support_radius(Kernel.phs(3), 7.0) == math.inf

    @pytest.mark.parametrize(
        "kern,order",
        [(Kernel.gauss(), 0), (Kernel.wendland(2, 1), 0), (Kernel.phs(1), 1), (Kernel.phs(3), 2),
         (Kernel.phs(5), 3), (Kernel.phs(2), 2), (Kernel.phs(4), 3)],
    )
    def test_order_table(self, kern, order):
        assert kern.order == order
        assert min_poly_degree(kern) == order - 1

    def test_min_poly_degree_examples(self):
        assert min_poly_degree(Kernel.gauss()) == -1
        assert min_poly_degree(Kernel.phs(3)) == 1
        assert min_poly_degree(Kernel.phs(2)) == 1


class TestParse:
    @pytest.mark.parametrize("kern", ALL_KERNELS, ids=_ids(ALL_KERNELS))
    def test_round_trip(self, kern):
        assert parse_kernel(kern.token()) == kern

    def test_case_insensitive(self):
        assert parse_kernel("Wendland:2:1") == Kernel.wendland(2, 1)
        assert parse_kernel("GAUSS") == Kernel.gauss()
        assert parse_kernel("TPS:2") == Kernel.phs(2)

    @pytest.mark.parametrize("bad", ["", "mq", "phs:2", "tps:3", "wendland:1", "wendland:5:1", "phs:x"])
    def test_unknown_tokens(self, bad):
        with pytest.raises(ValueError):
            parse_kernel(bad)


class TestRadialAntiderivative:
    @pytest.mark.parametrize("kern", ALL_KERNELS, ids=_ids(ALL_KERNELS))
    @pytest.mark.parametrize("rho", [0.0, 0.3, 1.0, 2.5])
    def test_against_quadrature(self, kern, rho):
        want = quad(lambda r: kernel_eval(kern, r) * r, 0, rho, epsabs=1e-14, epsrel=1e-13,
                    points=[1.0] if 0 < 1 < rho else None)[0]
        assert float(kern.radial_antiderivative(rho)) == pytest.approx(want, rel=1e-11, abs=1e-14)


@given(st.floats(min_value=0, max_value=50, allow_nan=False))
def test_gauss_bounded(r):
    v = kernel_eval(Kernel.gauss(), r)
    assert 0.0 <= v <= 1.0


@given(st.floats(min_value=0, max_value=1e3), st.sampled_from(WENDLANDS))
def test_wendland_values_in_unit_interval(r, kern):
    v = kernel_eval(kern, r)
    assert -1e-15 <= v <= 1.0 + 1e-15
