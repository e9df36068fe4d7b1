"""Moment closed forms against independent scipy quadrature."""
import math

import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from rbfcubature.kernels import Kernel, kernel_eval
from rbfcubature.moments import (
    CLOSED_FORM,
    IREF_POWERS,
    iref,
    moment_closed_form,
    moment_gaussian_1d,
    moment_gaussian_2d,
    moment_phs_2d,
    moment_phs_evenlog_1d,
    moment_phs_odd_1d,
    moment_quadrature,
    monomial_moments,
    poly_moments,
    rbf_moments,
    shape_parameters,
)
from rbfcubature.pointsets import PointSet, Rectangle, equidistant, halton
from rbfcubature.polybasis import MonomialBasis, build_dops

UNIT1 = Rectangle.unit(1)
UNIT2 = Rectangle.unit(2)
PHS2D = [Kernel.phs(p) for p in IREF_POWERS]


def oracle_1d(kernel, eps, xn, a, b):
    f = lambda x: kernel_eval(kernel, eps * abs(x - xn))  # noqa: E731
    return quad(f, a, b, points=[xn] if a < xn < b else None, epsabs=1e-15, epsrel=1e-14, limit=200)[0]


WENDLAND_CLOSED = {
    (2, 0): lambda r: (1 - r) ** 2,
    (2, 1): lambda r: (1 - r) ** 4 * (4 * r + 1),
    (3, 2): lambda r: (1 - r) ** 6 * (35 * r * r + 18 * r + 3) / 3,
}


def oracle_2d_compact(kernel, eps, xn, rect):
    # iterated quad over the support disc chord; smooth except at the centre
    (a, c), (b, d) = rect.lo, rect.hi
    R = 1.0 / eps
    x0, y0 = xn

    def inner(x):
        half = math.sqrt(max(R * R - (x - x0) ** 2, 0.0))
        lo, hi = max(c, y0 - half), min(d, y0 + half)
        if hi <= lo:
            return 0.0
        phi = WENDLAND_CLOSED[(kernel.D, kernel.k)]
        g = lambda y: phi(min(eps * math.hypot(x - x0, y - y0), 1.0))  # noqa: E731
        pts = [y0] if lo < y0 < hi else None
        return quad(g, lo, hi, points=pts, epsabs=1e-14, epsrel=1e-12, limit=100)[0]

    lo, hi = max(a, x0 - R), min(b, x0 + R)
    pts = [x0] if lo < x0 < hi else None
    return quad(inner, lo, hi, points=pts, epsabs=1e-14, epsrel=1e-12, limit=100)[0]


def oracle_2d(kernel, eps, xn, rect):
    # split at the centre so each piece is smooth apart from its corner
    (a, c), (b, d) = rect.lo, rect.hi
    total = 0.0
    for x0, x1 in ((a, xn[0]), (xn[0], b)):
        for y0, y1 in ((c, xn[1]), (xn[1], d)):
            if x1 > x0 and y1 > y0:
                f = lambda y, x: kernel_eval(kernel, eps * math.hypot(x - xn[0], y - xn[1]))  # noqa: E731
                total += dblquad(f, x0, x1, y0, y1, epsabs=1e-14, epsrel=1e-13)[0]
    return total


class TestGaussian1D:
    def test_frozen_value(self):
        # oracle: sqrt(pi) * erf(1/2)
        assert moment_gaussian_1d(1.0, 0.5, 0, 1) == pytest.approx(0.9225620128255849, rel=1e-14)

    def test_large_eps_full_mass(self):
        assert moment_gaussian_1d(100.0, 0.5, 0, 1) == pytest.approx(math.sqrt(math.pi) / 100, rel=1e-14)

    def test_reflection(self):
        assert moment_gaussian_1d(3.0, 0.3, 0, 1) == pytest.approx(moment_gaussian_1d(3.0, 0.7, 0, 1), rel=1e-15)

    def test_rejects_bad_eps(self):
        with pytest.raises(ValueError):
            moment_gaussian_1d(0.0, 0.5, 0, 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_oracle(self, seed):
        rng = np.random.default_rng(seed)
        eps = 10 ** rng.uniform(-2, 2)
        xn = rng.uniform(-1, 2)
        want = oracle_1d(Kernel.gauss(), eps, xn, -1, 2)
        assert moment_gaussian_1d(eps, xn, -1, 2) == pytest.approx(want, rel=1e-12)

    def test_monotone_in_eps(self):
        eps = np.logspace(-2, 2, 60)
        m = moment_gaussian_1d(eps, 0.4, 0, 1)
        assert np.all(np.diff(m) < 0)


class TestPhs1D:
    def test_odd_examples(self):
        assert moment_phs_odd_1d(1, 0.0, 0, 1) == 0.5
        assert moment_phs_odd_1d(3, 0.5, 0, 1) == pytest.approx(0.03125, rel=1e-15)
        assert moment_phs_odd_1d(1, 0.5, 0, 1) == pytest.approx(0.25, rel=1e-15)

    def test_evenlog_endpoints(self):
        assert moment_phs_evenlog_1d(2, 0.0, 0, 1) == pytest.approx(-1 / 9, rel=1e-15)
        assert moment_phs_evenlog_1d(2, 1.0, 0, 1) == pytest.approx(-1 / 9, rel=1e-15)

    def test_evenlog_midpoint(self):
        # oracle: 2 * int_0^{1/2} t^2 log t dt
        assert moment_phs_evenlog_1d(2, 0.5, 0, 1) == pytest.approx(-0.08554004282439057, rel=1e-12)

    def test_outside_rejected(self):
        with pytest.raises(ValueError):
            moment_phs_odd_1d(3, 1.2, 0, 1)
        with pytest.raises(ValueError):
            moment_phs_evenlog_1d(2, -0.1, 0, 1)

    @pytest.mark.parametrize("power", [1, 2, 3, 4, 5, 6, 7])
    def test_against_oracle(self, power):
        rng = np.random.default_rng(power)
        for _ in range(8):
            a = rng.uniform(-2, 0)
            b = a + rng.uniform(0.1, 4)
            xn = rng.uniform(a, b)
            fn = moment_phs_odd_1d if power % 2 else moment_phs_evenlog_1d
            want = oracle_1d(Kernel.phs(power), 1.0, xn, a, b)
            assert fn(power, xn, a, b) == pytest.approx(want, rel=1e-11, abs=1e-14)


class TestGaussian2D:
    def test_product_value(self):
        assert moment_gaussian_2d(1.0, [0.5, 0.5], UNIT2) == pytest.approx(0.9225620128255849**2, rel=1e-14)

    def test_swap_symmetry(self):
        a = moment_gaussian_2d(2.0, [0.3, 0.7], UNIT2)
        assert a == pytest.approx(moment_gaussian_2d(2.0, [0.7, 0.3], UNIT2), rel=1e-15)

    def test_against_2d_oracle(self):
        rect = Rectangle.parse("0,2,-1,1")
        want = oracle_2d(Kernel.gauss(), 1.7, (0.4, 0.2), rect)
        assert moment_gaussian_2d(1.7, [0.4, 0.2], rect) == pytest.approx(want, rel=1e-10)


class TestIref:
    @pytest.mark.parametrize("kern", PHS2D, ids=lambda k: k.token())
    def test_degenerate(self, kern):
        assert iref(kern, 0.0, 1.3) == 0.0
        assert iref(kern, 1.3, 0.0) == 0.0

    def test_cubic_unit(self):
        want = (3 * math.asinh(1) + 7 * math.sqrt(2)) / 40
        assert iref(Kernel.phs(3), 1.0, 1.0) == pytest.approx(want, rel=1e-14)
        assert want == pytest.approx(0.3135903924, rel=1e-9)

    @pytest.mark.parametrize("kern", PHS2D, ids=lambda k: k.token())
    @pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (0.3, 1.7), (2.0, 0.25)])
    def test_triangle_oracle(self, kern, alpha, beta):
        f = lambda y, x: kernel_eval(kern, math.hypot(x, y))  # noqa: E731
        want = dblquad(f, 0, alpha, 0, lambda x: beta * x / alpha, epsabs=1e-14, epsrel=1e-13)[0]
        assert iref(kern, alpha, beta) == pytest.approx(want, rel=1e-11)

    def test_r7_prefactor_is_3456(self):
        # a 3346 denominator would be off by 3456/3346 - 1 ~ 3.3%
        kern = Kernel.phs(7)
        f = lambda y, x: math.hypot(x, y) ** 7  # noqa: E731
        want = dblquad(f, 0, 1, 0, lambda x: x, epsabs=1e-15, epsrel=1e-14)[0]
        assert iref(kern, 1.0, 1.0) == pytest.approx(want, rel=1e-13)
        assert abs(iref(kern, 1.0, 1.0) * 3456 / 3346 / want - 1) > 0.03

    def test_unsupported_kernel(self):
        with pytest.raises(ValueError):
            iref(Kernel.gauss(), 1.0, 1.0)
        with pytest.raises(ValueError):
            iref(Kernel.phs(1), 1.0, 1.0)


class TestPhs2D:
    def test_centre_is_eight_triangles(self):
        k = Kernel.phs(3)
        assert moment_phs_2d(k, [0.5, 0.5], UNIT2) == pytest.approx(8 * iref(k, 0.5, 0.5), rel=1e-14)

    def test_corner_two_triangles(self):
        k = Kernel.phs(3)
        got = moment_phs_2d(k, [0.0, 0.0], UNIT2)
        assert got == pytest.approx(iref(k, 1.0, 1.0) * 2, rel=1e-14)

    def test_tps_oracle(self):
        want = oracle_2d(Kernel.phs(2), 1.0, (0.3, 0.7), UNIT2)
        assert moment_phs_2d(Kernel.phs(2), [0.3, 0.7], UNIT2) == pytest.approx(want, rel=1e-9)

    @pytest.mark.parametrize("kern", PHS2D, ids=lambda k: k.token())
    def test_edges_and_random_centres(self, kern):
        rng = np.random.default_rng(kern.exponent)
        rect = Rectangle.parse("-0.5,1.5,0,0.75")
        centres = [(-0.5, 0.3), (1.5, 0.75), (0.2, 0.0)] + [tuple(rng.uniform(rect.lo, rect.hi)) for _ in range(4)]
        for xn in centres:
            want = oracle_2d(kern, 1.0, xn, rect)
            assert moment_phs_2d(kern, list(xn), rect) == pytest.approx(want, rel=1e-9)

    @pytest.mark.parametrize("kern", PHS2D, ids=lambda k: k.token())
    def test_dihedral_invariance(self, kern):
        x, y = 0.23, 0.61
        base = moment_phs_2d(kern, [x, y], UNIT2)
        images = [(1 - x, y), (x, 1 - y), (1 - x, 1 - y), (y, x), (1 - y, x), (y, 1 - x), (1 - y, 1 - x)]
        for p in images:
            assert moment_phs_2d(kern, list(p), UNIT2) == pytest.approx(base, rel=1e-13)

    def test_outside_rejected(self):
        with pytest.raises(ValueError):
            moment_phs_2d(Kernel.phs(3), [1.1, 0.5], UNIT2)


class TestQuadratureMoments:
    def test_hat(self):
        assert moment_quadrature(Kernel.wendland(1, 0), 2.0, [0.5], UNIT1) == pytest.approx(0.5, abs=1e-13)

    def test_wendland_interior_support(self):
        # int_{-1}^{1} (1-|t|)^3 (3|t|+1) dt = 2 * int_0^1 s^3 (4 - 3s) ds = 4/5
        eps = 4.0
        got = moment_quadrature(Kernel.wendland(1, 1), eps, [0.5], UNIT1)
        assert got == pytest.approx(0.8 / eps, rel=1e-13)

    def test_gaussian_cross_check(self):
        got = moment_quadrature(Kernel.gauss(), 2.3, [0.15], UNIT1)
        assert got == pytest.approx(moment_gaussian_1d(2.3, 0.15, 0, 1), abs=1e-12)

    @pytest.mark.parametrize("D,k", [(2, 0), (2, 1), (3, 2)])
    @pytest.mark.parametrize("eps", [0.7, 3.0, 11.0])
    def test_wendland_2d_oracle(self, D, k, eps):
        kern = Kernel.wendland(D, k)
        for xn in [(0.5, 0.5), (0.0, 0.2), (1.0, 1.0), (0.83, 0.07)]:
            want = oracle_2d_compact(kern, eps, xn, UNIT2)
            assert moment_quadrature(kern, eps, xn, UNIT2) == pytest.approx(want, rel=1e-10, abs=1e-13)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            moment_quadrature(Kernel.gauss(), 1.0, [0.5], UNIT1, tol=0)


class TestPolyMoments:
    def test_examples(self):
        assert monomial_moments(MonomialBasis(1, 1), UNIT1)[1] == 0.5
        assert monomial_moments(MonomialBasis(2, 2), UNIT2)[4] == 0.25
        rect = Rectangle.parse("1,3,-1,4")
        assert monomial_moments(MonomialBasis(0, 2), rect)[0] == rect.volume

    def test_dop_moments(self):
        ps = halton(UNIT2, 30)
        dops = build_dops(ps, 2, 1.0)
        m = poly_moments(dops, UNIT2)
        assert m[0] == pytest.approx(1.0, rel=1e-14)  # constant DOP is |Omega|^{-1/2} = 1
        # tensor Simpson rule is exact for quadratics
        xs = np.array([0.0, 0.5, 1.0])
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        vals = dops(np.column_stack([X.ravel(), Y.ravel()])).reshape(3, 3, -1)
        w = np.array([1, 4, 1]) / 6
        exact = np.einsum("i,j,ijk->k", w, w, vals)
        np.testing.assert_allclose(m, exact, rtol=1e-12, atol=1e-13)

    def test_none_basis(self):
        assert poly_moments(None, UNIT1).size == 0


class TestShapes:
    def test_constant(self):
        ps = equidistant(UNIT1, 5)
        np.testing.assert_array_equal(shape_parameters(ps, 2.0, "constant"), np.full(5, 2.0))

    def test_boundary_halved_1d(self):
        ps = equidistant(UNIT1, 5)
        np.testing.assert_array_equal(shape_parameters(ps, 2.0, "boundary-halved"), [1, 2, 2, 2, 1])

    def test_boundary_halved_2d_shapes(self):
        ps = equidistant(UNIT2, 3)
        shapes = shape_parameters(ps, 4.0, "boundary-halved").reshape(3, 3)
        s2 = 4.0 / math.sqrt(2)
        np.testing.assert_allclose(shapes, [[2, s2, 2], [s2, 4, s2], [2, s2, 2]])

    def test_boundary_halved_2d_equal_moments(self):
        # edge points next to a corner have supports clipped by the other edge,
        # so only they deviate
        n, h = 8, 1 / 7
        ps = equidistant(UNIT2, n)
        shapes = shape_parameters(ps, 1 / h, "boundary-halved")
        m = rbf_moments(Kernel.wendland(2, 1), shapes, ps).rbf.reshape(n, n)
        near_corner = np.zeros((n, n), bool)
        for i, j in [(0, 1), (1, 0), (0, n - 2), (1, n - 1), (n - 2, 0), (n - 1, 1), (n - 2, n - 1), (n - 1, n - 2)]:
            near_corner[i, j] = True
        np.testing.assert_allclose(m[~near_corner], m[3, 3], rtol=1e-10)
        assert np.all(np.abs(m[near_corner] / m[3, 3] - 1) > 1e-6)

    def test_phs_empty(self):
        assert shape_parameters(equidistant(UNIT1, 5), 1.0, "constant", Kernel.phs(3)).size == 0

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            shape_parameters(equidistant(UNIT1, 5), 1.0, "adaptive")


class TestRbfMoments:
    @pytest.mark.parametrize("kern", [Kernel.gauss(), Kernel.phs(3), Kernel.phs(2), Kernel.wendland(1, 1)],
                             ids=lambda k: k.token())
    def test_vectorised_matches_scalar(self, kern):
        ps = halton(UNIT1, 12)
        shapes = shape_parameters(ps, 3.0, "constant", kern)
        mv = rbf_moments(kern, shapes, ps, MonomialBasis(1, 1))
        for i, x in enumerate(ps.points):
            eps = shapes[i] if len(shapes) else 1.0
            ref = moment_closed_form(kern, eps, x, UNIT1)
            if ref is None:
                ref = moment_quadrature(kern, eps, x, UNIT1)
            assert mv.rbf[i] == pytest.approx(ref, rel=1e-13, abs=1e-15)
        np.testing.assert_allclose(mv.poly, [1.0, 0.5])

    def test_tags_and_csv(self, tmp_path):
        ps = halton(UNIT2, 6)
        mv = rbf_moments(Kernel.gauss(), np.ones(6), ps)
        assert set(mv.tags) == {CLOSED_FORM}
        mq = rbf_moments(Kernel.wendland(2, 1), np.ones(6), ps)
        assert all(t.startswith("quadrature") for t in mq.tags)
        mv.to_csv(tmp_path / "m.csv")
        lines = (tmp_path / "m.csv").read_text().splitlines()
        assert lines[0] == "index,value,method_tag" and len(lines) == 7

    def test_nonnegative_kernels_give_nonnegative_moments(self):
        ps = halton(UNIT2, 20)
        for kern in (Kernel.gauss(), Kernel.wendland(2, 2), Kernel.phs(3), Kernel.phs(5)):
            shapes = shape_parameters(ps, 5.0, "constant", kern)
            assert np.all(rbf_moments(kern, shapes, ps).rbf >= 0)

    def test_shape_count_checked(self):
        ps = halton(UNIT1, 4)
        with pytest.raises(ValueError):
            rbf_moments(Kernel.gauss(), np.ones(3), ps)
