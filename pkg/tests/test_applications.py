"""Two-center overlaps and their momentum-space forms, route against route."""

import math

import numpy as np
import pytest

from quadred.applications import (
    FourierSpec,
    YukawaPairSpec,
    cheshire_check,
    fourier_pair_erfi,
    fourier_pair_tau,
    hydrogenic_pair,
    hydrogenic_pair_equal,
    yukawa_pair,
    yukawa_pair_equal,
    yukawa_pair_oracle,
    yukawa_pair_reduced,
    yukawa_pair_reduced_alt,
)

SQPI = math.sqrt(math.pi)


class TestYukawaClosedForms:
    def test_reference_point(self):
        expected = 4.0 * math.pi * (math.exp(-1.0) - math.exp(-2.0)) / 3.0
        assert yukawa_pair(YukawaPairSpec(1.0, 2.0, 1.0)) == pytest.approx(expected, rel=1e-14)

    def test_symmetry(self):
        a = yukawa_pair(YukawaPairSpec(1.0, 2.0, 1.0))
        b = yukawa_pair(YukawaPairSpec(2.0, 1.0, 1.0))
        assert a == pytest.approx(b, rel=1e-14)

    def test_small_separation_limit(self):
        # x2 -> 0 limit is 4 pi/(eta1 + eta2)
        val = yukawa_pair(YukawaPairSpec(1.0, 2.0, 1e-6))
        assert val == pytest.approx(4.0 * math.pi / 3.0, rel=1e-4)

    def test_equal_at_origin(self):
        assert yukawa_pair_equal(1.0, 0.0) == pytest.approx(2.0 * math.pi, rel=1e-14)

    def test_equal_general(self):
        assert yukawa_pair_equal(1.0, 1.0) == pytest.approx(2.0 * math.pi / math.e, rel=1e-14)

    def test_equal_is_the_limit(self):
        near = yukawa_pair(YukawaPairSpec(1.0, 1.0 + 1e-5, 1.0))
        assert near == pytest.approx(yukawa_pair_equal(1.0, 1.0), rel=1e-4)

    def test_equal_eta_routed_to_limit_form(self):
        with pytest.raises(ValueError):
            yukawa_pair(YukawaPairSpec(1.0, 1.0, 1.0))


class TestYukawaRoutes:
    def test_reference_point_all_routes(self):
        spec = YukawaPairSpec(1.0, 2.0, 1.0)
        cf = yukawa_pair(spec)
        assert complex(yukawa_pair_reduced(spec).value).real == pytest.approx(cf, rel=1e-8)
        assert complex(yukawa_pair_oracle(spec).value).real == pytest.approx(cf, rel=1e-6)

    def test_route_agreement_random(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            e1 = float(rng.uniform(0.4, 3.0))
            e2 = float(rng.uniform(0.4, 3.0))
            if abs(e1 - e2) < 1e-3:
                e2 += 0.1
            x2 = float(rng.uniform(0.2, 3.0))
            spec = YukawaPairSpec(e1, e2, x2)
            cf = yukawa_pair(spec)
            red = complex(yukawa_pair_reduced(spec).value).real
            orc = complex(yukawa_pair_oracle(spec).value).real
            assert red == pytest.approx(cf, rel=1e-6)
            assert orc == pytest.approx(cf, rel=1e-6)
            assert orc == pytest.approx(red, rel=1e-6)

    def test_exponent_choice_invariance(self):
        # f = t^(3/2) at (4,4,0) equals mu = 0 at (1,1,3)
        for spec in (YukawaPairSpec(1.0, 2.0, 1.0), YukawaPairSpec(2.2, 0.7, 0.6)):
            a = complex(yukawa_pair_reduced(spec).value).real
            b = complex(yukawa_pair_reduced_alt(spec).value).real
            assert a == pytest.approx(b, rel=1e-8)

    def test_equal_range_route(self):
        spec = YukawaPairSpec(1.0, 1.0, 1.0)
        red = complex(yukawa_pair_reduced(spec).value).real
        assert red == pytest.approx(yukawa_pair_equal(1.0, 1.0), rel=1e-8)


class TestHydrogenic:
    def test_derivative_definition(self):
        # equals -(eta1^(3/2)/sqrt(pi)) d/d(eta1) of the pair overlap
        e1, e2, x2 = 2.0, 1.0, 1.0
        step = 1e-5
        fd = (
            yukawa_pair(YukawaPairSpec(e1 + step, e2, x2))
            - yukawa_pair(YukawaPairSpec(e1 - step, e2, x2))
        ) / (2.0 * step)
        expected = -(e1**1.5 / SQPI) * fd
        assert hydrogenic_pair(YukawaPairSpec(e1, e2, x2)) == pytest.approx(expected, rel=1e-5)

    def test_equal_limit_form(self):
        eta, x2 = 1.0, 1.0
        closed = SQPI * (1.0 + x2 * eta) / math.sqrt(eta) * math.exp(-eta * x2)
        assert hydrogenic_pair_equal(eta, x2) == pytest.approx(closed, rel=1e-14)
        near = hydrogenic_pair(YukawaPairSpec(1.0, 1.0 + 1e-5, 1.0))
        assert near == pytest.approx(closed, rel=1e-4)


class TestFourier:
    def test_cross_parametrization(self):
        for (k, chi, e1, e2, x2) in [
            (1.0, 0.0, 1.0, 0.5, 1.0),
            (2.0, 1.0, 1.0, 2.0, 0.5),
            (0.5, -0.2, 1.5, 1.5, 2.0),
        ]:
            spec = FourierSpec(k, chi, e1, e2, x2)
            a = fourier_pair_erfi(spec)
            b = fourier_pair_tau(spec)
            assert a == pytest.approx(b, rel=1e-6)

    def test_real_when_phase_vanishes(self):
        spec = FourierSpec(1.0, 0.0, 1.0, 0.5, 1.0)
        val = fourier_pair_erfi(spec)
        assert abs(val.imag) <= 1e-10 * abs(val.real)

    def test_small_k_matches_static_pair(self):
        spec = FourierSpec(1e-3, 0.0, 1.0, 2.0, 1.0)
        static = yukawa_pair(YukawaPairSpec(1.0, 2.0, 1.0))
        assert fourier_pair_erfi(spec).real == pytest.approx(static, rel=1e-3)

    def test_tau_at_k0_equal_ranges(self):
        spec = FourierSpec(0.0, 0.0, 1.0, 1.0, 1.0)
        assert fourier_pair_tau(spec).real == pytest.approx(2.0 * math.pi / math.e, rel=1e-10)

    def test_hermiticity(self):
        up = fourier_pair_erfi(FourierSpec(1.0, 0.5, 1.0, 2.0, 1.0))
        dn = fourier_pair_erfi(FourierSpec(1.0, -0.5, 1.0, 2.0, 1.0))
        assert up.conjugate() == pytest.approx(dn, rel=1e-10)

    def test_colinear_boundary(self):
        # |k.x2| = k*x2 saturates the Cauchy-Schwarz bound, where the
        # kernel's Gaussian growth/decay cancellation is exact; large x2
        # additionally pushes the factor through the denormal range
        for s in (+1.0, -1.0):
            for (e1, e2) in ((1.0, 0.6), (0.7, 1.8)):
                spec = FourierSpec(0.5, s * 0.5 * 8.0, e1, e2, 8.0)
                a = fourier_pair_erfi(spec)
                b = fourier_pair_tau(spec)
                assert a == pytest.approx(b, rel=1e-6, abs=1e-9)

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="k_dot_x2"):
            FourierSpec(1.0, 2.0, 1.0, 1.0, 1.0)

    def test_semi_numeric_rule_route(self):
        # the same quantity through the catalog's inner-integral rule with
        # an imaginary h: a third, fully independent route
        from quadred.applications import fourier_params
        from quadred.catalog import get_rule
        from quadred.params import TestIntegrand

        spec = FourierSpec(1.0, 0.4, 1.0, 0.7, 0.9)
        res = get_rule("R1-rint").reduce_to_1d(fourier_params(spec), TestIntegrand(1.0, 1.5, 0.0))
        via_rule = SQPI * complex(res.value)
        assert via_rule == pytest.approx(fourier_pair_tau(spec), rel=1e-8)
        assert via_rule == pytest.approx(fourier_pair_erfi(spec), rel=1e-8)


class TestCheshire:
    def test_wrapped_derivative_agreement(self):
        rep = cheshire_check(1.0, 1.0)
        assert rep.spec.eta1 == 1.0 and rep.spec.eta2 == 0.5
        assert rep.rel_diff <= 1e-6

    def test_with_oblique_phase(self):
        rep = cheshire_check(1.0, 1.0, k_dot_x2=0.25)
        assert rep.rel_diff <= 1e-6
