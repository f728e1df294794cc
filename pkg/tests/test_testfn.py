"""Tests for the wave-type weight family and its identity checks."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from lifespanlab.errors import (
    DegeneratePoint,
    EmptySamples,
    OutsideCone,
    PreconditionViolation,
    TooCloseToAxis,
)
from lifespanlab.special import HypTriple, hyp2f1_integral, hyp2f1_series
from lifespanlab import testfn


def spec_of(beta, N, V0):
    return testfn.TestFunctionSpec(beta=beta, N=N, V0=V0)


class TestSpecValidation:
    def test_field_guards(self):
        with pytest.raises(PreconditionViolation):
            spec_of(0.0, 3, 0.0)
        with pytest.raises(PreconditionViolation):
            spec_of(1.0, 2, 0.0)
        with pytest.raises(PreconditionViolation):
            spec_of(1.0, 3, -0.5)

    def test_no_route_triple_rejected(self):
        # beta >= N-1 and (N-1+V0)/2 >= N-1 leaves no admissible slot for
        # the integral route near the cone boundary.
        with pytest.raises(PreconditionViolation):
            spec_of(2.5, 3, 3.5)

    def test_regime_tag(self):
        assert spec_of(0.5, 3, 0.0).regime == "sub"
        assert spec_of(2.0, 3, 0.0).regime == "super"
        with pytest.raises(PreconditionViolation):
            spec_of(1.0, 3, 0.0).regime


class TestPhi:
    def test_axis_ray_closed_form(self):
        # On r = 0 the hypergeometric factor is 1, leaving (2+t)^(-beta).
        s = spec_of(1.0, 3, 0.0)
        assert_allclose(testfn.phi(s, 0.0, 1.0), 1.0 / 3.0, rtol=1e-15)
        assert_allclose(testfn.phi(s, 0.0, 3.0), 1.0 / 5.0, rtol=1e-15)
        s2 = spec_of(0.7, 4, 0.3)
        for t in (0.2, 1.0, 7.5):
            assert_allclose(testfn.phi(s2, 0.0, t), (2.0 + t) ** -0.7, rtol=1e-14)

    def test_dual_path_cross_check(self):
        # Series and integral evaluations of the hypergeometric factor
        # agree, and phi is the prefactor times either.
        s = spec_of(0.5, 3, 0.5)
        r, t = 1.0, 2.0
        z = 2.0 * r / (2.0 + t + r)
        by_series = hyp2f1_series(s.triple, z)
        by_integral = hyp2f1_integral(s.triple, z)
        assert abs(by_series - by_integral) / (1 + abs(by_series)) < 1e-10
        assert_allclose(
            testfn.phi(s, r, t), (2.0 + t + r) ** -0.5 * by_series, rtol=1e-13
        )

    def test_vector_matches_scalar(self):
        s = spec_of(1.2, 4, 0.6)
        t = 3.0
        radii = np.array([0.0, 0.4, 1.7, 3.4, 4.9])
        vec = testfn.phi(s, radii, t)
        assert_allclose(
            vec, [testfn.phi(s, r, t) for r in radii], rtol=1e-14
        )

    def test_cone_guards(self):
        s = spec_of(1.0, 3, 0.0)
        with pytest.raises(OutsideCone):
            testfn.phi(s, 3.0, 1.0)
        with pytest.raises(DegeneratePoint):
            testfn.phi(s, 0.0, 0.0)
        with pytest.raises(PreconditionViolation):
            testfn.phi(s, -0.1, 1.0)
        with pytest.raises(PreconditionViolation):
            testfn.phi(s, 0.5, -1.0)

    def test_boundary_layer_rejected(self):
        s = spec_of(1.0, 3, 0.0)
        t = 1.0
        r = (2.0 + t) * (1.0 - 1e-10)
        with pytest.raises(OutsideCone):
            testfn.phi(s, r, t)

    @given(
        beta=st.floats(0.1, 2.5),
        N=st.integers(3, 5),
        V0=st.floats(0.0, 2.0),
        x=st.floats(0.0, 0.99),
        t=st.floats(0.01, 50.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_positivity(self, beta, N, V0, x, t):
        assume(beta < N - 1 or (N - 1 + V0) / 2 < N - 1)
        s = spec_of(beta, N, V0)
        assert testfn.phi(s, x * (2.0 + t), t) > 0.0


class TestDtIdentity:
    def test_axis_example(self):
        s = spec_of(1.0, 3, 0.0)
        assert testfn.phi_dt_identity_residual(s, 0.0, 2.0, 1e-4) < 1e-7

    def test_off_axis_examples(self):
        assert (
            testfn.phi_dt_identity_residual(spec_of(0.7, 4, 0.3), 1.5, 3.0, 1e-4)
            < 1e-6
        )
        assert (
            testfn.phi_dt_identity_residual(spec_of(2.0, 3, 0.9), 2.0, 5.0, 1e-4)
            < 1e-6
        )

    def test_second_order_decay(self):
        # Measured at h large enough for truncation to dominate roundoff.
        for spec, r, t in [
            (spec_of(0.7, 4, 0.3), 1.5, 3.0),
            (spec_of(2.0, 3, 0.9), 2.0, 5.0),
        ]:
            r1 = testfn.phi_dt_identity_residual(spec, r, t, 2e-2)
            r2 = testfn.phi_dt_identity_residual(spec, r, t, 1e-2)
            assert 3.4 < r1 / r2 < 4.6

    def test_guards(self):
        s = spec_of(1.0, 3, 0.0)
        with pytest.raises(PreconditionViolation):
            testfn.phi_dt_identity_residual(s, 1.0, 0.0, 1e-3)
        with pytest.raises(PreconditionViolation):
            testfn.phi_dt_identity_residual(s, 1.0, 1.0, 0.0)


class TestPdeResidual:
    def test_magnitude_examples(self):
        assert testfn.pde_residual(spec_of(1.0, 3, 0.0), 1.0, 2.0, 1e-3) < 1e-5
        assert testfn.pde_residual(spec_of(1.2, 5, 1.0), 2.0, 4.0, 1e-3) < 1e-5

    def test_convergence_order(self):
        r1 = testfn.pde_residual(spec_of(0.5, 3, 0.5), 0.5, 1.0, 4e-2)
        r2 = testfn.pde_residual(spec_of(0.5, 3, 0.5), 0.5, 1.0, 2e-2)
        # order 2 within [1.8, 2.2] translates to a ratio in [2^1.8, 2^2.2]
        assert 2.0 ** 1.8 < r1 / r2 < 2.0 ** 2.2

    def test_guards(self):
        s = spec_of(1.0, 3, 0.0)
        with pytest.raises(TooCloseToAxis):
            testfn.pde_residual(s, 1e-4, 1.0, 1e-3)
        with pytest.raises(OutsideCone):
            testfn.pde_residual(s, 2.95, 1.0, 0.1)


class TestEnvelope:
    def test_axis_ratio_is_one(self):
        # On the axis the weight equals the comparison weight exactly.
        s = spec_of(0.5, 3, 0.0)
        for t in (0.5, 2.0, 40.0):
            assert_allclose(
                testfn.phi(s, 0.0, t) / (2.0 + t) ** -0.5, 1.0, rtol=1e-13
            )

    def test_sub_regime_extrema(self):
        s = spec_of(0.5, 3, 0.0)
        samples = testfn.cone_samples(1000, 100.0, seed=11)
        lo, hi = testfn.envelope_ratio(s, samples)
        assert 0.0 < lo <= hi < np.inf
        # The two-sided constant is t-independent: doubling the horizon
        # moves the extrema by well under 10%.
        lo2, hi2 = testfn.envelope_ratio(
            s, testfn.cone_samples(1000, 200.0, seed=11)
        )
        assert abs(lo2 - lo) / lo < 0.1
        assert abs(hi2 - hi) / hi < 0.1

    def test_sub_regime_seed_stability(self):
        s = spec_of(0.5, 3, 0.0)
        spread1 = np.divide(*testfn.envelope_ratio(s, testfn.cone_samples(1000, 100.0, seed=11))[::-1])
        spread2 = np.divide(*testfn.envelope_ratio(s, testfn.cone_samples(1000, 100.0, seed=77))[::-1])
        assert abs(spread2 - spread1) / spread1 < 0.1

    def test_super_regime_boundary_samples(self):
        s = spec_of(2.0, 3, 0.0)
        samples = [
            ((2.0 + t) * (1.0 - 10.0 ** -k), t)
            for t in (0.5, 3.0, 20.0)
            for k in (2, 3, 4, 5)
        ]
        lo, hi = testfn.envelope_ratio(s, samples)
        assert 0.0 < lo <= hi < np.inf

    def test_empty_samples(self):
        with pytest.raises(EmptySamples):
            testfn.envelope_ratio(spec_of(0.5, 3, 0.0), [])


class TestConeSamples:
    def test_deterministic(self):
        a = testfn.cone_samples(64, 50.0, seed=5)
        b = testfn.cone_samples(64, 50.0, seed=5)
        assert a == b

    def test_inside_cone(self):
        for r, t in testfn.cone_samples(256, 30.0, seed=9):
            assert 0.0 <= r < 2.0 + t
            assert 0.0 <= t <= 30.0

    def test_guards(self):
        with pytest.raises(PreconditionViolation):
            testfn.cone_samples(0, 10.0, seed=1)
        with pytest.raises(PreconditionViolation):
            testfn.cone_samples(10, 0.0, seed=1, t_min=1.0)
