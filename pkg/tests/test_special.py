"""Tests for the dual-route Gauss hypergeometric evaluator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from lifespanlab.errors import (
    InvalidTriple,
    NonConvergence,
    PreconditionViolation,
)
from lifespanlab.special import (
    HypTriple,
    beta_fn,
    hyp2f1,
    hyp2f1_integral,
    hyp2f1_ode_residual,
    hyp2f1_series,
    pochhammer,
)

# Closed-form oracle: 2F1(1, 1; 2; z) = -ln(1 - z) / z.
def _log_oracle(z: float) -> float:
    return -math.log1p(-z) / z


def _random_admissible_triples(rng, n):
    """Triples with c > a > 0 so both evaluation routes apply."""
    for _ in range(n):
        a = rng.uniform(0.05, 3.0)
        b = rng.uniform(0.0, 4.0)
        c = a + rng.uniform(0.5, 4.0)
        yield HypTriple(a, b, c)


class TestPochhammer:
    def test_base_cases(self):
        assert pochhammer(2.5, 0) == 1.0
        assert pochhammer(1.0, 4) == 24.0
        assert_allclose(pochhammer(0.5, 2), 0.75, rtol=0, atol=1e-15)

    @given(
        d=st.floats(-5, 5, allow_nan=False),
        n=st.integers(min_value=0, max_value=30),
    )
    def test_recurrence(self, d, n):
        assert_allclose(pochhammer(d, n + 1), pochhammer(d, n) * (d + n), rtol=1e-12)

    def test_negative_order_rejected(self):
        with pytest.raises(PreconditionViolation):
            pochhammer(1.0, -1)


class TestBeta:
    def test_known_values(self):
        assert_allclose(beta_fn(1.0, 1.0), 1.0, rtol=1e-14)
        assert_allclose(beta_fn(2.0, 3.0), 1.0 / 12.0, rtol=1e-13)
        assert_allclose(beta_fn(0.5, 0.5), math.pi, rtol=1e-13)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x, y = rng.uniform(0.1, 6.0, size=2)
            assert_allclose(beta_fn(x, y), beta_fn(y, x), rtol=1e-13)

    def test_positivity_required(self):
        with pytest.raises(PreconditionViolation):
            beta_fn(0.0, 1.0)


class TestTriple:
    def test_degenerate_c_rejected(self):
        with pytest.raises(InvalidTriple):
            HypTriple(1.0, 1.0, 0.0)
        with pytest.raises(InvalidTriple):
            HypTriple(1.0, 1.0, -2.0)

    def test_admissibility_flag(self):
        assert HypTriple(0.5, 9.0, 2.0).euler_admissible
        assert not HypTriple(2.0, 1.0, 2.0).euler_admissible
        assert not HypTriple(-0.5, 1.0, 2.0).euler_admissible


class TestSeries:
    def test_value_at_zero_is_one(self):
        rng = np.random.default_rng(11)
        for t in _random_admissible_triples(rng, 20):
            assert hyp2f1_series(t, 0.0) == 1.0

    def test_terminating_series(self):
        # a = 0 terminates immediately: F = 1 for every z.
        assert hyp2f1_series(HypTriple(0.0, 5.0, 3.0), 0.7) == 1.0

    def test_log_closed_form(self):
        # 2F1(1,1;2;1/2) = 2 ln 2 = 1.3862943611198906
        val = hyp2f1_series(HypTriple(1.0, 1.0, 2.0), 0.5)
        assert_allclose(val, 1.3862943611198906, rtol=1e-13)
        for z in (0.1, 0.3, 0.6, 0.85):
            assert_allclose(
                hyp2f1_series(HypTriple(1.0, 1.0, 2.0), z), _log_oracle(z), rtol=1e-13
            )

    def test_symmetry_in_a_b(self):
        rng = np.random.default_rng(23)
        zs = rng.uniform(0.0, 0.9, size=100)
        for _ in range(100):
            a = rng.uniform(0.05, 4.0)
            b = rng.uniform(0.05, 4.0)
            c = rng.uniform(0.5, 6.0)
            z = float(rng.choice(zs))
            assert_allclose(
                hyp2f1_series(HypTriple(a, b, c), z),
                hyp2f1_series(HypTriple(b, a, c), z),
                rtol=1e-13,
            )

    def test_monotone_in_z_for_positive_parameters(self):
        # All series terms are positive, so F increases along z.
        rng = np.random.default_rng(31)
        zgrid = np.linspace(0.0, 0.9, 100)
        for t in _random_admissible_triples(rng, 20):
            if t.b <= 0:
                continue
            vals = hyp2f1_series(t, zgrid)
            assert np.all(np.diff(vals) >= -1e-12)

    def test_z_range_guard(self):
        with pytest.raises(PreconditionViolation):
            hyp2f1_series(HypTriple(1, 1, 2), 0.95)
        with pytest.raises(PreconditionViolation):
            hyp2f1_series(HypTriple(1, 1, 2), -0.1)
        with pytest.raises(PreconditionViolation):
            hyp2f1_series(HypTriple(1, 1, 2), 1.0)

    def test_cap_raises_nonconvergence(self):
        with pytest.raises(NonConvergence):
            hyp2f1_series(HypTriple(1.0, 1.0, 2.0), 0.9, max_terms=5)


class TestIntegral:
    def test_unit_value_when_b_zero(self):
        # b = 0 leaves the bare beta weight, normalized to 1.
        assert_allclose(hyp2f1_integral(HypTriple(1.0, 0.0, 2.0), 0.3), 1.0, rtol=1e-13)

    def test_log_closed_form(self):
        assert_allclose(
            hyp2f1_integral(HypTriple(1.0, 1.0, 2.0), 0.5), 2.0 * math.log(2.0), rtol=1e-12
        )

    def test_agrees_with_series_midrange(self):
        assert_allclose(
            hyp2f1_integral(HypTriple(1.5, 2.0, 3.0), 0.25),
            hyp2f1_series(HypTriple(1.5, 2.0, 3.0), 0.25),
            rtol=1e-11,
        )

    def test_admissibility_guard(self):
        with pytest.raises(PreconditionViolation):
            hyp2f1_integral(HypTriple(2.0, 1.0, 2.0), 0.5)
        with pytest.raises(PreconditionViolation):
            hyp2f1_integral(HypTriple(-1.0, 1.0, 2.0), 0.5)

    def test_path_agreement_seeded(self):
        rng = np.random.default_rng(101)
        for t in _random_admissible_triples(rng, 100):
            z = rng.uniform(0.0, 0.9)
            s = hyp2f1_series(t, z)
            i = hyp2f1_integral(t, z)
            assert abs(s - i) < 1e-10 * (1.0 + abs(s))


class TestDispatch:
    def test_routes_match_at_boundary(self):
        t = HypTriple(0.8, 1.2, 2.5)
        for z in (0.89, 0.9, 0.90001, 0.91):
            assert_allclose(hyp2f1(t, z), float(__import__("scipy.special", fromlist=["hyp2f1"]).hyp2f1(t.a, t.b, t.c, z)), rtol=1e-11)

    def test_symmetry_swap_route(self):
        # a-slot inadmissible (a = c) but b-slot fine; closed form (1-z)^-b with b-a swap:
        # 2F1(2, 1; 2; z) = (1-z)^-1.
        t = HypTriple(2.0, 1.0, 2.0)
        for z in (0.95, 0.999, 1 - 1e-7):
            assert_allclose(hyp2f1(t, z), 1.0 / (1.0 - z), rtol=1e-12)

    def test_no_route_raises(self):
        # Both slots inadmissible and z beyond the series range.
        with pytest.raises(NonConvergence):
            hyp2f1(HypTriple(3.0, 4.0, 2.5), 0.95)

    def test_scipy_cross_check_deep_z(self):
        sc = pytest.importorskip("scipy.special")
        rng = np.random.default_rng(5)
        for t in _random_admissible_triples(rng, 40):
            for z in (0.95, 0.999, 1 - 1e-6, 1 - 1e-9):
                ref = float(sc.hyp2f1(t.a, t.b, t.c, z))
                assert_allclose(hyp2f1(t, z), ref, rtol=5e-11, atol=1e-12)

    def test_vector_matches_scalar(self):
        t = HypTriple(0.7, 1.3, 2.4)
        zv = np.linspace(0.0, 0.999, 200)
        vec = hyp2f1(t, zv)
        scal = np.array([hyp2f1(t, float(z)) for z in zv])
        assert_allclose(vec, scal, rtol=1e-12, atol=1e-14)


class TestOdeResidual:
    def test_residual_small_on_log_case(self):
        # The closed-form phi satisfies the ODE exactly, so the residual is
        # pure O(h^2) finite-difference error.
        assert hyp2f1_ode_residual(HypTriple(1, 1, 2), 0.4, 1e-4) < 1e-6

    def test_residual_zero_for_constant_phi(self):
        # a = 0 makes phi identically 1 and ab = 0.
        assert hyp2f1_ode_residual(HypTriple(0.0, 3.0, 2.0), 0.5, 1e-4) < 1e-10

    def test_residual_generic_triple(self):
        assert hyp2f1_ode_residual(HypTriple(2.0, 1.5, 3.0), 0.2, 1e-4) < 1e-6

    def test_residual_seeded_points(self):
        # Central differences at h = 1e-4 carry an O(h^2) truncation error
        # proportional to the fourth derivative, so the sampled parameter
        # ranges are kept moderate to stay truncation-dominated below 1e-6.
        rng = np.random.default_rng(202)
        for _ in range(50):
            a = rng.uniform(0.05, 2.0)
            b = rng.uniform(0.0, 2.0)
            c = a + rng.uniform(0.5, 3.0)
            z = rng.uniform(0.05, 0.5)
            assert hyp2f1_ode_residual(HypTriple(a, b, c), z, 1e-4) < 1e-6

    def test_stencil_guard(self):
        with pytest.raises(PreconditionViolation):
            hyp2f1_ode_residual(HypTriple(1, 1, 2), 0.5, h=0.6)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.05, 3.0),
    b=st.floats(0.05, 3.0),
    dc=st.floats(0.5, 3.0),
    z=st.floats(0.0, 0.88),
)
def test_series_symmetry_property(a, b, dc, z):
    c = max(a, b) + dc
    assert_allclose(
        hyp2f1_series(HypTriple(a, b, c), z),
        hyp2f1_series(HypTriple(b, a, c), z),
        rtol=1e-12,
        atol=1e-14,
    )
