"""Schedules, Apollonius geometry, branch tracking, and winding classification."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epdrive import (
    DegenerateRatio,
    HyperbolicSingularity,
    PathTooCloseToEP,
    SamplingTooCoarse,
    apollonius_from_ratio,
    cosine_loop,
    custom_from_csv,
    enclosed_ep_count,
    j_delta_from_angles,
    mixing_angle,
    sample_cosine_loop,
    torus_schedule,
    tracked_angle,
    winding_numbers,
)


class TestCosineLoop:
    def test_endpoints_and_extrema(self):
        sch = cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi)
        assert sch.amp_at(0.0) == pytest.approx(30.0)
        assert sch.amp_at(0.1) == pytest.approx(0.0, abs=1e-12)
        assert sch.delta_at(0.0) == pytest.approx(0.0, abs=1e-12)
        assert sch.delta_at(0.05) == pytest.approx(10 * math.pi)
        assert sch.direction == "ccw"
        assert cosine_loop(0.2, 0.29, 0.0, 30.0, -10 * math.pi).direction == "cw"

    def test_derivatives_match_finite_difference(self):
        sch = cosine_loop(0.2, 0.29, 1.0, 30.0, 10 * math.pi)
        t = np.linspace(0.01, 0.19, 37)
        h = 1e-7
        assert np.allclose(sch.damp_at(t), (sch.amp_at(t + h) - sch.amp_at(t - h)) / (2 * h), atol=1e-4)
        assert np.allclose(sch.ddelta_at(t), (sch.delta_at(t + h) - sch.delta_at(t - h)) / (2 * h), atol=1e-4)

    def test_reversed_traces_same_geometry(self):
        sch = cosine_loop(0.2, 0.29, 1.0, 30.0, 10 * math.pi)
        rev = sch.reversed()
        t = np.linspace(0.0, 0.2, 21)
        assert np.allclose(rev.amp_at(t), sch.amp_at(0.2 - t), atol=1e-12)
        assert np.allclose(rev.delta_at(t), sch.delta_at(0.2 - t), atol=1e-12)
        assert rev.direction != sch.direction

    def test_sample_point(self):
        sch = cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi)
        p = sample_cosine_loop(sch, 0.0)
        assert p.coupling == pytest.approx(30.0 + 0j)
        assert p.kappa == 0.29


class TestApollonius:
    def test_frozen_geometry(self):
        # [DERIVED] c = k(1+r^2)/(1-r^2), R = 2kr/|1-r^2| at r=0.9733, k=0.413
        circle, sch = apollonius_from_ratio(0.9733, 0.413)
        assert circle.center == pytest.approx(15.264458869920958, abs=1e-12)
        assert circle.radius == pytest.approx(15.258870718094068, abs=1e-12)
        assert sch.j_min == pytest.approx(0.005588151826890098, abs=1e-12)
        assert sch.j_max == pytest.approx(30.523329588015024, abs=1e-11)
        assert circle.alpha_i == pytest.approx(0.013531459774844537, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.05, 0.99), st.floats(0.05, 1.0))
    def test_power_of_the_point(self, r, kappa):
        circle, _ = apollonius_from_ratio(r, kappa)
        assert (circle.center - circle.radius) * (circle.center + circle.radius) == pytest.approx(
            kappa**2, rel=1e-9
        )

    def test_tanh_identities(self):
        circle, sch = apollonius_from_ratio(0.5, 0.3)
        ai = circle.alpha_i
        assert sch.j_min == pytest.approx(0.3 * math.tanh(ai), rel=1e-12)
        assert sch.j_max == pytest.approx(0.3 / math.tanh(ai), rel=1e-12)

    def test_constant_alpha_i_along_circle(self):
        circle, sch = apollonius_from_ratio(0.9733, 0.413)
        path = tracked_angle(sch)
        assert np.max(np.abs(path.alpha_i - circle.alpha_i)) < 1e-12

    def test_reciprocal_ratios_same_circle(self):
        c1, _ = apollonius_from_ratio(0.5, 0.3)
        c2, _ = apollonius_from_ratio(2.0, 0.3)
        assert c1.alpha_i == pytest.approx(c2.alpha_i, abs=1e-14)
        assert c1.radius == pytest.approx(c2.radius, rel=1e-12)
        assert abs(c1.center) == pytest.approx(abs(c2.center), rel=1e-12)

    def test_degenerate_ratio(self):
        with pytest.raises(DegenerateRatio):
            apollonius_from_ratio(1.0, 0.3)


class TestAnglesToControls:
    def test_roundtrip_through_mixing_angle(self):
        from epdrive import SystemParams

        for ar, ai, kappa in [(0.3, 0.2, 0.5), (1.2, 0.05, 0.29), (-0.8, 0.6, 0.1)]:
            delta, j = j_delta_from_angles(ar, ai, kappa)
            a = mixing_angle(SystemParams(delta, complex(j), kappa))
            assert a.alpha_r == pytest.approx(ar, abs=1e-10)
            assert a.alpha_i == pytest.approx(ai, abs=1e-10)

    def test_hyperbolic_singularity(self):
        with pytest.raises(HyperbolicSingularity):
            j_delta_from_angles(0.3, 0.0, 0.5)


class TestTorus:
    def test_constant_alpha_i(self):
        sch = torus_schedule(alpha_i=0.5, kappa=0.29, omega=math.pi / 0.2, nu=0.0, period=0.2)
        path = tracked_angle(sch)
        assert np.max(np.abs(path.alpha_i - 0.5)) < 1e-12

    def test_alpha_r_advances_linearly(self):
        omega = math.pi / 0.2
        sch = torus_schedule(alpha_i=0.5, kappa=0.29, omega=omega, nu=0.0, period=0.2, alpha_r0=0.1)
        path = tracked_angle(sch)
        assert np.allclose(path.alpha_r, 0.1 + omega * path.times, atol=1e-10)

    def test_phi_winding(self):
        nu = 2 * math.pi / 0.2
        sch = torus_schedule(alpha_i=0.3, kappa=0.29, omega=math.pi / 0.2, nu=nu, period=0.2)
        t = np.linspace(0, 0.2, 11)
        assert np.allclose(sch.phi_at(t), nu * t, atol=1e-12)
        assert np.allclose(sch.dphi_at(t), nu, atol=1e-12)

    def test_requires_positive_alpha_i(self):
        with pytest.raises(HyperbolicSingularity):
            torus_schedule(alpha_i=0.0, kappa=0.29, omega=1.0, nu=0.0, period=0.2)


class TestCustomCsv:
    def test_roundtrip(self, tmp_path):
        base = cosine_loop(0.2, 0.29, 1.0, 30.0, 10 * math.pi)
        t = np.linspace(0.0, 0.2, 401)
        rows = np.column_stack([t, base.amp_at(t), np.zeros_like(t), base.delta_at(t)])
        f = tmp_path / "sched.csv"
        np.savetxt(f, rows, delimiter=",", header="t,J_x,J_y,delta", comments="")
        sch = custom_from_csv(f, kappa=0.29)
        tt = np.linspace(0.01, 0.19, 37)
        assert np.allclose(sch.amp_at(tt), base.amp_at(tt), atol=1e-6)
        assert np.allclose(sch.delta_at(tt), base.delta_at(tt), atol=1e-6)
        assert np.allclose(sch.damp_at(tt), base.damp_at(tt), atol=1e-2)

    def test_bad_header(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("t,Jx,Jy,delta\n0,1,0,0\n1,1,0,0\n")
        with pytest.raises(ValueError):
            custom_from_csv(f, kappa=0.29)


class TestTrackedAngle:
    def test_single_ep_loop_advances_pi(self):
        path = tracked_angle(cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi))
        assert path.alpha_r[-1] - path.alpha_r[0] == pytest.approx(-math.pi, abs=1e-9)
        assert np.all(np.abs(np.diff(path.alpha_r)) < math.pi / 2)

    def test_cw_ccw_share_initial_state(self):
        # Both directions start at alpha = pi/2 (same physical eigenstate);
        # the detuning mirror maps alpha_cw(t) = pi - alpha_r_ccw(t) + i alpha_i_ccw(t).
        ccw = tracked_angle(cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi))
        cw = tracked_angle(cosine_loop(0.2, 0.29, 0.0, 30.0, -10 * math.pi))
        assert cw.alpha[0] == pytest.approx(ccw.alpha[0], abs=1e-12)
        assert np.allclose(cw.alpha.real, math.pi - ccw.alpha.real, atol=1e-10)
        assert np.allclose(cw.alpha.imag, ccw.alpha.imag, atol=1e-10)

    def test_zero_ep_loop_closes(self):
        path = tracked_angle(cosine_loop(0.2, 0.29, 1.0, 30.0, 10 * math.pi))
        assert path.alpha_r[-1] == pytest.approx(path.alpha_r[0], abs=1e-9)
        # the closing sample can sit exactly on the principal boundary
        # alpha_r = pi/2, where the branch counter reads 1 instead of 0
        assert abs(path.branch_index[-1]) <= 1

    def test_alpha_dot_matches_finite_difference(self):
        path = tracked_angle(cosine_loop(0.2, 0.29, 1.0, 30.0, 10 * math.pi), n_samples=4001)
        dt = path.times[1] - path.times[0]
        fd = np.gradient(path.alpha, dt)
        interior = slice(5, -5)
        assert np.max(np.abs(path.alpha_dot - fd)[interior]) < 1e-2 * (1 + np.max(np.abs(path.alpha_dot)))

    def test_ep_proximity_raises(self):
        # loop passing exactly through the EP at J = kappa, Delta = 0
        with pytest.raises(PathTooCloseToEP):
            tracked_angle(cosine_loop(0.2, 0.29, 0.29, 30.0, 10 * math.pi))

    def test_coarse_sampling_raises(self):
        with pytest.raises(SamplingTooCoarse):
            tracked_angle(cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi), n_samples=3)

    def test_path_point_accessor(self):
        path = tracked_angle(cosine_loop(0.2, 0.29, 0.0, 30.0, 10 * math.pi))
        p = path[0]
        assert p.t == 0.0
        assert p.params.coupling == pytest.approx(30.0 + 0j)
        assert p.alpha.value == pytest.approx(complex(path.alpha[0]), abs=1e-15)
        assert len(path) == path.schedule.n_samples


class TestWinding:
    @pytest.mark.parametrize(
        "j_min,expected",
        [(0.5, 0), (0.0, 1), (0.1, 1), (-0.1, 1), (-0.5, 2)],
    )
    def test_enclosed_count(self, j_min, expected):
        path = tracked_angle(cosine_loop(0.2, 0.21, j_min, 30.0, -10 * math.pi))
        assert enclosed_ep_count(path) == expected

    def test_winding_signs_flip_with_direction(self):
        ccw = winding_numbers(tracked_angle(cosine_loop(0.2, 0.21, 0.0, 30.0, 10 * math.pi)))
        cw = winding_numbers(tracked_angle(cosine_loop(0.2, 0.21, 0.0, 30.0, -10 * math.pi)))
        assert ccw[0] == -cw[0] and ccw[1] == -cw[1]
