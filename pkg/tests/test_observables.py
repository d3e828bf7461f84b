import math

import numpy as np
import pytest

from oracles import central_difference

from tunnellab.core import PhysicalConfig, ZoneError, rho_n_squared
from tunnellab.stationary import (
    Parity,
    relativistic_transmission,
    tunnel_amplitude_nr,
    tunnel_phase_derivative,
)
from tunnellab.observables import (
    barrier_top_time,
    distortion_flag,
    distortion_threshold_length,
    fermion_acceleration_predicate,
    hartman_curve_nr,
    hartman_curve_relativistic,
    hartman_curve_symmetric,
    kmax_find,
    naive_above_barrier_times,
    nr_one_way_rate,
    nr_opaque_limit_time,
    nr_phase_time,
    nr_transmission_mag,
    phase_time_shape,
    reflection_delay,
    rel_dwell,
    rel_dwell_zone_edge,
    rel_phase_time,
    rel_phase_time_near_edge,
    rel_phase_time_zone_edge,
    rel_rescaled_dwell,
    rel_self_interference,
    rel_time_observables,
    rel_transmission_zone_edge,
    rel_variational_residual,
    symmetric_dwell,
    symmetric_dwell_quadrature,
    symmetric_phase_time,
    symmetric_self_interference,
    symmetric_time_observables,
)


def above_cfg(w=1.0, L=3.0, k0=None):
    k0 = k0 if k0 is not None else math.sqrt(2.0) * w
    return PhysicalConfig.above_barrier(m=1.0, V0=w * w / 2.0, L=L, a=1.0, k0=k0)


def tunnel_cfg(w=1.0, L=2.0, k0=0.6, a=1.0):
    return PhysicalConfig.tunneling(m=1.0, V0=w * w / 2.0, L=L, a=a, k0=k0)


def resonant_cfg(w, L, cycles):
    q0 = cycles * math.pi / L
    return above_cfg(w=w, L=L, k0=math.sqrt(q0 * q0 + w * w))


class TestNaiveTimes:
    def test_intra_barrier_transits_are_ballistic(self):
        cfg = above_cfg(L=2.2)
        q0 = math.sqrt(cfg.k0 ** 2 - cfg.w ** 2)
        at0 = naive_above_barrier_times(cfg, 0.0)
        atL = naive_above_barrier_times(cfg, cfg.L)
        transit = cfg.m * cfg.L / q0
        assert atL.alpha - at0.alpha == pytest.approx(transit, rel=1e-12)
        assert at0.beta - atL.beta == pytest.approx(transit, rel=1e-12)

    def test_reflected_delay_relation(self):
        cfg = above_cfg(L=1.7)
        at0 = naive_above_barrier_times(cfg, 0.0)
        assert at0.reflected - at0.incident == pytest.approx(
            float(reflection_delay(cfg.k0, cfg)), rel=1e-12)

    def test_resonance_sign_flip(self):
        # interior wave appears after the incident peak at resonance,
        # before it at antiresonance
        for cycles, positive in ((3.0, True), (3.5, False)):
            cfg = resonant_cfg(40.0, 2.0, cycles)
            t0 = naive_above_barrier_times(cfg, 0.0).alpha
            assert (t0 > 0) == positive

    def test_reflection_delay_resonance_forms(self):
        cfg = resonant_cfg(1.0, 3.0, 2.0)
        k0 = cfg.k0
        q0 = math.sqrt(k0 ** 2 - cfg.w ** 2)
        expected = (cfg.m * cfg.L / q0) * (k0 ** 2 + q0 ** 2) / (2.0 * k0 * q0)
        assert reflection_delay(k0, cfg) == pytest.approx(expected, rel=1e-12)
        cfg = resonant_cfg(1.0, 3.0, 2.5)
        k0 = cfg.k0
        q0 = math.sqrt(k0 ** 2 - cfg.w ** 2)
        expected = (cfg.m * cfg.L / q0) * (2.0 * k0 * q0) / (k0 ** 2 + q0 ** 2)
        assert reflection_delay(k0, cfg) == pytest.approx(expected, rel=1e-12)

    def test_zone_error(self):
        with pytest.raises(ZoneError):
            naive_above_barrier_times(tunnel_cfg(), 0.0)


class TestNrPhaseTime:
    def test_matches_phase_derivative(self):
        cfg = tunnel_cfg(L=2.0)
        for k in (0.2, 0.55, 0.9):
            expected = (cfg.m / k) * float(tunnel_phase_derivative(k, cfg))
            assert nr_phase_time(k, cfg) == pytest.approx(expected, rel=1e-13)

    def test_finite_difference(self):
        cfg = tunnel_cfg(L=2.0)
        k = 0.6
        fd = central_difference(lambda kk: float(tunnel_amplitude_nr(kk, cfg).theta),
                                k, 1e-5)
        assert nr_phase_time(k, cfg) == pytest.approx((cfg.m / k) * fd, rel=1e-6)

    def test_opaque_saturation(self):
        # alpha = 30, n = 0.5: the closed form and the opaque value agree to 1e-6
        w = 1.0
        k = math.sqrt(0.5) * w
        rho = math.sqrt(w * w - k * k)
        cfg = tunnel_cfg(L=30.0 / rho, k0=k)
        assert nr_phase_time(k, cfg) == pytest.approx(
            float(nr_opaque_limit_time(k, cfg)), rel=1e-6)

    def test_consistency_with_dimensionless_rate(self):
        cfg = tunnel_cfg(L=3.0)
        for k in np.linspace(0.1, 0.95, 18):
            n = k * k / cfg.w ** 2
            alpha = math.sqrt(cfg.w ** 2 - k * k) * cfg.L
            tau = cfg.m * cfg.L / k
            assert nr_phase_time(float(k), cfg) == pytest.approx(
                tau * float(nr_one_way_rate(n, alpha)), rel=1e-12)

    def test_small_alpha_rate_limit(self):
        for n in (0.1, 0.5, 0.9):
            assert nr_one_way_rate(n, 1e-3) == pytest.approx(1.0 + 1.0 / (2.0 * n), rel=1e-3)


class TestShapeFunction:
    def test_small_alpha_series(self):
        assert phase_time_shape(1e-4) / 1e-4 == pytest.approx(2.0 / 3.0, abs=1e-7)

    def test_alpha_ten_is_one(self):
        g = phase_time_shape(10.0)
        assert g == pytest.approx(1.0, abs=1e-7)
        assert g == pytest.approx(1.0 - 10.0 / math.sinh(10.0) ** 2, abs=1e-8)

    def test_barrier_top_linear_regime(self):
        cfg = tunnel_cfg(L=0.5)
        assert barrier_top_time(1e-3, cfg) == pytest.approx(
            4.0 * cfg.m * cfg.L / (3.0 * cfg.w), rel=1e-3)

    def test_barrier_top_opaque_regime(self):
        cfg = tunnel_cfg(L=0.5)
        # (2mL/(w alpha)) G -> 2m/(w rho) with rho = alpha/L
        alpha = 40.0
        assert barrier_top_time(alpha, cfg) == pytest.approx(
            2.0 * cfg.m * cfg.L / (cfg.w * alpha), rel=1e-6)


class TestSpectralMaximum:
    def cfg(self, wa, Lba, k0a=1.0):
        return PhysicalConfig(m=1.0, V0=wa * wa / 2.0, L=Lba, a=1.0, k0=k0a)

    def test_reference_cells(self):
        for (wa, Lba), expected in (((4.0, 0.20), 1.6571), ((10.0, 0.50), 2.1170),
                                    ((20.0, 1.00), 2.1392)):
            result = kmax_find(self.cfg(wa, Lba))
            assert not result.distorted
            assert result.k_max == pytest.approx(expected, abs=5e-4)

    def test_zero_width_returns_center(self):
        result = kmax_find(self.cfg(4.0, 0.0))
        assert result.k_max == pytest.approx(1.0, abs=1e-7)
        assert not result.distorted

    def test_bracketing_when_not_distorted(self):
        for Lba in (0.1, 0.4, 0.8):
            cfg = self.cfg(6.0, Lba)
            result = kmax_find(cfg)
            assert not result.distorted
            assert cfg.k0 < result.k_max < cfg.w

    def test_monotone_until_distortion(self):
        previous = 0.0
        for Lba in np.arange(0.0, 1.01, 0.05):
            cfg = self.cfg(2.0, float(Lba))
            result = kmax_find(cfg)
            if result.distorted:
                break
            assert result.k_max >= previous - 1e-9
            previous = result.k_max

    def test_distortion_examples(self):
        assert distortion_flag(self.cfg(1.5, 0.80))
        assert not distortion_flag(self.cfg(1.5, 0.75))
        assert not distortion_flag(self.cfg(4.0, 0.0))
        # k0 at the barrier top: any nonzero width distorts
        top = PhysicalConfig(m=1.0, V0=0.5, L=0.01, a=1.0, k0=1.0)
        assert distortion_flag(top)
        assert distortion_threshold_length(top) == 0.0

    def test_threshold_length_scale(self):
        cfg = self.cfg(2.0, 0.5)
        bound = distortion_threshold_length(cfg)
        assert bound == pytest.approx(math.sqrt(1.5 * (1.0 - 0.5)), rel=1e-12)


class TestSymmetricTriple:
    def test_exact_identity(self):
        wL = 4.0 * math.pi
        n = 0.5
        alpha = wL * math.sqrt(1.0 - n)
        for parity in (Parity.SYMMETRIC, Parity.ANTISYMMETRIC):
            tp = symmetric_phase_time(n, alpha, parity)
            td = symmetric_dwell(n, alpha, parity)
            ts = symmetric_self_interference(n, alpha, parity)
            assert abs(tp - td - ts) < 1e-12

    def test_dwell_quadrature_cross_check(self):
        cfg = tunnel_cfg(w=1.0, L=4.0 * math.pi, k0=math.sqrt(0.5))
        n = 0.5
        alpha = cfg.w * cfg.L * math.sqrt(1.0 - n)
        tau = cfg.m * cfg.L / cfg.k0
        for parity in (Parity.SYMMETRIC, Parity.ANTISYMMETRIC):
            closed = tau * float(symmetric_dwell(n, alpha, parity))
            quad = symmetric_dwell_quadrature(cfg, parity)
            assert quad == pytest.approx(closed, abs=1e-8 * max(1.0, abs(closed)))

    def test_small_alpha_limits(self):
        for n in (0.2, 0.5, 0.8):
            assert symmetric_phase_time(n, 1e-3, Parity.SYMMETRIC) == pytest.approx(
                1.0 + 1.0 / n, rel=1e-3)
            assert symmetric_phase_time(n, 1e-3, Parity.ANTISYMMETRIC) == pytest.approx(
                1.0, rel=1e-3)

    def test_large_alpha_decay(self):
        for parity in (Parity.SYMMETRIC, Parity.ANTISYMMETRIC):
            assert abs(symmetric_phase_time(0.5, 4000.0, parity)) < 1e-3
            assert abs(symmetric_dwell(0.5, 4000.0, parity)) < 1e-3

    def test_profile_record(self):
        rec = symmetric_time_observables(0.4, 2.0, Parity.SYMMETRIC, tau_k=3.0)
        assert rec.t_phase == pytest.approx(rec.t_dwell + rec.t_self, abs=1e-12)
        assert rec.parity is Parity.SYMMETRIC

    def test_fermion_acceleration(self):
        assert fermion_acceleration_predicate(0.5, 4.0)
        assert fermion_acceleration_predicate(0.9, 1.0)
        ns = np.linspace(0.05, 0.95, 31)
        als = np.linspace(0.1, 30.0, 40)
        grid_n, grid_a = np.meshgrid(ns, als)
        assert fermion_acceleration_predicate(grid_n.ravel(), grid_a.ravel())

    def test_boson_not_accelerated_below_threshold(self):
        # boson acceleration needs (alpha/2) tanh(alpha/2) > 1
        ns = np.linspace(0.05, 0.95, 25)
        for alpha in np.linspace(0.1, 2.4, 25):
            if 0.5 * alpha * math.tanh(0.5 * alpha) <= 1.0:
                rates = np.asarray(symmetric_phase_time(ns, alpha, Parity.SYMMETRIC))
                assert np.all(rates >= 1.0 - 1e-12)

    def test_zone_validation(self):
        with pytest.raises(ZoneError):
            symmetric_phase_time(1.2, 1.0, Parity.SYMMETRIC)


class TestRelativisticPhaseTime:
    def test_finite_difference(self):
        wL = 2.0 * math.pi
        for upsilon, n_sq in ((1.0, 0.8), (5.0, 2.0), (10.0, 5.5)):
            def phi(nn_sq):
                return relativistic_transmission(nn_sq, upsilon, wL)[1]

            fd = central_difference(phi, n_sq, 1e-6)
            # t/tau = d phi / d(n) / (wL) with n = sqrt(n_sq): chain rule
            n = math.sqrt(n_sq)
            expected = fd * 2.0 * n / wL
            assert rel_phase_time(n_sq, upsilon, wL) == pytest.approx(expected, rel=1e-6)

    def test_reduces_to_one_way_rate(self):
        wL = 3.0
        for n_sq in np.linspace(0.05, 0.95, 19):
            alpha = wL * math.sqrt(1.0 - n_sq)
            assert rel_phase_time(float(n_sq), 0.0, wL) == pytest.approx(
                float(nr_one_way_rate(n_sq, alpha)), rel=1e-12)

    def test_zone_edge_closed_forms(self):
        n_lo, v_lo = rel_phase_time_zone_edge(5.0, "lower")
        assert (n_lo, v_lo) == (1.5, pytest.approx(-1.0 / 3.0, rel=1e-12))
        n_hi, v_hi = rel_phase_time_zone_edge(5.0, "upper")
        assert (n_hi, v_hi) == (3.5, pytest.approx(2.0 / 9.0, rel=1e-12))

    def test_full_formula_attains_edge_limits(self):
        # approach with rho_n wL = 1e-3 and a vanishing zone offset
        for upsilon, edge, sign in ((5.0, "lower", -1), (5.0, "upper", +1),
                                    (1.0, "upper", +1), (10.0, "lower", -1)):
            n_edge, closed = rel_phase_time_zone_edge(upsilon, edge)
            n_sq = n_edge - sign * 1e-12
            rho = math.sqrt(rho_n_squared(n_sq, upsilon))
            wL = 1e-3 / rho
            full = rel_phase_time(n_sq, upsilon, wL)
            assert full == pytest.approx(closed, rel=1e-5)
            near = rel_phase_time_near_edge(n_sq, upsilon)
            assert full == pytest.approx(near, rel=1e-5)

    def test_zone_errors(self):
        with pytest.raises(ZoneError):
            rel_phase_time(0.4, 5.0, 1.0)


class TestRelativisticDwell:
    def test_always_positive(self):
        for upsilon in (1.0, 2.0, 5.0, 10.0):
            lo = max(0.5 * upsilon - 1.0, 0.0) + 1e-3
            hi = 0.5 * upsilon + 1.0 - 1e-3
            ns = np.linspace(lo, hi, 50)
            vals = np.asarray(rel_dwell(ns, upsilon, 2.0 * math.pi))
            assert np.all(vals > 0.0)

    def test_matches_scaled_interior_quadrature(self):
        # the dwell ratio equals (m/k) int |phi_2|^2 / tau with the interior
        # field normalized by the barrier-scale transmission modulus
        from tunnellab.core import Dispersion, evanescent_rate
        from tunnellab.stationary import kg_scatter_coeffs
        upsilon, wL = 5.0, 1.0
        n_sq = 2.0
        m = 1.0
        w = math.sqrt(2.0 * upsilon) * m
        cfg = PhysicalConfig(m=m, V0=upsilon, L=wL / w, a=1.0, k0=math.sqrt(n_sq) * w,
                             dispersion=Dispersion.RELATIVISTIC_KG)
        sc = kg_scatter_coeffs(cfg.k0, cfg)
        T_scaled, _ = relativistic_transmission(n_sq, upsilon, wL)
        scale = T_scaled / abs(sc.T)
        rho = evanescent_rate(cfg.k0, cfg)
        xs, wq = np.polynomial.legendre.leggauss(160)
        xs = 0.5 * cfg.L * (xs + 1.0)
        wq = wq * 0.5 * cfg.L
        phi2 = scale * (sc.alpha_coef * np.exp(-rho * xs) + sc.beta_coef * np.exp(rho * xs))
        E = math.sqrt(cfg.k0 ** 2 + m * m)
        tau = cfg.L * E / cfg.k0
        quad = (m / cfg.k0) * float(np.sum(wq * np.abs(phi2) ** 2)) / tau
        assert rel_dwell(n_sq, upsilon, wL) == pytest.approx(quad, rel=1e-10)

    def test_zone_edge_curve_values(self):
        assert rel_dwell_zone_edge(5.0, "lower") == (1.5, pytest.approx(0.125))
        assert rel_dwell_zone_edge(5.0, "upper") == (3.5, pytest.approx(0.5 / 6.0))

    def test_rescaled_sign_flip(self):
        upsilon, wL = 5.0, 2.0 * math.pi
        flip = (upsilon ** 2 - 1.0) / (2.0 * upsilon)
        assert rel_rescaled_dwell(flip - 1e-6, upsilon, wL) < 0.0
        assert rel_rescaled_dwell(flip + 1e-6, upsilon, wL) > 0.0
        assert abs(rel_rescaled_dwell(flip, upsilon, wL)) < 1e-12

    def test_variational_identity(self):
        for upsilon in (1.0, 5.0):
            for n_sq in np.linspace(max(0.5 * upsilon - 0.9, 0.05),
                                    0.5 * upsilon + 0.9, 7):
                res = rel_variational_residual(float(n_sq), upsilon, 2.0 * math.pi)
                assert abs(res) < 1e-10

    def test_observable_record(self):
        upsilon, wL = 5.0, 2.0 * math.pi
        rec = rel_time_observables(2.0, upsilon, wL)
        assert rec.t_dwell > 0.0
        assert rec.t_dwell_rescaled == pytest.approx(
            (math.sqrt(1.0 + 2.0 * 2.0 * upsilon) - upsilon) * rec.t_dwell, rel=1e-12)
        assert rec.t_phase == pytest.approx(float(rel_phase_time(2.0, upsilon, wL)), rel=1e-14)
        assert rec.t_self == pytest.approx(rel_self_interference(2.0, upsilon, wL), rel=1e-14)


class TestZoneEdgeTransmission:
    def test_closed_forms(self):
        wL = 2.0 * math.pi
        assert rel_transmission_zone_edge(5.0, "lower", wL) == pytest.approx(
            (1.0 + wL * wL / 6.0) ** -0.5, rel=1e-12)
        assert rel_transmission_zone_edge(5.0, "upper", wL) == pytest.approx(
            (1.0 + wL * wL / 14.0) ** -0.5, rel=1e-12)
        with pytest.raises(ZoneError):
            rel_transmission_zone_edge(1.0, "lower", wL)


class TestHartman:
    def test_nr_saturates_by_thirty(self):
        alphas = np.linspace(1.0, 40.0, 79)
        for n in (0.1, 0.5, 0.9):
            curve = hartman_curve_nr(n, alphas, tol=1e-6)
            assert curve.saturation_parameter is not None
            assert curve.saturation_parameter <= 30.0
            assert abs(curve.ratio_to_limit[-1] - 1.0) < 1e-12

    def test_symmetric_rates_vanish(self):
        alphas = np.linspace(1.0, 500.0, 120)
        for parity in (Parity.SYMMETRIC, Parity.ANTISYMMETRIC):
            curve = hartman_curve_symmetric(0.5, alphas, parity, tol=1e-2)
            assert curve.saturation_parameter is not None
            assert abs(curve.t_over_tau[-1]) < 1e-2

    def test_relativistic_curve_finite(self):
        grid = np.linspace(1.5 + 1e-4, 3.5 - 1e-4, 301)
        curve = hartman_curve_relativistic(5.0, 2.0 * math.pi, grid)
        assert np.all(np.isfinite(curve.t_over_tau))


class TestNrTransmissionMag:
    def test_stable_at_barrier_top(self):
        w, L = 1.0, 2.0
        edge = nr_transmission_mag(w * (1.0 - 1e-13), w, L)
        assert edge == pytest.approx((1.0 + (w * L / 2.0) ** 2) ** -0.5, rel=1e-9)

    def test_matches_amplitude(self):
        cfg = tunnel_cfg(L=1.3)
        ks = np.linspace(0.05, 0.95, 10)
        mags = nr_transmission_mag(ks, cfg.w, cfg.L)
        exact = np.abs(tunnel_amplitude_nr(ks, cfg).T)
        assert np.allclose(mags, exact, rtol=1e-12)
