"""Simulation layer: config validation, seeding, statistics, reproducibility."""

import math

import numpy as np
import pytest

import taskage.des as des
import taskage.kernels as kernels
from taskage.accuracy import AccuracyCurve
from taskage.controller import ControllerConfig
from taskage.des import SimConfig, batch_ci, run_sim
from taskage.errors import InstabilityError, ValidationError
from taskage.kernels import _engine_py

CURVE = AccuracyCurve.constant(0.9, n_c_max=16)
RAMP = AccuracyCurve(CURVE.dataset, CURVE.model, 5.0,
                     tuple((n, 0.95 * (1.0 - math.exp(-0.35 * n)))
                           for n in range(1, 17)))


def fixed_config(**kw):
    base = dict(lam=0.1, n_events=2000, n_c=5, p_c=0.8, seed=42)
    base.update(kw)
    return SimConfig(**base)


def adaptive_config(**kw):
    base = dict(lam=0.1, n_events=2000, n_c=5, curve=RAMP, mode="adaptive",
                seed=42, controller=ControllerConfig(sign_mode="descent",
                                                     n_c_max=16))
    base.update(kw)
    return SimConfig(**base)


class TestConfigValidation:
    def test_accepts_valid_fixed(self):
        assert fixed_config().resolved_pc() == 0.8

    def test_rejects_bad_rate(self):
        with pytest.raises(ValidationError):
            fixed_config(lam=0.0)

    def test_rejects_bad_event_count(self):
        with pytest.raises(ValidationError):
            fixed_config(n_events=0)

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValidationError):
            fixed_config(mode="oracle")

    def test_rejects_unknown_binding(self):
        with pytest.raises(ValidationError):
            fixed_config(binding="departure")

    def test_rejects_bad_warmup(self):
        with pytest.raises(ValidationError):
            fixed_config(warmup_frac=0.5)
        with pytest.raises(ValidationError):
            fixed_config(warmup_frac=-0.1)

    def test_rejects_nonpositive_nc(self):
        with pytest.raises(ValidationError):
            fixed_config(n_c=0)

    def test_fixed_needs_exactly_one_accuracy_source(self):
        with pytest.raises(ValidationError):
            fixed_config(p_c=None)
        with pytest.raises(ValidationError):
            fixed_config(curve=CURVE)

    def test_fixed_rejects_out_of_range_pc(self):
        with pytest.raises(ValidationError):
            fixed_config(p_c=1.5)

    def test_fixed_resolves_pc_from_curve(self):
        cfg = fixed_config(p_c=None, curve=RAMP, n_c=4)
        assert cfg.resolved_pc() == 0.95 * (1.0 - math.exp(-0.35 * 4))

    def test_adaptive_needs_curve(self):
        with pytest.raises(ValidationError):
            adaptive_config(curve=None)

    def test_adaptive_rejects_direct_pc(self):
        with pytest.raises(ValidationError):
            adaptive_config(p_c=0.9)

    def test_adaptive_rejects_start_outside_range(self):
        with pytest.raises(ValidationError):
            adaptive_config(n_c=40)


class TestSeeding:
    def test_identical_configs_reproduce_bitwise(self):
        a, b = run_sim(fixed_config()), run_sim(fixed_config())
        np.testing.assert_array_equal(a.t_depart, b.t_depart)
        np.testing.assert_array_equal(a.success, b.success)
        np.testing.assert_array_equal(a.paoti_full, b.paoti_full)
        assert a.stats == b.stats

    def test_seed_changes_sample_path(self):
        a, b = run_sim(fixed_config()), run_sim(fixed_config(seed=43))
        assert not np.array_equal(a.t_arrival, b.t_arrival)

    def test_success_seed_touches_only_the_success_stream(self):
        a = run_sim(fixed_config())
        b = run_sim(fixed_config(success_seed=777))
        np.testing.assert_array_equal(a.t_arrival, b.t_arrival)
        np.testing.assert_array_equal(a.t_depart, b.t_depart)
        np.testing.assert_array_equal(a.paoi, b.paoi)
        assert not np.array_equal(a.success, b.success)

    def test_curve_and_direct_pc_agree_bitwise(self):
        pc = 0.95 * (1.0 - math.exp(-0.35 * 4))
        a = run_sim(fixed_config(n_c=4, p_c=pc))
        b = run_sim(fixed_config(n_c=4, p_c=None, curve=RAMP))
        np.testing.assert_array_equal(a.paoti_full, b.paoti_full)


class TestStability:
    def test_saturated_fixed_run_is_rejected(self):
        with pytest.raises(InstabilityError):
            run_sim(fixed_config(lam=0.5, n_c=2))

    def test_instability_error_reports_rho(self):
        with pytest.raises(InstabilityError) as exc:
            run_sim(fixed_config(lam=0.5, n_c=4))
        assert exc.value.rho == pytest.approx(2.0)

    def test_service_bias_bypasses_the_gate(self):
        r = run_sim(fixed_config(lam=0.5, n_c=2, service_bias=-0.5,
                                 n_events=500))
        assert r.stats.n_events == 500

    def test_nonpositive_biased_service_is_rejected(self):
        with pytest.raises(ValidationError):
            run_sim(fixed_config(n_c=1, service_bias=-1.0))


class TestPerfectDeliveryCollapse:
    def test_paoti_equals_paoi_bitwise(self):
        r = run_sim(fixed_config(p_c=1.0))
        assert r.success.all()
        np.testing.assert_array_equal(r.paoti_full, r.paoi)
        assert r.stats.mean_paoti == r.stats.mean_paoi

    def test_all_failures_yield_nan_summary(self):
        r = run_sim(fixed_config(p_c=0.0, n_events=400))
        assert r.stats.n_success == 0
        assert r.stats.success_rate == 0.0
        assert math.isnan(r.stats.mean_paoti)
        assert r.paoti_peaks.shape == (0,)


class TestBackendEquivalence:
    @pytest.mark.skipif(kernels.BACKEND != "c",
                        reason="compiled kernel not built")
    def test_fixed_run_identical_under_python_kernel(self, monkeypatch):
        compiled = run_sim(fixed_config())
        monkeypatch.setattr(des.kernels, "simulate_fixed",
                            _engine_py.simulate_fixed)
        fallback = run_sim(fixed_config())
        np.testing.assert_array_equal(compiled.t_depart, fallback.t_depart)
        np.testing.assert_array_equal(compiled.paoti_full,
                                      fallback.paoti_full)
        assert compiled.stats == fallback.stats

    @pytest.mark.skipif(kernels.BACKEND != "c",
                        reason="compiled kernel not built")
    def test_adaptive_run_identical_under_python_kernel(self, monkeypatch):
        compiled = run_sim(adaptive_config())
        monkeypatch.setattr(des.kernels, "simulate_adaptive",
                            _engine_py.simulate_adaptive)
        fallback = run_sim(adaptive_config())
        np.testing.assert_array_equal(compiled.n_used, fallback.n_used)
        np.testing.assert_array_equal(compiled.ctrl.n_c, fallback.ctrl.n_c)
        assert compiled.stats == fallback.stats


class TestStats:
    def test_warmup_cut_is_ceil_of_fraction(self):
        r = run_sim(fixed_config(n_events=1000, warmup_frac=0.013))
        assert r.stats.n_kept == 1000 - 13
        assert r.stats.mean_wait == float(r.wait[13:].mean())

    def test_zero_warmup_keeps_everything(self):
        r = run_sim(fixed_config(n_events=500, warmup_frac=0.0))
        assert r.stats.n_kept == 500
        assert r.stats.mean_paoi == float(r.paoi.mean())

    def test_batch_ci_known_value(self):
        # 40 batches of 2 with batch means 1..40: half-width is
        # z * sqrt(var(1..40; ddof=1) / 40) = 1.96 * sqrt(41/12)
        values = np.repeat(np.arange(1.0, 41.0), 2)
        assert batch_ci(values) == pytest.approx(1.96 * math.sqrt(41.0 / 12.0),
                                                 rel=1e-12)

    def test_batch_ci_constant_series_is_zero(self):
        assert batch_ci(np.ones(80)) == 0.0

    def test_batch_ci_needs_two_per_batch(self):
        assert math.isnan(batch_ci(np.ones(79)))

    def test_success_rate_counts_post_warmup(self):
        r = run_sim(fixed_config(n_events=1000, warmup_frac=0.1))
        ok = r.success[100:].astype(bool)
        assert r.stats.n_success == int(ok.sum())
        assert r.stats.success_rate == pytest.approx(ok.mean())

    def test_mean_nc_is_constant_in_fixed_mode(self):
        r = run_sim(fixed_config(n_c=5))
        assert r.stats.mean_nc == 5.0


class TestResultShape:
    def test_peak_series_aligns_with_departures(self):
        r = run_sim(fixed_config())
        ok = r.success.astype(bool)
        assert r.paoti_peaks.shape[0] == int(ok.sum())
        assert not np.isnan(r.paoti_peaks).any()
        np.testing.assert_array_equal(r.paoti_peak_times, r.t_depart[ok])
        assert np.isnan(r.paoti_full[~ok]).all()

    def test_fixed_mode_has_no_controller_trace(self):
        assert run_sim(fixed_config()).ctrl is None

    def test_adaptive_mode_traces_the_controller(self):
        r = run_sim(adaptive_config())
        cc = r.config.controller
        assert r.ctrl is not None
        assert 0 < len(r.ctrl) <= r.config.n_events
        assert r.ctrl.n_c.min() >= cc.n_c_min
        assert r.ctrl.n_c.max() <= cc.n_c_max
        assert set(np.unique(r.ctrl.delta)) <= {-1, 0, 1}
        assert r.n_used.min() >= cc.n_c_min
        assert r.n_used.max() <= cc.n_c_max
        assert cc.n_c_min <= r.stats.mean_nc <= cc.n_c_max

    def test_controller_updates_follow_successful_departures(self):
        r = run_sim(adaptive_config())
        assert len(r.ctrl) <= int(r.success.sum())
        assert not np.isnan(r.ctrl.measured_peak).any()
        assert np.all(np.diff(r.ctrl.t) > 0)

    def test_backend_label_matches_active_kernel(self):
        assert run_sim(fixed_config()).backend == kernels.BACKEND
