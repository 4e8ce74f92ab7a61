"""Brute-force product-state search and photon-number oracles."""

import math

import numpy as np
import pytest

from ghk import (
    FockOracleConfig,
    InvalidParamsError,
    MtsParams,
    OptimizerConfig,
    StandardForm,
    StsParams,
    TruncationInsufficientError,
    fock_affinity_diagonal,
    fock_thermal_spectrum,
    fock_trace_distance_diagonal,
    max_affinity,
    mts_standard_form,
    oracle_max_affinity,
    random_standard_form,
    sts_standard_form,
    verify_phi_zero,
)
from ghk.oracle import _nelder_mead


def tmsv_form(r):
    b = 0.5 * math.cosh(2 * r)
    c = 0.5 * math.sinh(2 * r)
    return StandardForm(b, b, c, -c)


FAST = OptimizerConfig(starts=8)


class TestNelderMead:
    def test_quadratic_bowl(self):
        def bowl(x):
            return (x[0] - 1.0) ** 2 + 3.0 * (x[1] + 2.0) ** 2 + 0.5

        value, point = _nelder_mead(
            bowl, [4.0, 4.0], [0.5, 0.5], max_iters=500, xtol=1e-10, ftol=1e-14
        )
        assert value == pytest.approx(0.5, abs=1e-10)
        assert point[0] == pytest.approx(1.0, abs=1e-5)
        assert point[1] == pytest.approx(-2.0, abs=1e-5)

    def test_rosenbrock_progress(self):
        def rosen(x):
            return (1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2

        value, point = _nelder_mead(
            rosen, [-1.0, 1.0], [0.4, 0.4], max_iters=4000, xtol=1e-11, ftol=1e-15
        )
        assert value < 1e-9


class TestOracleMaxAffinity:
    def test_product_input(self):
        value, params = oracle_max_affinity(
            np.diag([1.5, 1.5, 0.7, 0.7]), FAST, np.random.default_rng(1)
        )
        assert value == pytest.approx(1.0, abs=1e-9)
        kt1 = 1.5 + math.sqrt(2.0)
        kt2 = 0.7 + math.sqrt(0.7**2 - 0.25)
        got = sorted([params.eta1, params.eta2], reverse=True)
        assert got[0] == pytest.approx(kt1, abs=1e-4)
        assert got[1] == pytest.approx(kt2, abs=1e-4)

    def test_symmetric_mode_mixed(self):
        cm = StandardForm(1.5, 1.5, 1.0, 1.0).to_cm()
        value, params = oracle_max_affinity(cm, FAST, np.random.default_rng(2))
        assert value == pytest.approx(2.0 / (math.sqrt(3.0) + 1.0), abs=1e-7)
        assert abs(params.r1) < 1e-4 and abs(params.r2) < 1e-4

    def test_two_mode_squeezed_vacuum(self):
        cm = tmsv_form(0.8).to_cm()
        value, params = oracle_max_affinity(cm, FAST, np.random.default_rng(3))
        assert value == pytest.approx(1.0 / math.cosh(0.8) ** 2, abs=1e-7)
        assert params.eta1 == pytest.approx(0.5, abs=1e-4)
        assert params.eta2 == pytest.approx(0.5, abs=1e-4)

    def test_never_beats_closed_form_and_recovers_it(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            sf = random_standard_form(rng)
            cm = sf.to_cm()
            closed = max_affinity(cm)
            value, params = oracle_max_affinity(cm, FAST, rng)
            assert value <= closed + 1e-7
            assert value >= closed - 1e-5
            # optimal eta product equals the sqrt-spectrum product
            kt = [k + math.sqrt(k * k - 0.25) for k in sf.spectrum()]
            assert params.eta1 * params.eta2 == pytest.approx(
                kt[0] * kt[1], abs=1e-4, rel=1e-4
            )

    def test_deterministic_given_rng(self):
        cm = sts_standard_form(StsParams(1.0, 2.0, 0.7)).to_cm()
        a, _ = oracle_max_affinity(cm, FAST, np.random.default_rng(7))
        b, _ = oracle_max_affinity(cm, FAST, np.random.default_rng(7))
        assert a == b


class TestVerifyPhiZero:
    def test_squeezed_thermal(self):
        cm = sts_standard_form(StsParams(0.5, 1.5, 0.9)).to_cm()
        assert verify_phi_zero(cm, FAST, np.random.default_rng(8))

    def test_mode_mixed(self):
        cm = mts_standard_form(MtsParams(2.0, 0.7, 1.1)).to_cm()
        assert verify_phi_zero(cm, FAST, np.random.default_rng(9))

    def test_product_vacuously_true(self):
        assert verify_phi_zero(
            np.diag([1.2, 1.2, 0.8, 0.8]), FAST, np.random.default_rng(10)
        )

    def test_generic_asymmetric_state(self):
        cm = StandardForm(2.0, 1.2, 0.8, -0.3).to_cm()
        assert verify_phi_zero(cm, FAST, np.random.default_rng(11))


class TestFockThermalSpectrum:
    def test_vacuum(self):
        p = fock_thermal_spectrum(0.0)
        assert p[0] == 1.0
        assert np.all(p[1:] == 0.0)

    def test_unit_occupancy_geometric(self):
        p = fock_thermal_spectrum(1.0)
        np.testing.assert_allclose(p[:4], [0.5, 0.25, 0.125, 0.0625], rtol=1e-14)

    def test_tail_certified(self):
        cfg = FockOracleConfig(truncation=400, tail_bound=1e-30)
        p = fock_thermal_spectrum(5.0, cfg)
        tail = (5.0 / 6.0) ** len(p)
        assert tail < 1e-30
        # analytic tail certified; the sum check is limited by float addition
        assert np.sum(p) == pytest.approx(1.0, abs=1e-13)

    def test_truncation_escalates(self):
        cfg = FockOracleConfig(truncation=4, tail_bound=1e-12)
        p = fock_thermal_spectrum(10.0, cfg)
        assert len(p) > 5
        assert np.sum(p) == pytest.approx(1.0, abs=1e-11)

    def test_truncation_insufficient(self):
        cfg = FockOracleConfig(truncation=4, tail_bound=1e-300)
        with pytest.raises(TruncationInsufficientError):
            fock_thermal_spectrum(50.0, cfg)

    def test_rejects_negative(self):
        from ghk import NegativeOccupancyError

        with pytest.raises(NegativeOccupancyError):
            fock_thermal_spectrum(-1.0)


class TestFockAffinity:
    def test_equal_inputs(self):
        assert fock_affinity_diagonal(1.3, 1.3) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_vs_unit(self):
        assert fock_affinity_diagonal(0.0, 1.0) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-12
        )

    def test_closed_geometric_sum(self):
        # sum_n sqrt(p_n q_n) = sqrt(p_0 q_0) / (1 - sqrt(ratio1 ratio2))
        expected = math.sqrt(0.5 * (1.0 / 3.0)) / (
            1.0 - math.sqrt(0.5 * (2.0 / 3.0))
        )
        assert fock_affinity_diagonal(1.0, 2.0) == pytest.approx(expected, rel=1e-12)


class TestFockTraceDistance:
    def test_equal_inputs(self):
        assert fock_trace_distance_diagonal(2.0, 2.0) == 0.0

    def test_vacuum_vs_unit(self):
        assert fock_trace_distance_diagonal(0.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_sandwich(self):
        a = fock_affinity_diagonal(1.0, 2.0)
        t = fock_trace_distance_diagonal(1.0, 2.0)
        assert 1.0 - a <= t <= math.sqrt(1.0 - a * a)


class TestConfigs:
    def test_bad_optimizer_config(self):
        with pytest.raises(InvalidParamsError):
            OptimizerConfig(starts=0)

    def test_bad_fock_config(self):
        with pytest.raises(InvalidParamsError):
            FockOracleConfig(truncation=0)
        with pytest.raises(InvalidParamsError):
            FockOracleConfig(tail_bound=2.0)
