import cmath
import math

import numpy as np
import pytest

from wireqls import circuit
from wireqls.constants import E, M_E, M_P, TWO_PI

from conftest import C_P, DETUNE, OMEGA_Z, R_P, T_ENV, assert_rel, bose


def oracle_impedance(L, C, R, omega):
    """Direct complex-arithmetic oracle, written independently of the
    module's internals."""
    return 1.0 / complex(1.0 / R, omega * C - 1.0 / (omega * L))


class TestResonatorParams:
    def test_derived_quantities_consistent(self, stock_resonator):
        res = stock_resonator
        assert res.omega_res == pytest.approx(OMEGA_Z - DETUNE * res.delta_omega_res)
        assert res.quality_factor == pytest.approx(
            res.omega_res / res.delta_omega_res, rel=1e-14
        )

    def test_quality_factor_near_6000(self, stock_resonator):
        assert_rel(stock_resonator.quality_factor, 6000.0, 0.10)

    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            circuit.ResonatorParams(L_p=0.0, C_p=C_P, R_p=R_P)
        with pytest.raises(ValueError):
            circuit.ResonatorParams(L_p=1e-7, C_p=-C_P, R_p=R_P)

    def test_detuned_below_rejects_bad_placement(self):
        with pytest.raises(ValueError):
            circuit.ResonatorParams.detuned_below(C_P, R_P, OMEGA_Z, 0.0)
        with pytest.raises(ValueError):
            # detuning so large omega_res would be negative
            circuit.ResonatorParams.detuned_below(C_P, R_P, 1e3, 1.0)


class TestImpedance:
    def test_real_at_resonance(self, stock_resonator):
        z = circuit.impedance(stock_resonator, stock_resonator.omega_res)
        assert z.real == pytest.approx(R_P, rel=1e-12)
        assert abs(z.imag) < 1e-6 * R_P

    def test_magnitude_vanishes_at_low_frequency(self, stock_resonator):
        z = circuit.impedance(stock_resonator, 1e-3)
        assert abs(z) < 1e-6

    def test_worked_point_against_oracle(self, stock_resonator):
        z = circuit.impedance(stock_resonator, OMEGA_Z)
        z_oracle = oracle_impedance(
            stock_resonator.L_p, stock_resonator.C_p, stock_resonator.R_p, OMEGA_Z
        )
        assert cmath.isclose(z, z_oracle, rel_tol=1e-12)
        # rounded magnitudes of the worked example
        assert_rel(z.real, 1.39e2, 0.01)
        assert_rel(z.imag, -8.33e3, 0.01)

    def test_rejects_nonpositive_frequency(self, stock_resonator):
        with pytest.raises(ValueError):
            circuit.impedance(stock_resonator, 0.0)
        with pytest.raises(ValueError):
            circuit.impedance(stock_resonator, -1.0)

    def test_kramers_consistency(self, stock_resonator):
        # Re Z > 0 for all omega > 0; Im Z = 0 exactly at omega_res
        rng = np.random.default_rng(7)
        for _ in range(200):
            omega = 10 ** rng.uniform(0, 12)
            z = circuit.impedance(stock_resonator, omega)
            assert z.real > 0.0
        below = circuit.impedance(stock_resonator, 0.999 * stock_resonator.omega_res)
        above = circuit.impedance(stock_resonator, 1.001 * stock_resonator.omega_res)
        assert below.imag > 0.0 > above.imag  # inductive below, capacitive above

    @pytest.mark.parametrize("detune", [10.0, 20.0, 50.0, 100.0])
    def test_capacitive_limit_dominance(self, detune):
        res = circuit.ResonatorParams.detuned_below(C_P, R_P, OMEGA_Z, detune)
        z = circuit.impedance(res, OMEGA_Z)
        assert abs(z.imag) / z.real >= 10.0

    def test_capacitive_limit_asymptotic_scalings(self):
        # Re Z ~ delta^-2 and Im Z ~ delta^-1 within 5% across the scan
        detunes = np.linspace(10.0, 100.0, 19)
        re_scaled, im_scaled = [], []
        for d in detunes:
            res = circuit.ResonatorParams.detuned_below(C_P, R_P, OMEGA_Z, d)
            delta = OMEGA_Z - res.omega_res
            z = circuit.impedance(res, OMEGA_Z)
            re_scaled.append(z.real * delta**2)
            im_scaled.append(abs(z.imag) * delta)
        for arr in (np.asarray(re_scaled), np.asarray(im_scaled)):
            assert arr.max() / arr.min() - 1.0 < 0.05


class TestSeriesEquivalent:
    def test_inductance_value_electron_1mm(self, trap_logic):
        eq = circuit.series_equivalent(trap_logic)
        assert eq.l == pytest.approx(M_E * (2e-3 / E) ** 2, rel=1e-14)
        assert_rel(eq.l, 1.42e2, 0.01)

    def test_inductance_quadratic_in_trap_size(self, trap_logic, trap_spectroscopy):
        l_small = circuit.series_equivalent(trap_logic).l
        l_big = circuit.series_equivalent(trap_spectroscopy).l
        assert l_big / l_small == pytest.approx(9.0, rel=1e-12)

    def test_no_pulling_when_reactance_zero(self, trap_logic):
        eq = circuit.series_equivalent(trap_logic, z_im=0.0)
        assert eq.omega_z0 == trap_logic.omega_z

    def test_type_invariant(self, trap_logic):
        eq = circuit.series_equivalent(trap_logic, z_im=-8350.0)
        assert eq.l * eq.c * eq.omega_z0**2 == pytest.approx(1.0, rel=1e-14)

    def test_mass_scaling_is_exact(self, trap_logic):
        l_e = circuit.series_equivalent(trap_logic, m=M_E).l
        l_p = circuit.series_equivalent(trap_logic, m=M_P).l
        assert l_p / l_e == pytest.approx(M_P / M_E, rel=1e-14)


class TestExchangeAndDissipation:
    def test_exchange_time_matches_worked_value(self, paper_budget):
        assert_rel(paper_budget.t_ex, 0.160, 0.05)

    def test_symmetric_reduction(self):
        assert circuit.exchange_rate(100.0, 2.0, 2.0) == pytest.approx(100.0 / 4.0)

    def test_linearity_in_reactance(self):
        one = circuit.exchange_rate(100.0, 2.0, 8.0)
        two = circuit.exchange_rate(200.0, 2.0, 8.0)
        assert two == pytest.approx(2.0 * one, rel=1e-15)

    def test_zero_inductance_rejected(self):
        with pytest.raises(ValueError):
            circuit.exchange_rate(100.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            circuit.exchange_time(0.0)

    def test_dissipation_worked_value(self, paper_budget):
        # the small logic-trap inductance dominates
        assert_rel(paper_budget.gamma, 0.98, 0.01)
        assert paper_budget.gamma == pytest.approx(paper_budget.gamma_L)
        assert paper_budget.gamma_L > paper_budget.gamma_S

    def test_dissipation_equal_branches_and_lossless_limit(self):
        assert circuit.dissipation_rate(5.0, 3.0, 3.0) == pytest.approx(5.0 / 3.0)
        assert circuit.dissipation_rate(0.0, 3.0, 7.0) == 0.0


class TestThermalOccupation:
    def test_worked_point(self):
        n = circuit.thermal_occupation(OMEGA_Z, 0.010)
        assert abs(n - 0.62) <= 0.02
        assert n == pytest.approx(bose(OMEGA_Z, 0.010), rel=1e-12)

    def test_zero_temperature(self):
        assert circuit.thermal_occupation(OMEGA_Z, 0.0) == 0.0

    def test_low_frequency_proton_regime(self):
        n = circuit.thermal_occupation(TWO_PI * 1e6, 0.010)
        assert n == pytest.approx(bose(TWO_PI * 1e6, 0.010), rel=1e-12)
        # direct Bose value ~2.1e2; the often-quoted 300 is order-of-magnitude
        assert 100.0 <= n <= 300.0
        assert_rel(n, 2.1e2, 0.02)


class TestQlsBudget:
    def test_figure_matches_worked_value(self, paper_budget):
        assert_rel(paper_budget.figure, 0.098, 0.05)
        assert paper_budget.feasible

    def test_budget_products_exact(self, paper_budget):
        assert paper_budget.t_ex * paper_budget.omega_ex == pytest.approx(
            math.pi / 2.0, rel=1e-14
        )
        assert paper_budget.figure == paper_budget.t_ex * paper_budget.n_bar * paper_budget.gamma

    def test_c_t_definition(self, paper_budget):
        z_im = abs(paper_budget.z_at_omega_z.imag)
        assert paper_budget.c_T == pytest.approx(1.0 / (OMEGA_Z * z_im), rel=1e-14)

    def test_zero_temperature_always_feasible(
        self, stock_resonator, trap_logic, trap_spectroscopy
    ):
        budget = circuit.qls_budget(
            stock_resonator, trap_logic, trap_spectroscopy, 0.0, DETUNE
        )
        assert budget.figure == 0.0
        assert budget.feasible

    def test_proton_preset_marginal(self):
        trap_l = circuit.TrapParams(1e-3, TWO_PI * 1e6, 6.0, 9000.0, 0.010, "logic")
        trap_s = circuit.TrapParams(3e-3, TWO_PI * 1e6, 6.0, 4.0, 0.010, "spectroscopy")
        res = circuit.ResonatorParams.detuned_below(C_P, 1e9, TWO_PI * 1e6, DETUNE)
        budget = circuit.qls_budget(res, trap_l, trap_s, 0.010, DETUNE, m=M_P)
        assert budget.n_bar >= 100.0
        assert not budget.feasible

    def test_mismatched_axial_frequencies_rejected(
        self, stock_resonator, trap_logic
    ):
        other = circuit.TrapParams(
            3e-3, OMEGA_Z * 1.01, 6.0, 4.0, 0.010, "spectroscopy"
        )
        with pytest.raises(ValueError):
            circuit.qls_budget(stock_resonator, trap_logic, other, T_ENV, DETUNE)

    def test_feasibility_threshold_configurable(
        self, stock_resonator, trap_logic, trap_spectroscopy
    ):
        budget = circuit.qls_budget(
            stock_resonator, trap_logic, trap_spectroscopy, T_ENV, DETUNE,
            feasibility_threshold=0.05,
        )
        assert not budget.feasible

    def test_figure_scales_inversely_with_detuning(
        self, stock_resonator, trap_logic, trap_spectroscopy
    ):
        # capacitive-limit scaling: figure ~ 1/detuning
        figures = [
            circuit.qls_budget(
                stock_resonator, trap_logic, trap_spectroscopy, T_ENV, d
            ).figure
            for d in (20.0, 40.0, 80.0)
        ]
        assert figures[0] > figures[1] > figures[2]
        assert figures[0] / figures[1] == pytest.approx(2.0, rel=0.05)
        assert figures[1] / figures[2] == pytest.approx(2.0, rel=0.05)


class TestOptimizeDetuning:
    def test_inverts_worked_example(self, stock_resonator, trap_logic, trap_spectroscopy):
        d = circuit.optimize_detuning(
            stock_resonator, trap_logic, trap_spectroscopy, T_ENV, constraint=0.098
        )
        assert d is not None
        assert 28.0 <= d <= 32.0

    def test_monotone_in_constraint(self, stock_resonator, trap_logic, trap_spectroscopy):
        loose = circuit.optimize_detuning(
            stock_resonator, trap_logic, trap_spectroscopy, T_ENV, constraint=0.9
        )
        tight = circuit.optimize_detuning(
            stock_resonator, trap_logic, trap_spectroscopy, T_ENV, constraint=0.1
        )
        assert loose is not None and tight is not None
        assert loose < tight

    def test_unreachable_constraint_is_infeasible(
        self, stock_resonator, trap_logic, trap_spectroscopy
    ):
        result = circuit.optimize_detuning(
            stock_resonator, trap_logic, trap_spectroscopy, T_ENV,
            constraint=1e-9, scan_range=(1.0, 1000.0), step=5.0,
        )
        assert result is None

    def test_invalid_constraint_rejected(
        self, stock_resonator, trap_logic, trap_spectroscopy
    ):
        with pytest.raises(ValueError):
            circuit.optimize_detuning(
                stock_resonator, trap_logic, trap_spectroscopy, T_ENV, constraint=1.5
            )


class TestTrapParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            circuit.TrapParams(-1e-3, OMEGA_Z, 6.0, 0.0, 0.01, "logic")
        with pytest.raises(ValueError):
            circuit.TrapParams(1e-3, 0.0, 6.0, 0.0, 0.01, "logic")
        with pytest.raises(ValueError):
            circuit.TrapParams(1e-3, OMEGA_Z, 6.0, 0.0, -0.01, "logic")
        with pytest.raises(ValueError):
            circuit.TrapParams(1e-3, OMEGA_Z, 6.0, 0.0, 0.01, "readout")
