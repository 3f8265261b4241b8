"""
Reflection, transmission and resonance tests
"""
import numpy as np
import pandas as pd
import pytest

from gsws.core.exceptions import DomainError, ValidationError
from gsws.services.potential import MatchingScheme, SolverConfig
from gsws.services.scattering import (
    SweepAxis,
    amplitude_ratios,
    find_resonances,
    locate_transmission_peak,
    mirrored_amplitude_ratios,
    reflection_ratio_residual,
    reflection_transmission,
    resonance_residual,
    sweep,
)

REFERENCE_RESONANCES = [(15.4913, 0.01), (30.6153, 0.01), (50.37, 0.05)]


@pytest.mark.unit
class TestReflectionTransmission:
    """Test R and T at single energies"""

    @pytest.mark.parametrize("scheme", list(MatchingScheme))
    def test_unitarity_over_grid(self, reference_params, scheme):
        solver = SolverConfig(scheme=scheme)
        defects = [
            reflection_transmission(reference_params, e, solver).unitarity_defect
            for e in np.linspace(0.1, 80.0, 500)
        ]
        assert max(defects) <= 1e-10

    def test_coefficients_are_probabilities(self, reference_params):
        for energy in (0.5, 10.0, 22.5, 45.0):
            result = reflection_transmission(reference_params, energy)
            assert 0.0 <= result.r <= 1.0
            assert 0.0 <= result.t <= 1.0

    def test_ratio_form_agrees(self, reference_params):
        result = reflection_transmission(reference_params, 20.0)
        assert result.scheme is MatchingScheme.ASYMPTOTIC
        assert result.closed_form_defect < 1e-8

    def test_exact_scheme_reports_no_ratio_form_defect(self, reference_params, exact_solver):
        assert reflection_transmission(reference_params, 20.0, exact_solver).closed_form_defect is None

    def test_amplitude_norm(self, reference_params):
        assert amplitude_ratios(reference_params, 35.0).norm_defect < 1e-10

    @pytest.mark.parametrize("scheme, tolerance", [(MatchingScheme.ASYMPTOTIC, 1e-10), (MatchingScheme.EXACT, 1e-12)])
    def test_incidence_from_either_side(self, reference_params, scheme, tolerance):
        solver = SolverConfig(scheme=scheme)
        for energy in (3.0, 18.0, 42.0):
            left = amplitude_ratios(reference_params, energy, solver)
            right = mirrored_amplitude_ratios(reference_params, energy, solver)
            assert abs(abs(left.d2_over_d1) ** 2 - abs(right.d2_over_d1) ** 2) <= tolerance
            assert abs(abs(left.d4_over_d1) ** 2 - abs(right.d4_over_d1) ** 2) <= tolerance

    @pytest.mark.parametrize("scheme", list(MatchingScheme))
    def test_theta_branch_invariance(self, reference_params, scheme):
        for energy in (1.0, 15.0, 33.0, 70.0):
            first = reflection_transmission(reference_params, energy, SolverConfig(scheme=scheme, theta_branch=1))
            second = reflection_transmission(reference_params, energy, SolverConfig(scheme=scheme, theta_branch=-1))
            assert abs(first.r - second.r) <= 1e-10
            assert abs(first.t - second.t) <= 1e-10

    def test_low_energy_limit(self, reference_params):
        values = [reflection_transmission(reference_params, e).r for e in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert values[-1] >= 0.99
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_high_energy_limit(self, reference_params):
        energies = np.linspace(5 * 22.5, 25 * 22.5, 200)
        values = np.array([reflection_transmission(reference_params, e).r for e in energies])
        assert values.max() <= 1e-3
        assert values[-50:].max() <= values[:50].max()

    @pytest.mark.parametrize("energy", [0.0, -3.0])
    def test_requires_positive_energy(self, reference_params, energy):
        with pytest.raises(DomainError):
            reflection_transmission(reference_params, energy)


@pytest.mark.integration
class TestResonances:
    """Test transmission resonances"""

    def test_reference_resonances(self, reference_params, reference_resonances):
        assert len(reference_resonances) == len(REFERENCE_RESONANCES)
        for found, (expected, tolerance) in zip(reference_resonances, REFERENCE_RESONANCES):
            assert found == pytest.approx(expected, abs=tolerance)
            assert reflection_transmission(reference_params, found).t >= 1 - 1e-6

    def test_resonance_residual_vanishes(self, reference_params, reference_resonances):
        for energy in reference_resonances:
            assert abs(resonance_residual(reference_params, energy)) < 1e-5

    def test_ratio_residual_changes_sign(self, reference_params, reference_resonances):
        for energy in reference_resonances:
            below = reflection_ratio_residual(reference_params, energy - 0.05)
            above = reflection_ratio_residual(reference_params, energy + 0.05)
            assert below * above < 0

    def test_peaks_coincide(self, reference_params, reference_resonances):
        for energy in reference_resonances:
            assert locate_transmission_peak(reference_params, energy) == pytest.approx(energy, abs=1e-3)

    def test_narrow_resonances_found(self, narrow_params):
        resonances = find_resonances(narrow_params, 0.0, 60.0)
        assert min(abs(e - 20.0801) for e in resonances) < 0.01
        assert min(abs(e - 40.9262) for e in resonances) < 0.01

    def test_exact_scheme_close_to_asymptotic(self, reference_params, reference_resonances, exact_solver):
        exact = find_resonances(reference_params, 0.0, 60.0, exact_solver)
        assert len(exact) == len(reference_resonances)
        for a, b in zip(exact, reference_resonances):
            assert a == pytest.approx(b, abs=0.5)

    def test_window_below_minimum_energy(self, reference_params):
        assert find_resonances(reference_params, 0.0, 1e-4) == []

    def test_invalid_window(self, reference_params):
        with pytest.raises(ValidationError):
            find_resonances(reference_params, 30.0, 10.0)


@pytest.mark.unit
class TestSweep:
    """Test parameter sweeps"""

    def test_energy_sweep(self, reference_params):
        table = sweep(reference_params, SweepAxis.ENERGY, 0.1, 80.0, 50)
        assert list(table.columns) == ["E_MeV", "R", "T", "unitarity_defect", "error"]
        assert len(table) == 50
        assert (table["error"] == "").all()
        assert table["unitarity_defect"].max() <= 1e-10

    def test_energy_sweep_starts_above_threshold(self, reference_params):
        table = sweep(reference_params, "energy", 0.0, 1.0, 3)
        assert table["E_MeV"].iloc[0] > 0

    def test_diffuseness_sweep(self, reference_params):
        table = sweep(reference_params, SweepAxis.A, 0.8, 1.5, 8, fixed_energy=20.0)
        assert "a_per_fm" in table.columns
        np.testing.assert_allclose(table["R"] + table["T"], 1.0, atol=1e-10)

    def test_barrier_column(self, reference_params):
        table = sweep(reference_params, SweepAxis.W0, 50.0, 250.0, 5, fixed_energy=30.0)
        assert np.isnan(table["HB_MeV"].iloc[0])
        assert table["HB_MeV"].iloc[-1] == pytest.approx(22.5)

    def test_invalid_rows_are_reported(self, reference_params):
        table = sweep(reference_params, SweepAxis.L, 0.0, 6.0, 4, fixed_energy=20.0)
        assert table["error"].iloc[0] != ""
        assert np.isnan(table["R"].iloc[0])
        assert (table["error"].iloc[1:] == "").all()

    def test_thread_pool_matches_serial(self, reference_params):
        serial = sweep(reference_params, SweepAxis.ENERGY, 1.0, 60.0, 24)
        pooled = sweep(reference_params, SweepAxis.ENERGY, 1.0, 60.0, 24, max_workers=4)
        pd.testing.assert_frame_equal(serial, pooled)

    def test_non_energy_axis_needs_energy(self, reference_params):
        with pytest.raises(ValidationError):
            sweep(reference_params, SweepAxis.V0, 50.0, 150.0, 5)
