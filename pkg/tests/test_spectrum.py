"""
Bound-state spectrum and wavefunction tests
"""
import logging

import numpy as np
import pytest
from scipy.integrate import trapezoid

from gsws.core.config import settings
from gsws.core.exceptions import ConvergenceError, DomainError
from gsws.services.potential import MatchingScheme, Parity, Regime, SolverConfig, derive
from gsws.services.spectrum import (
    arctan_energy,
    bound_residual,
    bound_wavefunction,
    count_nodes,
    exact_partner_energy,
    find_bound_states,
    state_label,
    wavefunction_norm,
)
from gsws.services.wavefunction import regular_boundary_values

REFERENCE_LEVELS = [
    (-93.138, Parity.EVEN),
    (-81.403, Parity.ODD),
    (-67.307, Parity.EVEN),
    (-51.567, Parity.ODD),
    (-34.725, Parity.EVEN),
    (-17.330, Parity.ODD),
    (-0.125, Parity.EVEN),
]


def sample_nodes(values: np.ndarray) -> int:
    real = np.real(values)
    signs = np.sign(real[np.abs(real) > 1e-6 * np.max(np.abs(real))])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


@pytest.mark.integration
class TestBoundSpectrum:
    """Test the bound spectrum of the reference set"""

    def test_reference_levels(self, reference_bound_states):
        assert len(reference_bound_states) == 7
        for state, (energy, parity) in zip(reference_bound_states, REFERENCE_LEVELS):
            assert state.energy == pytest.approx(energy, abs=0.01)
            assert state.parity is parity

    def test_nodes_and_labels(self, reference_bound_states):
        assert [s.nodes for s in reference_bound_states] == list(range(7))
        assert [s.index for s in reference_bound_states] == [1, 2, 2, 3, 3, 4, 4]

    def test_arctan_form_is_a_fixed_point(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            assert arctan_energy(reference_params, state.energy, state.parity) == pytest.approx(state.energy, abs=1e-5)

    def test_residual_changes_sign(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            below = bound_residual(reference_params, state.energy - 0.01, state.parity)
            above = bound_residual(reference_params, state.energy + 0.01, state.parity)
            assert below * above < 0

    def test_theta_branch_invariance(self, reference_params, reference_bound_states):
        other = find_bound_states(reference_params, SolverConfig(theta_branch=-1), x_samples=2)
        assert len(other) == len(reference_bound_states)
        for a, b in zip(other, reference_bound_states):
            assert a.energy == pytest.approx(b.energy, abs=1e-6)

    def test_exact_scheme_has_same_structure(self, exact_bound_states, reference_bound_states):
        assert len(exact_bound_states) == 7
        for exact, asymptotic in zip(exact_bound_states, reference_bound_states):
            assert exact.parity is asymptotic.parity
            assert exact.nodes == asymptotic.nodes
            # plane-wave matching is off by O(e^{-aL}): 0.355 MeV for the ground state
            assert exact.energy == pytest.approx(asymptotic.energy, abs=0.5)

    def test_parity_filter(self, reference_params):
        odd = find_bound_states(reference_params, parities=[Parity.ODD], x_samples=2)
        assert [s.parity for s in odd] == [Parity.ODD] * 3

    @pytest.mark.parametrize("v0", [0.0, -20.0])
    def test_no_well_no_states(self, create_params, v0):
        assert find_bound_states(create_params(v0=v0)) == []

    @pytest.mark.parametrize("energy", [0.0, 1.0, -100.0, -150.0])
    def test_residual_domain(self, reference_params, energy):
        with pytest.raises(DomainError):
            bound_residual(reference_params, energy, Parity.EVEN)

    def test_corrupted_branch_changes_residual(self, reference_params):
        principal = bound_residual(reference_params, -50.0, Parity.EVEN)
        settings.DEBUG_CORRUPT_THETA_BRANCH = True
        corrupted = bound_residual(reference_params, -50.0, Parity.EVEN, SolverConfig(theta_branch=-1))
        assert corrupted != pytest.approx(principal, rel=1e-3)

    def test_labels(self):
        assert [state_label(n) for n in range(7)] == [1, 2, 2, 3, 3, 4, 4]


@pytest.mark.integration
class TestBoundWavefunctions:
    """Test sampled and closed-form eigenfunctions"""

    def test_ground_state_is_nodeless_and_even(self, reference_bound_states):
        ground = reference_bound_states[0]
        values = np.real(ground.wavefunction)
        assert sample_nodes(values) == 0
        np.testing.assert_allclose(values, values[::-1], rtol=0, atol=1e-12 * np.max(np.abs(values)))

    def test_sampled_nodes_match(self, reference_bound_states):
        for state in reference_bound_states:
            assert sample_nodes(state.wavefunction) == state.nodes

    def test_odd_states_vanish_at_origin(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            if state.parity is Parity.ODD:
                assert bound_wavefunction(reference_params, state, 0.0) == 0
                values = np.real(state.wavefunction)
                np.testing.assert_allclose(values, -values[::-1], rtol=0, atol=1e-12 * np.max(np.abs(values)))

    def test_real_and_positive_at_left_surface(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            value = bound_wavefunction(reference_params, state, -reference_params.L)
            assert value.real > 0
            assert abs(value.imag) <= 1e-10 * abs(value)

    def test_tails_decay(self, reference_bound_states):
        for state in reference_bound_states[:-1]:
            values = np.abs(state.wavefunction)
            assert values[0] < 1e-6 * values.max()

    def test_normalization(self, reference_params, reference_bound_states):
        ground = reference_bound_states[0]
        x = np.linspace(-40.0, 40.0, 16001)
        values = bound_wavefunction(reference_params, ground, x, normalize=True)
        assert trapezoid(np.abs(values) ** 2, x) == pytest.approx(1.0, rel=1e-6)

    def test_norm_converges_with_tail(self, reference_params, reference_bound_states):
        for state in (reference_bound_states[0], reference_bound_states[-1]):
            mu = derive(reference_params, state.energy, Regime.BOUND).mu.real
            tail = max(settings.BOUND_TAIL, 20.0 / mu)
            default = wavefunction_norm(reference_params, state.energy, state.parity)
            longer = wavefunction_norm(reference_params, state.energy, state.parity, tail=1.5 * tail)
            assert default == pytest.approx(longer, rel=1e-8)

    def test_node_count_helper(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            dp = derive(reference_params, state.energy, Regime.BOUND)
            assert count_nodes(reference_params, dp, state.parity) == state.nodes


@pytest.mark.integration
class TestEmittedWavefunctionEnergy:
    """Test that emitted wavefunctions are built at the exact-scheme eigenvalue"""

    def test_smooth_at_origin(self, reference_params, reference_bound_states):
        for state in reference_bound_states:
            dp = derive(reference_params, state.sampled_energy, Regime.BOUND)
            u, du = regular_boundary_values(reference_params, dp, MatchingScheme.EXACT)
            kappa = abs(dp.kappa)
            scale = abs(u) * kappa + abs(du)
            if state.parity is Parity.EVEN:
                assert abs(du) <= 1e-6 * scale
            else:
                assert abs(u) * kappa <= 1e-6 * scale

    def test_reported_energy_stays_asymptotic(self, reference_bound_states):
        for state, (energy, _) in zip(reference_bound_states, REFERENCE_LEVELS):
            assert state.energy == pytest.approx(energy, abs=0.01)
            assert state.wavefunction_energy is not None
            assert abs(state.wavefunction_energy - state.energy) < 0.5

    def test_matches_exact_spectrum(self, reference_bound_states, exact_bound_states):
        for state, exact in zip(reference_bound_states, exact_bound_states):
            assert state.wavefunction_energy == pytest.approx(exact.energy, abs=1e-6)
        assert reference_bound_states[0].wavefunction_energy == pytest.approx(-93.494, abs=0.01)

    def test_exact_states_use_own_energy(self, exact_bound_states):
        for state in exact_bound_states:
            assert state.sampled_energy == state.energy

    def test_sampled_wavefunction_matches_closed_form(self, reference_params, reference_bound_states):
        state = reference_bound_states[2]
        np.testing.assert_allclose(
            bound_wavefunction(reference_params, state, state.x),
            state.wavefunction,
            rtol=1e-12,
            atol=1e-14 * np.max(np.abs(state.wavefunction)),
        )

    def test_no_partner_in_window(self, reference_params, monkeypatch):
        monkeypatch.setattr(settings, "BOUND_PARTNER_WINDOW", 1e-4)
        # midway between the ground state and the first odd level
        with pytest.raises(ConvergenceError):
            exact_partner_energy(reference_params, -87.0, Parity.EVEN)

    def test_search_completion_event(self, reference_params, caplog):
        with caplog.at_level(logging.INFO):
            states = find_bound_states(reference_params, parities=[Parity.ODD], x_samples=2)
        events = [r for r in caplog.records if getattr(r, "event_type", None) == "bound_search_complete"]
        assert len(events) == 1
        assert events[0].count == len(states) == 3
