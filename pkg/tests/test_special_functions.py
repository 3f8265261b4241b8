"""
Log-gamma, hypergeometric and connection-coefficient tests

mpmath serves as the extended-precision reference.
"""
import mpmath
import numpy as np
import pytest

from gsws.core.exceptions import DegenerateParameterError, PoleError, ValidationError
from gsws.instrumentation.metrics import REGISTRY
from gsws.services.potential import Regime, derive
from gsws.services.special_functions import (
    connection_coefficients,
    hyp2f1,
    hyp2f1_derivative,
    log_gamma,
)
from gsws.services.wavefunction import asymptotic_boundary_values, exact_boundary_values


def reference_hyp2f1(a, b, c, z) -> complex:
    mpmath.mp.dps = 40
    return complex(mpmath.hyp2f1(mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(c), mpmath.mpf(z)))


def hyp2f1_evaluations(branch: str) -> float:
    return REGISTRY.get_sample_value("gsws_hyp2f1_evaluations_total", {"branch": branch}) or 0.0


@pytest.mark.unit
class TestLogGamma:
    """Test the complex log-gamma wrapper"""

    @pytest.mark.parametrize("z", [0.5 + 0j, 3.2 - 1.1j, -2.5 + 0.7j, 0.1 + 30.0j, 40.0 - 2.0j])
    def test_matches_reference(self, z):
        expected = complex(mpmath.loggamma(mpmath.mpc(z)))
        assert abs(log_gamma(z) - expected) < 1e-12 * max(1.0, abs(expected))

    def test_vectorized(self):
        z = np.array([1.0, 2.0, 5.0], dtype=complex)
        np.testing.assert_allclose(log_gamma(z), np.log([1.0, 1.0, 24.0]), atol=1e-14)

    def test_recurrence(self):
        z = np.array([0.3 + 0.4j, -3.7 + 0.2j, 12.0 + 25.0j])
        ratio = np.exp(log_gamma(z + 1) - log_gamma(z) - np.log(z))
        np.testing.assert_allclose(ratio, 1.0, atol=1e-12)

    @pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            log_gamma(complex(z))


@pytest.mark.unit
class TestHyp2f1:
    """Test the Gauss hypergeometric function on [0, 1)"""

    @pytest.mark.parametrize("z", [0.0, 0.2, 0.5, 0.51, 0.8, 0.97, 0.9975])
    def test_solver_parameters(self, reference_params, z):
        dp = derive(reference_params, 20.0, Regime.SCATTERING)
        value = hyp2f1(dp.a1, dp.b1, dp.c1, z)
        expected = reference_hyp2f1(dp.a1, dp.b1, dp.c1, z)
        assert abs(value - expected) <= 1e-10 * abs(expected)

    @pytest.mark.parametrize("a, b, c", [
        (0.5 + 1.0j, 1.5 - 0.5j, 2.3 + 0.2j),
        (-1.2 + 3.0j, 0.7 + 3.0j, 1.0 + 0.8j),
        (2.0 + 0.0j, 0.5 + 0.0j, 3.7 + 0.0j),
    ])
    @pytest.mark.parametrize("z", [0.1, 0.6, 0.95])
    def test_generic_parameters(self, a, b, c, z):
        expected = reference_hyp2f1(a, b, c, z)
        assert abs(hyp2f1(a, b, c, z) - expected) <= 1e-10 * max(1.0, abs(expected))

    def test_elementary_case(self):
        # 2F1(1, 1; 2; z) = -log(1 - z) / z
        z = np.array([0.1, 0.3, 0.45])
        np.testing.assert_allclose(hyp2f1(1, 1, 2, z).real, -np.log(1 - z) / z, rtol=1e-13)

    def test_scalar_and_array_returns(self):
        assert isinstance(hyp2f1(0.5, 0.5, 1.5, 0.3), complex)
        assert hyp2f1(0.5, 0.5, 1.5, [0.1, 0.9]).shape == (2,)

    def test_origin(self):
        assert hyp2f1(3.0 + 1j, -2.0 + 0.5j, 1.5 - 2j, 0.0) == 1.0

    @pytest.mark.parametrize("z", [-0.1, 1.0, 1.5, float("nan")])
    def test_argument_outside_unit_interval(self, z):
        with pytest.raises(ValidationError):
            hyp2f1(0.5, 0.5, 1.5, z)

    def test_pole_in_c(self):
        with pytest.raises(PoleError):
            hyp2f1(0.5, 0.5, -2.0, 0.3)

    def test_degenerate_connection(self):
        # c - a - b = 0 needs the logarithmic connection formula
        with pytest.raises(DegenerateParameterError):
            hyp2f1(1.0, 1.0, 2.0, 0.9)

    def test_derivative(self):
        a, b, c, z = 0.5 + 1.0j, 1.5 - 0.5j, 2.3 + 0.2j, 0.4
        mpmath.mp.dps = 40
        expected = complex(mpmath.diff(lambda t: mpmath.hyp2f1(a, b, c, t), z))
        assert abs(hyp2f1_derivative(a, b, c, z) - expected) <= 1e-10 * abs(expected)

    def test_branch_metrics(self):
        series_before = hyp2f1_evaluations("series")
        connection_before = hyp2f1_evaluations("connection")
        hyp2f1(0.5 + 1j, 1.5, 2.3, [0.1, 0.9])
        assert hyp2f1_evaluations("series") == series_before + 1
        assert hyp2f1_evaluations("connection") == connection_before + 1


@pytest.mark.unit
class TestConnectionCoefficients:
    """Test N1..N4"""

    def test_conjugate_pair_below_threshold(self, reference_params):
        for energy in (-93.0, -50.0, -1.0):
            coefficients = connection_coefficients(derive(reference_params, energy, Regime.BOUND))
            assert abs(coefficients.n2 - coefficients.n1.conjugate()) <= 1e-10 * abs(coefficients.n1)

    def test_logs_are_consistent(self, reference_params):
        coefficients = connection_coefficients(derive(reference_params, 20.0, Regime.SCATTERING))
        assert abs(np.exp(coefficients.log_n3) - coefficients.n3) <= 1e-12 * abs(coefficients.n3)
        assert coefficients.scale > 0

    def test_gamma_pole_at_well_bottom(self, reference_params):
        with pytest.raises(PoleError):
            connection_coefficients(derive(reference_params, -100.0, Regime.BOUND))

    def test_plane_wave_limit_for_wide_wells(self, create_params):
        # the plane-wave forms differ from the exact values by terms of order e^{-aL}
        params = create_params(L=20.0)
        dp = derive(params, 20.0, Regime.SCATTERING)
        asymptotic = asymptotic_boundary_values(params, dp, connection_coefficients(dp))
        exact = exact_boundary_values(params, dp)
        for field in ("u1", "du1", "u2", "du2"):
            a, e = getattr(asymptotic, field), getattr(exact, field)
            assert abs(a - e) <= 1e-6 * abs(e)
