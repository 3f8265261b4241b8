"""
Pytest configuration and fixtures
"""
from typing import Callable, List

import pytest

from gsws.core.config import settings
from gsws.schemas.potential import PotentialParams
from gsws.services.potential import MatchingScheme, Parity, SolverConfig
from gsws.services.resonance import QuasiBoundState, find_quasibound
from gsws.services.scattering import find_resonances
from gsws.services.spectrum import BoundState, find_bound_states
from tests.factories import PotentialParamsFactory


@pytest.fixture(autouse=True)
def restore_debug_flags():
    original = settings.DEBUG_CORRUPT_THETA_BRANCH
    yield
    settings.DEBUG_CORRUPT_THETA_BRANCH = original


@pytest.fixture
def create_params() -> Callable[..., PotentialParams]:
    """Factory helper to build potential parameters."""

    def _create_params(**kwargs) -> PotentialParams:
        return PotentialParamsFactory(**kwargs)

    return _create_params


@pytest.fixture(scope="session")
def reference_params() -> PotentialParams:
    """V0 = 100, W0 = 250, a = 1, L = 6 (surface barrier 22.5 MeV)"""
    return PotentialParamsFactory()


@pytest.fixture(scope="session")
def narrow_params() -> PotentialParams:
    """W0 = 450: deep pocket with narrow resonances"""
    return PotentialParamsFactory(w0=450.0)


@pytest.fixture(scope="session")
def profile_params() -> PotentialParams:
    """V0 = 50, W0 = 200, a = 1, L = 6"""
    return PotentialParamsFactory(v0=50.0, w0=200.0)


@pytest.fixture(scope="session")
def exact_solver() -> SolverConfig:
    return SolverConfig(scheme=MatchingScheme.EXACT)


@pytest.fixture(scope="session")
def reference_bound_states(reference_params) -> List[BoundState]:
    return find_bound_states(reference_params, x_samples=401)


@pytest.fixture(scope="session")
def exact_bound_states(reference_params, exact_solver) -> List[BoundState]:
    return find_bound_states(reference_params, exact_solver, x_samples=401)


@pytest.fixture(scope="session")
def reference_resonances(reference_params) -> List[float]:
    return find_resonances(reference_params, 0.0, 60.0)


@pytest.fixture(scope="session")
def reference_quasibound(reference_params) -> List[QuasiBoundState]:
    states = []
    for parity in Parity:
        states += find_quasibound(reference_params, parity, (0.5, 60.0))
    return states


@pytest.fixture(scope="session")
def narrow_quasibound(narrow_params) -> List[QuasiBoundState]:
    states = []
    for parity in Parity:
        states += find_quasibound(narrow_params, parity, (0.5, 60.0))
    return states
