"""
Closed-form hypergeometric solutions and their values at the matching point

On the left branch (x <= 0) the Schrodinger equation is solved in the
variable z = 1 / (1 + e^{-a(x + L)}) by

    regular:    u1 = z^mu (1 - z)^nu 2F1(a1, b1; c1; z)
    irregular:  u2 = z^-mu (1 - z)^nu 2F1(1 + a1 - c1, 1 + b1 - c1; 2 - c1; z)

and the right branch follows from V(-x) = V(x) as u(-x). Near x = 0 the
connection formula turns u1 into N1 e^{-i kappa (x + L)} + N2 e^{i kappa (x + L)}
(u2 likewise with N3, N4) up to terms of order e^{-aL}.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy.special import expit

from gsws.schemas.potential import PotentialParams
from gsws.services.potential import DerivedParams, MatchingScheme
from gsws.services.special_functions import (
    ConnectionCoefficients,
    connection_coefficients,
    hyp2f1,
    hyp2f1_derivative,
)

ArrayLike = Union[float, np.ndarray]


class SolutionKind(str, Enum):
    REGULAR = "regular"  # z^mu at x -> -inf
    IRREGULAR = "irregular"  # z^-mu at x -> -inf


@dataclass(frozen=True)
class BoundaryValues:
    """Values and x-derivatives of u1 and u2 at x = 0 from the left"""
    u1: complex
    du1: complex
    u2: complex
    du2: complex


def _hypergeometric_parameters(dp: DerivedParams, kind: SolutionKind) -> Tuple[complex, complex, complex, complex]:
    if kind is SolutionKind.REGULAR:
        return dp.mu, dp.a1, dp.b1, dp.c1
    return -dp.mu, 1.0 + dp.a1 - dp.c1, 1.0 + dp.b1 - dp.c1, 2.0 - dp.c1


def left_solution(
    params: PotentialParams,
    dp: DerivedParams,
    x: ArrayLike,
    kind: SolutionKind = SolutionKind.REGULAR,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Value and x-derivative of a left-branch solution at x <= 0.

    Args:
        params: Potential parameters
        dp: Derived parameters at the energy of interest
        x: Position(s) in fm, all <= 0
        kind: Regular (u1) or irregular (u2) solution
    """
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    s = params.a * (xx + params.L)
    z = expit(s)
    w = expit(-s)  # 1 - z without cancellation
    m, a, b, c = _hypergeometric_parameters(dp, kind)

    prefactor = np.exp(m * np.log(z) + dp.nu * np.log(w))
    f = np.atleast_1d(hyp2f1(a, b, c, z))
    df = np.atleast_1d(hyp2f1_derivative(a, b, c, z))

    value = prefactor * f
    # d/dx = a z (1 - z) d/dz
    derivative = params.a * prefactor * ((m * w - dp.nu * z) * f + z * w * df)
    return value, derivative


def symmetric_extension(
    params: PotentialParams,
    dp: DerivedParams,
    x: ArrayLike,
    kind: SolutionKind,
    odd: bool,
) -> np.ndarray:
    """
    Extend a left-branch solution to all x with definite parity.

    Even: phi(x) = u(-|x|); odd: phi(x) = -sign(x) u(-|x|), so phi(0) = 0.
    """
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    value, _ = left_solution(params, dp, -np.abs(xx), kind)
    if odd:
        return -np.sign(xx) * value
    return value


def asymptotic_boundary_values(
    params: PotentialParams,
    dp: DerivedParams,
    coefficients: ConnectionCoefficients,
) -> BoundaryValues:
    """Boundary values from the plane-wave forms of u1 and u2 near x = 0"""
    kappa = dp.kappa
    ahead = np.exp(1j * kappa * params.L)
    behind = np.exp(-1j * kappa * params.L)
    n1, n2, n3, n4 = coefficients.n1, coefficients.n2, coefficients.n3, coefficients.n4
    return BoundaryValues(
        u1=complex(n1 * behind + n2 * ahead),
        du1=complex(-1j * kappa * (n1 * behind - n2 * ahead)),
        u2=complex(n3 * behind + n4 * ahead),
        du2=complex(-1j * kappa * (n3 * behind - n4 * ahead)),
    )


def exact_boundary_values(params: PotentialParams, dp: DerivedParams) -> BoundaryValues:
    """Boundary values from the hypergeometric closed forms evaluated at x = 0"""
    u1, du1 = left_solution(params, dp, 0.0, SolutionKind.REGULAR)
    u2, du2 = left_solution(params, dp, 0.0, SolutionKind.IRREGULAR)
    return BoundaryValues(
        u1=complex(u1[0]),
        du1=complex(du1[0]),
        u2=complex(u2[0]),
        du2=complex(du2[0]),
    )


def boundary_values(
    params: PotentialParams,
    dp: DerivedParams,
    scheme: MatchingScheme,
) -> BoundaryValues:
    """Boundary values at x = 0 in the requested matching scheme"""
    if scheme is MatchingScheme.EXACT:
        return exact_boundary_values(params, dp)
    return asymptotic_boundary_values(params, dp, connection_coefficients(dp))


def regular_boundary_values(
    params: PotentialParams,
    dp: DerivedParams,
    scheme: MatchingScheme,
) -> Tuple[complex, complex]:
    """u1 and u1' at x = 0; the bound-state problem needs nothing else"""
    if scheme is MatchingScheme.EXACT:
        u1, du1 = left_solution(params, dp, 0.0, SolutionKind.REGULAR)
        return complex(u1[0]), complex(du1[0])
    values = asymptotic_boundary_values(params, dp, connection_coefficients(dp))
    return values.u1, values.du1


def irregular_boundary_values(
    params: PotentialParams,
    dp: DerivedParams,
    scheme: MatchingScheme,
) -> Tuple[complex, complex]:
    """u2 and u2' at x = 0; the outgoing-wave problem needs nothing else"""
    if scheme is MatchingScheme.EXACT:
        u2, du2 = left_solution(params, dp, 0.0, SolutionKind.IRREGULAR)
        return complex(u2[0]), complex(du2[0])
    values = asymptotic_boundary_values(params, dp, connection_coefficients(dp))
    return values.u2, values.du2


def phase_normalize(
    params: PotentialParams,
    dp: DerivedParams,
    kind: SolutionKind,
) -> complex:
    """Unit factor making the left-branch solution real and positive at x = -L"""
    value, _ = left_solution(params, dp, -params.L, kind)
    anchor = complex(value[0])
    if anchor == 0:
        return 1.0 + 0j
    return abs(anchor) / anchor
