"""
Complex special functions of the closed-form solution

Log-gamma comes from scipy; the Gauss hypergeometric function is summed
here because the solver needs complex a, b, c and the z -> 1 connection
formula with both sub-series at 1 - z.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import loggamma

from gsws.core.config import settings
from gsws.core.exceptions import (
    ConvergenceError,
    DegenerateParameterError,
    PoleError,
    ValidationError,
)
from gsws.core.logging import get_logger
from gsws.instrumentation.metrics import HYP2F1_EVALUATIONS
from gsws.services.potential import DerivedParams

logger = get_logger(__name__)

ComplexLike = Union[complex, np.ndarray]


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Gamma-function ratios N1..N4 linking the z = 0 and z = 1 expansions"""
    n1: complex
    n2: complex
    n3: complex
    n4: complex
    log_n1: complex
    log_n2: complex
    log_n3: complex
    log_n4: complex

    @property
    def scale(self) -> float:
        return abs(self.n1) + abs(self.n2) + abs(self.n3) + abs(self.n4)


def _is_nonpositive_integer(z: ComplexLike) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _is_integer(z: complex) -> bool:
    return z.imag == 0 and z.real == round(z.real)


def log_gamma(z: ComplexLike) -> ComplexLike:
    """
    Principal-branch log Gamma(z) for complex z.

    Raises:
        PoleError: If any argument is a non-positive integer
    """
    arr = np.asarray(z, dtype=complex)
    poles = _is_nonpositive_integer(arr)
    if np.any(poles):
        raise PoleError(
            "log_gamma evaluated at a pole",
            details={"arguments": [str(v) for v in np.atleast_1d(arr)[np.atleast_1d(poles)]]},
        )
    result = loggamma(arr)
    if np.ndim(z) == 0:
        return complex(result)
    return result


def _gamma_ratio(numerator: Sequence[complex], denominator: Sequence[complex]) -> complex:
    """prod Gamma(numerator) / prod Gamma(denominator); 1/Gamma vanishes at poles"""
    if np.any(_is_nonpositive_integer(list(denominator))):
        return 0j
    logs = log_gamma(np.array(list(numerator) + list(denominator), dtype=complex))
    n = len(numerator)
    return complex(np.exp(np.sum(logs[:n]) - np.sum(logs[n:])))


def _hyp2f1_series(a: complex, b: complex, c: complex, z: np.ndarray) -> np.ndarray:
    """Defining power series, summed for an array of z until every entry converges"""
    tol = settings.SERIES_TOLERANCE
    max_terms = settings.SERIES_MAX_TERMS
    term = np.ones(z.shape, dtype=complex)
    total = term.copy()
    settled = np.zeros(z.shape, dtype=bool)

    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        total += term
        small = np.abs(term) <= tol * np.abs(total) + 1e-300
        if np.all(small & settled):
            return total
        settled = small
    raise ConvergenceError(
        "Hypergeometric series did not converge",
        details={"a": str(a), "b": str(b), "c": str(c), "max_terms": max_terms},
    )


def _hyp2f1_connection(a: complex, b: complex, c: complex, z: np.ndarray) -> np.ndarray:
    """z -> 1 connection formula with both sub-series evaluated at 1 - z"""
    s = c - a - b
    if _is_integer(s):
        raise DegenerateParameterError(
            "c - a - b is an integer; connection formula is degenerate",
            details={"a": str(a), "b": str(b), "c": str(c)},
        )
    w = 1.0 - z
    first = _gamma_ratio([c, s], [c - a, c - b])
    second = _gamma_ratio([c, -s], [a, b])
    result = np.zeros(z.shape, dtype=complex)
    if first != 0:
        result += first * _hyp2f1_series(a, b, 1.0 - s, w)
    if second != 0:
        result += np.exp(s * np.log(w)) * second * _hyp2f1_series(c - a, c - b, 1.0 + s, w)
    return result


def hyp2f1(a: complex, b: complex, c: complex, z: Union[float, Iterable[float]]) -> ComplexLike:
    """
    Gauss hypergeometric function 2F1(a, b; c; z) for real z in [0, 1).

    Uses the power series for z <= settings.HYP2F1_Z_SWITCH and the
    connection formula beyond it.

    Args:
        a, b, c: Complex parameters
        z: Real argument(s) in [0, 1)

    Raises:
        ValidationError: If z is outside [0, 1)
        PoleError: If c is a non-positive integer
        DegenerateParameterError: If c - a - b is an integer and some z needs the connection formula
        ConvergenceError: If a series exceeds the iteration cap
    """
    a, b, c = complex(a), complex(b), complex(c)
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(zz)) or np.any(zz < 0) or np.any(zz >= 1):
        raise ValidationError("hyp2f1 requires real z in [0, 1)")
    if _is_integer(c) and c.real <= 0:
        raise PoleError("hyp2f1 parameter c is a non-positive integer", details={"c": str(c)})

    switch = settings.HYP2F1_Z_SWITCH
    near = zz <= switch
    result = np.empty(zz.shape, dtype=complex)
    if np.any(near):
        HYP2F1_EVALUATIONS.labels("series").inc()
        result[near] = _hyp2f1_series(a, b, c, zz[near])
    if np.any(~near):
        HYP2F1_EVALUATIONS.labels("connection").inc()
        result[~near] = _hyp2f1_connection(a, b, c, zz[~near])
    return complex(result[0]) if scalar else result


def hyp2f1_derivative(a: complex, b: complex, c: complex, z: Union[float, Iterable[float]]) -> ComplexLike:
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)"""
    return (a * b / c) * hyp2f1(a + 1, b + 1, c + 1, z)


def connection_coefficients(dp: DerivedParams) -> ConnectionCoefficients:
    """
    Connection coefficients N1..N4, computed in the log-Gamma domain.

    With s = c1 - a1 - b1 = -2 nu:
        N1 = G(c1) G(s) / (G(c1 - a1) G(c1 - b1))
        N2 = G(c1) G(-s) / (G(a1) G(b1))
        N3 = G(2 - c1) G(s) / (G(1 - a1) G(1 - b1))
        N4 = G(2 - c1) G(-s) / (G(1 + a1 - c1) G(1 + b1 - c1))

    Raises:
        PoleError: If a Gamma argument is a pole (kappa = 0 among others)
    """
    a, b, c = dp.a1, dp.b1, dp.c1
    s = -2.0 * dp.nu
    args = np.array(
        [c, s, -s, c - a, c - b, a, b, 2.0 - c, 1.0 - a, 1.0 - b, 1.0 + a - c, 1.0 + b - c],
        dtype=complex,
    )
    lg = log_gamma(args)
    log_n1 = lg[0] + lg[1] - (lg[3] + lg[4])
    log_n2 = lg[0] + lg[2] - (lg[5] + lg[6])
    log_n3 = lg[7] + lg[1] - (lg[8] + lg[9])
    log_n4 = lg[7] + lg[2] - (lg[10] + lg[11])
    logs = np.array([log_n1, log_n2, log_n3, log_n4])
    n1, n2, n3, n4 = (complex(v) for v in np.exp(logs))
    return ConnectionCoefficients(
        n1=n1,
        n2=n2,
        n3=n3,
        n4=n4,
        log_n1=complex(log_n1),
        log_n2=complex(log_n2),
        log_n3=complex(log_n3),
        log_n4=complex(log_n4),
    )
