"""
Input validation utilities
"""
import math
from typing import Any, Dict, Optional

from gsws.core.exceptions import ValidationError


class InputValidator:
    """Input validation utilities"""

    @staticmethod
    def validate_finite(value: float) -> bool:
        """Validate that a value is a finite real number"""
        try:
            return math.isfinite(float(value))
        except (TypeError, ValueError):
            return False

    @staticmethod
    def validate_positive(value: float) -> bool:
        """Validate strictly positive finite value"""
        return InputValidator.validate_finite(value) and value > 0

    @staticmethod
    def validate_range(lo: float, hi: float) -> bool:
        """Validate an ordered finite interval"""
        return (
            InputValidator.validate_finite(lo)
            and InputValidator.validate_finite(hi)
            and lo < hi
        )

    @staticmethod
    def validate_count(count: int, minimum: int = 1) -> bool:
        """Validate an integer sample or step count"""
        return isinstance(count, int) and not isinstance(count, bool) and count >= minimum


def validate_sample_count(count: Any, name: str = "x_samples", minimum: int = 2) -> int:
    """
    Raises:
        ValidationError: If the count is not an integer >= minimum
    """
    if not InputValidator.validate_count(count, minimum=minimum):
        raise ValidationError(
            f"{name} must be an integer >= {minimum}",
            details={name: count, "minimum": minimum},
        )
    return count


def validate_energy_window(e_min: float, e_max: float, allow_zero: bool = True) -> None:
    """
    Validate a real energy search window.

    Raises:
        ValidationError: If the window is empty, unordered or negative
    """
    details: Dict[str, Any] = {"e_min": e_min, "e_max": e_max}
    if not InputValidator.validate_range(e_min, e_max):
        raise ValidationError("Energy window must satisfy e_min < e_max", details=details)
    if e_min < 0 or (e_min == 0 and not allow_zero):
        raise ValidationError("Energy window must lie on the positive axis", details=details)


def validate_sweep_input(
    axis: str,
    lo: float,
    hi: float,
    steps: int,
    fixed_energy: Optional[float] = None,
) -> None:
    """
    Validate parameter-sweep input.

    Raises:
        ValidationError: If the range, step count or fixed energy is invalid
    """
    details = {"axis": axis, "lo": lo, "hi": hi, "steps": steps}
    if not InputValidator.validate_range(lo, hi):
        raise ValidationError("Sweep range must satisfy lo < hi", details=details)
    if not InputValidator.validate_count(steps, minimum=2):
        raise ValidationError("Sweep needs at least 2 steps", details=details)
    if axis == "energy":
        if hi <= 0:
            raise ValidationError("Energy sweep must reach positive energies", details=details)
    elif fixed_energy is None or not InputValidator.validate_positive(fixed_energy):
        raise ValidationError(
            "A positive fixed energy is required for non-energy axes",
            details={**details, "fixed_energy": fixed_energy},
        )


def validate_sample_range(x_min: float, x_max: float, samples: int) -> None:
    """
    Validate a spatial sampling request.

    Raises:
        ValidationError: If the range is unordered or the count is below 2
    """
    details = {"x_min": x_min, "x_max": x_max, "samples": samples}
    if not InputValidator.validate_range(x_min, x_max):
        raise ValidationError("Sample range must satisfy x_min < x_max", details=details)
    if not InputValidator.validate_count(samples, minimum=2):
        raise ValidationError("At least 2 samples are required", details=details)
