"""
Configuration, exceptions, validation and logging tests
"""
import json
import logging

import pytest

from gsws.core.config import Settings, settings
from gsws.core.exceptions import (
    BranchError,
    ConvergenceError,
    DomainError,
    GridResolutionError,
    GswsException,
    NoBarrierError,
    ValidationError,
    VerificationError,
)
from gsws.core.logging import JSONFormatter, StructuredLogger
from gsws.core.validation import (
    InputValidator,
    validate_energy_window,
    validate_sample_count,
    validate_sample_range,
    validate_sweep_input,
)
from gsws.instrumentation.metrics import ROOT_SOLVES, write_metrics


@pytest.mark.unit
class TestSettings:
    """Test settings defaults and environment overrides"""

    def test_physical_defaults(self):
        assert settings.DEFAULT_MC2 == 940.0
        assert settings.DEFAULT_HBARC == 197.329
        assert settings.DEBUG_CORRUPT_THETA_BRANCH is False

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("GSWS_RESONANCE_SCAN_POINTS", "123")
        monkeypatch.setenv("GSWS_LOG_LEVEL", " debug ")
        fresh = Settings()
        assert fresh.RESONANCE_SCAN_POINTS == 123
        assert fresh.LOG_LEVEL == "DEBUG"

    def test_settings_config(self, monkeypatch):
        assert Settings.model_config["env_prefix"] == "GSWS_"
        assert Settings.model_config["case_sensitive"] is True
        monkeypatch.setenv("gsws_RESONANCE_SCAN_POINTS", "7")
        assert Settings().RESONANCE_SCAN_POINTS == 2000
        monkeypatch.setenv("GSWS_ORACLE_HALVING_STEP", "0.005")
        assert Settings().ORACLE_HALVING_STEP == 0.005


@pytest.mark.unit
class TestExceptions:
    """Test exit codes carried by the exception hierarchy"""

    @pytest.mark.parametrize(
        "exc, code",
        [
            (ValidationError("bad"), 1),
            (DomainError("bad"), 1),
            (NoBarrierError(), 2),
            (ConvergenceError("slow"), 2),
            (BranchError("branch"), 2),
            (GridResolutionError("coarse"), 2),
            (VerificationError("failed"), 3),
        ],
    )
    def test_exit_codes(self, exc, code):
        assert isinstance(exc, GswsException)
        assert exc.exit_code == code

    def test_details_default_to_empty(self):
        assert ValidationError("bad").details == {}
        assert NoBarrierError(details={"w0": 1.0}).details == {"w0": 1.0}

    def test_domain_error_is_validation_error(self):
        with pytest.raises(ValidationError):
            raise DomainError("energy outside the admissible set")


@pytest.mark.unit
class TestValidation:
    """Test input validation helpers"""

    def test_input_validator(self):
        assert InputValidator.validate_finite(1.5)
        assert not InputValidator.validate_finite(float("nan"))
        assert not InputValidator.validate_finite("abc")
        assert InputValidator.validate_positive(2.0)
        assert not InputValidator.validate_positive(0.0)
        assert InputValidator.validate_range(0.0, 1.0)
        assert not InputValidator.validate_range(1.0, 1.0)
        assert InputValidator.validate_count(5, minimum=2)
        assert not InputValidator.validate_count(True)
        assert not InputValidator.validate_count(2.0)

    def test_energy_window(self):
        validate_energy_window(0.0, 60.0)
        with pytest.raises(ValidationError):
            validate_energy_window(0.0, 60.0, allow_zero=False)
        with pytest.raises(ValidationError):
            validate_energy_window(10.0, 5.0)
        with pytest.raises(ValidationError):
            validate_energy_window(-1.0, 5.0)

    def test_sweep_input(self):
        validate_sweep_input("energy", 0.1, 80.0, 10)
        validate_sweep_input("a", 0.5, 2.0, 10, fixed_energy=20.0)
        with pytest.raises(ValidationError):
            validate_sweep_input("a", 0.5, 2.0, 10)
        with pytest.raises(ValidationError):
            validate_sweep_input("energy", 0.1, 80.0, 1)
        with pytest.raises(ValidationError):
            validate_sweep_input("energy", -5.0, -1.0, 10)

    def test_sample_range(self):
        validate_sample_range(-15.0, 15.0, 2)
        with pytest.raises(ValidationError):
            validate_sample_range(15.0, -15.0, 10)
        with pytest.raises(ValidationError):
            validate_sample_range(-15.0, 15.0, 1)

    @pytest.mark.parametrize("count", [1, 0, -5, 2.5, True, "10"])
    def test_sample_count_rejected(self, count):
        with pytest.raises(ValidationError) as exc_info:
            validate_sample_count(count)
        assert exc_info.value.exit_code == 1

    def test_sample_count_accepted(self):
        assert validate_sample_count(401) == 401


@pytest.mark.unit
class TestLogging:
    """Test structured logging"""

    def test_json_formatter_includes_extra_fields(self):
        record = logging.LogRecord("gsws.test", logging.INFO, __file__, 10, "Event: scan", (), None)
        record.event_type = "scan"
        record.count = 3
        data = json.loads(JSONFormatter().format(record))
        assert data["level"] == "INFO"
        assert data["message"] == "Event: scan"
        assert data["event_type"] == "scan"
        assert data["count"] == 3
        assert "timestamp" in data

    def test_structured_logger_performance(self, caplog):
        logger = logging.getLogger("gsws.test.performance")
        with caplog.at_level(logging.INFO, logger="gsws.test.performance"):
            StructuredLogger(logger).log_performance("find_bound_states", 0.25, count=7)
        record = caplog.records[-1]
        assert record.operation == "find_bound_states"
        assert record.duration_ms == pytest.approx(250.0)
        assert record.count == 7


@pytest.mark.unit
class TestMetrics:
    """Test the Prometheus text export"""

    def test_write_metrics(self, tmp_path):
        ROOT_SOLVES.labels("bound", "accepted").inc()
        path = tmp_path / "metrics.prom"
        write_metrics(path)
        text = path.read_text()
        assert "gsws_root_solves_total" in text
        assert 'kind="bound"' in text
