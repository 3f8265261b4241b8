from pathlib import Path
from typing import Union

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

# Dedicated registry: solver metrics never mix with a host process's default registry.
REGISTRY = CollectorRegistry()

ROOT_SOLVES = Counter(
    "gsws_root_solves_total",
    "Root refinements by search kind and outcome",
    ["kind", "outcome"],
    registry=REGISTRY,
)
SOLVE_LATENCY = Histogram(
    "gsws_solve_duration_seconds",
    "Wall time of complete searches", ["kind"],
    registry=REGISTRY,
)
HYP2F1_EVALUATIONS = Counter(
    "gsws_hyp2f1_evaluations_total",
    "Hypergeometric evaluations by branch",
    ["branch"],
    registry=REGISTRY,
)


def write_metrics(path: Union[str, Path]) -> None:
    """Write the registry in the Prometheus text exposition format"""
    write_to_textfile(str(path), REGISTRY)
