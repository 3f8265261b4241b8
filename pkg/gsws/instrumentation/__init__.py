from gsws.instrumentation.metrics import (
    HYP2F1_EVALUATIONS,
    REGISTRY,
    ROOT_SOLVES,
    SOLVE_LATENCY,
    write_metrics,
)

__all__ = ["HYP2F1_EVALUATIONS", "REGISTRY", "ROOT_SOLVES", "SOLVE_LATENCY", "write_metrics"]
