"""HTTP service layer: pydantic schemas and the FastAPI application."""

from .app import (
    app,
    run_fit_exponent,
    run_spectrum,
    run_sweep,
    run_threshold,
    run_verify,
)

__all__ = [
    "app",
    "run_fit_exponent",
    "run_spectrum",
    "run_sweep",
    "run_threshold",
    "run_verify",
]
