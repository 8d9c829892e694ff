"""FastAPI service wrapping the core package.

The run_* functions are the in-process entry points shared with the CLI; the
HTTP routes add error translation only.  Domain validation errors map to 400,
solver failures to 409, so a thin client can reproduce the CLI exit-code
contract from status codes.
"""

from __future__ import annotations

from contextlib import contextmanager

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..lattice import LatticeSpec, build_hamiltonian
from ..phase import (
    BracketFailure,
    InsufficientData,
    NonMonotonicPredicate,
    SweepRecord,
    find_gamma_c,
    fit_exponent,
    sweep_phase_diagram,
)
from ..spectral import ConvergenceFailure, DefectiveCandidate, eigenvalues
from ..verify import run_suite
from . import schemas

SOLVER_ERRORS = (
    ConvergenceFailure,
    DefectiveCandidate,
    BracketFailure,
    NonMonotonicPredicate,
)


def run_spectrum(req: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
    spec = LatticeSpec(req.n_sites, req.impurity_site, req.gamma, req.profile.to_profile())
    spectrum = eigenvalues(build_hamiltonian(spec))
    rows = [
        schemas.SpectrumRow(
            index=i + 1,
            re=ev.real,
            im=ev.imag,
            classification=cls,
            residual=res,
        )
        for i, (ev, cls, res) in enumerate(
            zip(spectrum.eigenvalues, spectrum.classifications, spectrum.residuals)
        )
    ]
    return schemas.SpectrumResponse(
        rows=rows, n_complex=spectrum.n_complex, e_scale=spectrum.e_scale
    )


def _record_model(rec: SweepRecord) -> schemas.SweepRecordModel:
    return schemas.SweepRecordModel(
        n_sites=rec.n_sites,
        impurity_site=rec.impurity_site,
        d=rec.d,
        t0=rec.t0,
        tb=rec.tb,
        tb_over_t0=rec.tb_over_t0,
        gamma_c=rec.gamma_c,
        gamma_c_over_t0=rec.gamma_c_over_t0,
        n_complex_above=rec.n_complex_above,
        bracket_width=rec.bracket_width,
    )


def run_threshold(req: schemas.ThresholdRequest) -> schemas.ThresholdResponse:
    spec = LatticeSpec(req.n_sites, req.impurity_site, 0.0, req.profile.to_profile())
    found = find_gamma_c(spec, req.gamma_max)
    # Profiles without an explicit (t0, tb) pair report the center bond as tb
    # and use t0 = 1 for the dimensionless columns.
    t0 = spec.profile.reference_amplitude or 1.0
    if req.profile.kind == "two-segment":
        tb = req.profile.tb
    else:
        tb = spec.bond_amplitudes[spec.n_sites // 2 - 1]
    record = SweepRecord(
        n_sites=spec.n_sites,
        impurity_site=spec.impurity_site,
        d=spec.distance,
        t0=t0,
        tb=tb,
        tb_over_t0=tb / t0,
        gamma_c=found.gamma_c,
        gamma_c_over_t0=found.gamma_c / t0,
        n_complex_above=found.n_complex_above,
        bracket_width=found.bracket_width,
    )
    return schemas.ThresholdResponse(
        record=_record_model(record),
        n_complex_below=found.n_complex_below,
        iterations=found.iterations,
    )


def run_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    outcome = sweep_phase_diagram(
        req.n_sites, req.d_list, req.tb_grid, req.t0, audit_points=req.audit_points
    )
    return schemas.SweepResponse(
        records=[_record_model(r) for r in outcome.records],
        failures=[
            schemas.SweepFailureModel(d=f.d, tb=f.tb, reason=f.reason)
            for f in outcome.failures
        ],
    )


def run_fit_exponent(req: schemas.FitExponentRequest) -> schemas.FitExponentResponse:
    if not (0.0 < req.window_lo < req.window_hi < 1.0):
        raise ValueError("fit window must satisfy 0 < lo < hi < 1")
    ratio = req.window_hi / req.window_lo
    tb_grid = [
        req.t0 * req.window_lo * ratio ** (i / (req.points - 1)) for i in range(req.points)
    ]
    fits = []
    for d in req.d_list:
        outcome = sweep_phase_diagram(req.n_sites, [d], tb_grid, req.t0)
        fit = fit_exponent(outcome.records, (req.window_lo, req.window_hi))
        fits.append(
            schemas.ExponentFitModel(
                d=fit.d,
                eta=fit.eta,
                stderr=fit.stderr,
                window_lo=fit.window[0],
                window_hi=fit.window[1],
                n_points=fit.n_points,
                points=list(fit.points),
            )
        )
    return schemas.FitExponentResponse(fits=fits)


def run_verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    checks = run_suite(req.suite, req.seed)
    return schemas.VerifyResponse(
        suite=req.suite,
        seed=req.seed,
        checks=[
            schemas.CheckModel(name=c.name, passed=c.passed, measured=c.measured)
            for c in checks
        ],
        passed=all(c.passed for c in checks),
    )


@contextmanager
def _translated_errors():
    try:
        yield
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err)) from err
    except InsufficientData as err:
        raise HTTPException(status_code=400, detail=str(err)) from err
    except SOLVER_ERRORS as err:
        raise HTTPException(
            status_code=409, detail=f"{type(err).__name__}: {err}"
        ) from err


app = FastAPI(
    title="ptlattice service",
    version=__version__,
    description="Spectra and symmetry-breaking thresholds of PT-symmetric tight-binding chains",
)


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/spectrum", response_model=schemas.SpectrumResponse)
def spectrum_endpoint(req: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
    with _translated_errors():
        return run_spectrum(req)


@app.post("/threshold", response_model=schemas.ThresholdResponse)
def threshold_endpoint(req: schemas.ThresholdRequest) -> schemas.ThresholdResponse:
    with _translated_errors():
        return run_threshold(req)


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep_endpoint(req: schemas.SweepRequest) -> schemas.SweepResponse:
    with _translated_errors():
        return run_sweep(req)


@app.post("/fit-exponent", response_model=schemas.FitExponentResponse)
def fit_exponent_endpoint(req: schemas.FitExponentRequest) -> schemas.FitExponentResponse:
    with _translated_errors():
        return run_fit_exponent(req)


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify_endpoint(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    with _translated_errors():
        return run_verify(req)
