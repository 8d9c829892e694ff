"""Command-line surface: spectrum, threshold, sweep, verify, fit-exponent, serve.

The CLI is a thin client over the service layer: it parses arguments into the
same request models the HTTP endpoints accept, runs them in process by
default or against a running service with --server, and renders the response
models to CSV and SVG.  Exit codes are a stable contract: 0 success, 2 usage
or validation error, 3 solver failure, 4 partial sweep results.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx
from pydantic import ValidationError

from . import output
from .lattice import load_profile_file
from .phase import BracketFailure, InsufficientData, NonMonotonicPredicate
from .service import (
    run_fit_exponent,
    run_spectrum,
    run_sweep,
    run_threshold,
    run_verify,
)
from .service import schemas
from .spectral import ConvergenceFailure, DefectiveCandidate
from .verify import SUITES

_SOLVER_ERRORS = (ConvergenceFailure, DefectiveCandidate, BracketFailure, NonMonotonicPredicate)


class UsageError(ValueError):
    pass


def _ints(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _floats(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated decimal list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptlattice",
        description="Spectra and symmetry-breaking thresholds of PT-symmetric tight-binding chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_gamma=False, site=True):
        p.add_argument("--n", type=int, required=True, help="number of lattice sites")
        if site:
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--m", type=int, help="impurity site (1 <= m <= N//2)")
            group.add_argument("--d", type=int, help="impurity distance d = N + 1 - 2m")
        if with_gamma:
            p.add_argument("--gamma", type=float, required=True, help="impurity strength")
        p.add_argument("--t0", type=float, default=1.0, help="outer hopping amplitude")
        p.add_argument("--tb", type=float, help="inner hopping amplitude (two-segment)")
        p.add_argument(
            "--profile", choices=["two-segment", "alpha", "custom"], default="two-segment"
        )
        p.add_argument("--alpha", type=float, help="power-law exponent (alpha profile)")
        p.add_argument("--profile-file", help="custom profile: one positive decimal per line")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--server", help="base URL of a running service; default is in-process")

    p = sub.add_parser("spectrum", help="all eigenvalues with classification")
    add_common(p, with_gamma=True)

    p = sub.add_parser("threshold", help="symmetry-breaking threshold by bisection")
    add_common(p)
    p.add_argument("--gamma-max", type=float, help="upper bisection bracket")

    p = sub.add_parser("sweep", help="threshold sweep over (d, tb) grids")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=_ints, required=True, help="comma-separated distances")
    p.add_argument("--tb", type=_floats, required=True, help="comma-separated inner hoppings")
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--out", help="output CSV file (default: stdout)")
    p.add_argument("--svg", help="also write an SVG plot to this path")
    p.add_argument("--server", help="base URL of a running service")

    p = sub.add_parser("fit-exponent", help="power-law exponent of Gamma_c against T_b")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=_ints, required=True)
    p.add_argument("--window-lo", type=float, default=0.05)
    p.add_argument("--window-hi", type=float, default=0.3)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--out", help="output CSV file (default: stdout)")
    p.add_argument("--server", help="base URL of a running service")

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", choices=list(SUITES), required=True)
    p.add_argument("--seed", type=int, required=True, help="seed for the randomized checks")
    p.add_argument("--out", help="output report file (default: stdout)")
    p.add_argument("--server", help="base URL of a running service")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _profile_model(args, n_sites: int) -> schemas.ProfileModel:
    if args.profile == "two-segment":
        if args.tb is None:
            raise UsageError("two-segment profile requires --tb")
        return schemas.ProfileModel(kind="two-segment", t0=args.t0, tb=args.tb)
    if args.profile == "alpha":
        if args.alpha is None:
            raise UsageError("alpha profile requires --alpha")
        return schemas.ProfileModel(kind="alpha", t0=args.t0, alpha=args.alpha)
    if not args.profile_file:
        raise UsageError("custom profile requires --profile-file")
    profile = load_profile_file(args.profile_file)
    if len(profile.amplitudes) != n_sites - 1:
        raise UsageError(
            f"profile file holds {len(profile.amplitudes)} amplitudes, "
            f"N={n_sites} needs {n_sites - 1}"
        )
    return schemas.ProfileModel(kind="custom", amplitudes=list(profile.amplitudes))


def _impurity_site(args) -> int:
    if args.m is not None:
        return args.m
    d = args.d
    if (args.n + 1 - d) % 2 != 0 or (args.n + 1 - d) // 2 < 1:
        raise UsageError(f"distance d={d} is incompatible with N={args.n}")
    return (args.n + 1 - d) // 2


class _Runner:
    """Dispatches request models in process or over HTTP."""

    def __init__(self, server: str | None, http_client: httpx.Client | None = None):
        self.server = server
        self._client = http_client

    def call(self, path: str, request, local, response_cls):
        if self.server is None and self._client is None:
            return local(request)
        client = self._client or httpx.Client(base_url=self.server, timeout=600.0)
        try:
            reply = client.post(path, json=request.model_dump())
        finally:
            if self._client is None:
                client.close()
        if reply.status_code == 400 or reply.status_code == 422:
            raise UsageError(f"service rejected the request: {reply.text}")
        if reply.status_code == 409:
            raise ConvergenceFailure(f"service solver failure: {reply.text}")
        reply.raise_for_status()
        return response_cls.model_validate(reply.json())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_spectrum(args, runner: _Runner) -> int:
    site = _impurity_site(args)
    req = schemas.SpectrumRequest(
        n_sites=args.n,
        impurity_site=site,
        gamma=args.gamma,
        profile=_profile_model(args, args.n),
    )
    resp = runner.call("/spectrum", req, run_spectrum, schemas.SpectrumResponse)
    params = {
        "n_sites": req.n_sites,
        "impurity_site": req.impurity_site,
        "gamma": req.gamma,
        "profile": req.profile.describe(),
    }
    _emit(output.spectrum_csv(params, resp.rows, resp.n_complex), args.out)
    return 0


def _cmd_threshold(args, runner: _Runner) -> int:
    site = _impurity_site(args)
    req = schemas.ThresholdRequest(
        n_sites=args.n,
        impurity_site=site,
        profile=_profile_model(args, args.n),
        gamma_max=args.gamma_max,
    )
    resp = runner.call("/threshold", req, run_threshold, schemas.ThresholdResponse)
    params = {
        "n_sites": req.n_sites,
        "impurity_site": req.impurity_site,
        "profile": req.profile.describe(),
        "gamma_max": req.gamma_max if req.gamma_max is not None else "auto",
    }
    rec = resp.record
    _emit(output.threshold_csv(params, rec), args.out)
    print(
        f"gamma_c={output.fmt(rec.gamma_c)} Gamma_c={output.fmt(rec.gamma_c_over_t0)} "
        f"bracket_width={rec.bracket_width:.3e} n_complex_above={rec.n_complex_above}",
        file=sys.stderr,
    )
    return 0


def _cmd_sweep(args, runner: _Runner) -> int:
    req = schemas.SweepRequest(n_sites=args.n, d_list=args.d, tb_grid=args.tb, t0=args.t0)
    resp = runner.call("/sweep", req, run_sweep, schemas.SweepResponse)
    params = {
        "n_sites": req.n_sites,
        "d_list": ",".join(str(d) for d in req.d_list),
        "tb_grid": ",".join(output.fmt(t) for t in req.tb_grid),
        "t0": req.t0,
    }
    _emit(output.sweep_csv(params, resp.records, resp.failures), args.out)
    if args.svg:
        if not resp.records:
            raise UsageError("no successful sweep records; nothing to plot")
        Path(args.svg).write_text(output.sweep_svg(resp.records))
    if resp.failures:
        for failure in resp.failures:
            print(
                f"sweep entry failed: d={failure.d} tb={failure.tb}: {failure.reason}",
                file=sys.stderr,
            )
        return 4
    return 0


def _cmd_fit_exponent(args, runner: _Runner) -> int:
    if not (0.0 < args.window_lo < args.window_hi < 1.0):
        raise UsageError("fit window must satisfy 0 < lo < hi < 1")
    if args.points < 8:
        raise UsageError("at least 8 grid points are required for the fit")
    req = schemas.FitExponentRequest(
        n_sites=args.n,
        d_list=args.d,
        window_lo=args.window_lo,
        window_hi=args.window_hi,
        points=args.points,
        t0=args.t0,
    )
    resp = runner.call(
        "/fit-exponent", req, run_fit_exponent, schemas.FitExponentResponse
    )
    params = {
        "n_sites": req.n_sites,
        "d_list": ",".join(str(d) for d in req.d_list),
        "window_lo": req.window_lo,
        "window_hi": req.window_hi,
        "points": req.points,
        "t0": req.t0,
    }
    _emit(output.fit_csv(params, resp.fits), args.out)
    return 0


def _cmd_verify(args, runner: _Runner) -> int:
    req = schemas.VerifyRequest(suite=args.suite, seed=args.seed)
    resp = runner.call("/verify", req, run_verify, schemas.VerifyResponse)
    _emit(output.verify_report(resp.checks), args.out)
    return 0 if resp.passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("ptlattice.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv=None, http_client: httpx.Client | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    if args.command == "serve":
        return _cmd_serve(args)

    runner = _Runner(getattr(args, "server", None), http_client)
    handlers = {
        "spectrum": _cmd_spectrum,
        "threshold": _cmd_threshold,
        "sweep": _cmd_sweep,
        "fit-exponent": _cmd_fit_exponent,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args, runner)
    except (UsageError, ValidationError, ValueError, InsufficientData, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as err:
        print(f"solver failure in {args.command}: {type(err).__name__}: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
