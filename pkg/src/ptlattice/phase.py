"""Threshold location, phase-diagram sweeps, exponent fits, scaling studies.

The order parameter is the number of complex-classified eigenvalues, a
discrete count, so the breaking threshold gamma_c is found by bisection on
the broken/unbroken predicate; no smoothness at the exceptional point is
assumed.  Monotonicity of the predicate in gamma is required for bisection
and is audited separately on a gamma grid for every sweep entry; violations
are hard errors, never silently absorbed.

Bisections warm-start each spectrum solve from the roots of the previous
gamma, which keeps a full sweep within an interactive budget; a cold restart
covers the rare warm-start failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .lattice import (
    HoppingProfile,
    LatticeSpec,
    TridiagonalHamiltonian,
    alpha_profile,
    bandwidth,
    build_hamiltonian,
    two_segment_profile,
)
from .spectral import ConvergenceFailure, Spectrum, eigenvalues

_BRACKET_RTOL = 1e-10
_MAX_BISECTIONS = 80
_DEFAULT_AUDIT_POINTS = 64


class BracketFailure(RuntimeError):
    """The predicate is not broken at gamma_max; the caller must enlarge it."""


class InsufficientData(ValueError):
    """Too few sweep records inside the fit window."""


class NonMonotonicPredicate(RuntimeError):
    """The broken/unbroken predicate flipped more than once along gamma."""


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection output: gamma_c with its final bracket and edge counts."""

    gamma_c: float
    bracket: tuple[float, float]
    n_complex_below: int
    n_complex_above: int
    iterations: int

    def __post_init__(self):
        if self.n_complex_below != 0:
            raise ValueError("lower bracket edge must be unbroken")
        if self.n_complex_above < 2:
            raise ValueError("upper bracket edge must carry at least one complex pair")

    @property
    def bracket_width(self) -> float:
        return self.bracket[1] - self.bracket[0]


@dataclass(frozen=True)
class SweepRecord:
    """One phase-diagram point: the threshold for a (distance, hopping) pair."""

    n_sites: int
    impurity_site: int
    d: int
    t0: float
    tb: float
    tb_over_t0: float
    gamma_c: float
    gamma_c_over_t0: float
    n_complex_above: int
    bracket_width: float

    def __post_init__(self):
        if self.d != self.n_sites + 1 - 2 * self.impurity_site:
            raise ValueError("inconsistent impurity distance")


@dataclass(frozen=True)
class SweepFailure:
    """A sweep entry whose bisection failed, kept for reporting."""

    d: int
    tb: float
    reason: str


@dataclass(frozen=True)
class SweepOutcome:
    records: tuple[SweepRecord, ...]
    failures: tuple[SweepFailure, ...]


@dataclass(frozen=True)
class ExponentFit:
    """Ordinary least squares slope of log Gamma_c against log T_b."""

    d: int
    eta: float
    stderr: float
    window: tuple[float, float]
    points: tuple[tuple[float, float], ...]

    @property
    def n_points(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ClauseResult:
    name: str
    passed: bool
    measured: str


@dataclass(frozen=True)
class MaximalBreakingReport:
    n_sites: int
    t_mid: float
    clauses: tuple[ClauseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)


@dataclass(frozen=True)
class FragilityPoint:
    n_sites: int
    gamma_c: float
    bandwidth: float
    ratio: float


def is_pt_broken(spec: LatticeSpec) -> tuple[bool, int]:
    """Whether any eigenvalue is complex-classified, with the count."""
    spectrum = eigenvalues(build_hamiltonian(spec))
    return spectrum.n_complex > 0, spectrum.n_complex


def find_gamma_c(spec: LatticeSpec, gamma_max: float | None = None) -> ThresholdResult:
    """Bisect the impurity strength to the symmetry-breaking threshold.

    The gamma field of `spec` is not consulted; gamma is the search variable.
    The default upper bracket is 2 * max hopping * N.  Raises BracketFailure
    when gamma_max is still unbroken.
    """
    hop_scale = max(spec.bond_amplitudes)
    if gamma_max is None:
        gamma_max = 2.0 * hop_scale * spec.n_sites

    def build(gamma: float) -> TridiagonalHamiltonian:
        return build_hamiltonian(spec.with_gamma(gamma))

    return _bisect_threshold(build, hop_scale, gamma_max)


def _bisect_threshold(
    build: Callable[[float], TridiagonalHamiltonian],
    hop_scale: float,
    gamma_max: float,
) -> ThresholdResult:
    tol = _BRACKET_RTOL * hop_scale
    warm: tuple[complex, ...] | None = None

    def probe(gamma: float) -> int:
        nonlocal warm
        spectrum = _solve(build(gamma), warm)
        warm = spectrum.eigenvalues
        return spectrum.n_complex

    n_hi = probe(gamma_max)
    if n_hi == 0:
        raise BracketFailure(
            f"predicate is unbroken at gamma_max={gamma_max!r}; enlarge the bracket"
        )
    lo, hi = 0.0, gamma_max
    n_lo = 0
    iterations = 0
    while hi - lo > tol:
        if iterations >= _MAX_BISECTIONS:
            raise ConvergenceFailure(
                f"bisection bracket {hi - lo:.3e} still above {tol:.3e} "
                f"after {_MAX_BISECTIONS} iterations"
            )
        mid = 0.5 * (lo + hi)
        n_mid = probe(mid)
        if n_mid > 0:
            hi, n_hi = mid, n_mid
        else:
            lo, n_lo = mid, n_mid
        iterations += 1
    return ThresholdResult(
        gamma_c=0.5 * (lo + hi),
        bracket=(lo, hi),
        n_complex_below=n_lo,
        n_complex_above=n_hi,
        iterations=iterations,
    )


def _solve(h: TridiagonalHamiltonian, warm) -> Spectrum:
    if warm is not None:
        try:
            return eigenvalues(h, initial=warm, tries=1)
        except ConvergenceFailure:
            pass
    return eigenvalues(h)


def audit_monotonicity(
    spec: LatticeSpec, gamma_c: float, points: int = _DEFAULT_AUDIT_POINTS
) -> None:
    """Check that the broken predicate flips exactly once along a gamma grid.

    Samples `points` strengths up to 1.5 * gamma_c; the flag pattern must be
    a block of unbroken values followed by a block of broken ones.  Raises
    NonMonotonicPredicate otherwise.
    """
    if points <= 0:
        return
    top = 1.5 * gamma_c
    if top <= 0:
        return
    warm: tuple[complex, ...] | None = None
    flags = []
    grid = [top * (i + 1) / points for i in range(points)]
    for gamma in grid:
        spectrum = _solve(build_hamiltonian(spec.with_gamma(gamma)), warm)
        warm = spectrum.eigenvalues
        flags.append(spectrum.n_complex > 0)
    first_broken = flags.index(True) if True in flags else len(flags)
    if not all(flags[first_broken:]):
        offenders = [
            f"gamma={grid[i]:.6g}:{'broken' if f else 'unbroken'}"
            for i, f in enumerate(flags)
        ]
        raise NonMonotonicPredicate(
            "broken/unbroken predicate is not monotone in gamma: " + ", ".join(offenders)
        )


def sweep_phase_diagram(
    n_sites: int,
    d_list: Sequence[int],
    tb_grid: Sequence[float],
    t0: float = 1.0,
    audit_points: int = _DEFAULT_AUDIT_POINTS,
) -> SweepOutcome:
    """Threshold for every (d, tb) pair, ordered by (d, T_b).

    Each d must match the lattice parity (odd d for even N, even d for odd N)
    so that m = (N + 1 - d)/2 is an integer.  Entries whose bisection fails
    are skipped and reported in the outcome instead of aborting the sweep.
    """
    if not d_list:
        raise ValueError("empty distance list")
    if not tb_grid:
        raise ValueError("empty tb grid")
    for d in d_list:
        if d < 1 or (n_sites + 1 - d) % 2 != 0:
            raise ValueError(
                f"distance d={d} is incompatible with N={n_sites}; "
                "need d = N + 1 - 2m for an integer impurity site"
            )
        if (n_sites + 1 - d) // 2 < 1:
            raise ValueError(f"distance d={d} exceeds the lattice")
    for tb in tb_grid:
        if not (tb > 0):
            raise ValueError("tb grid entries must be strictly positive")

    records: list[SweepRecord] = []
    failures: list[SweepFailure] = []
    for d in sorted(set(d_list)):
        m = (n_sites + 1 - d) // 2
        for tb in sorted(set(tb_grid)):
            spec = LatticeSpec(n_sites, m, 0.0, two_segment_profile(t0, tb))
            try:
                found = find_gamma_c(spec)
                audit_monotonicity(spec, found.gamma_c, audit_points)
            except (BracketFailure, ConvergenceFailure) as err:
                failures.append(SweepFailure(d=d, tb=tb, reason=f"{type(err).__name__}: {err}"))
                continue
            records.append(
                SweepRecord(
                    n_sites=n_sites,
                    impurity_site=m,
                    d=d,
                    t0=t0,
                    tb=tb,
                    tb_over_t0=tb / t0,
                    gamma_c=found.gamma_c,
                    gamma_c_over_t0=found.gamma_c / t0,
                    n_complex_above=found.n_complex_above,
                    bracket_width=found.bracket_width,
                )
            )
    return SweepOutcome(records=tuple(records), failures=tuple(failures))


def fit_exponent(
    records: Iterable[SweepRecord], window: tuple[float, float] = (0.05, 0.3)
) -> ExponentFit:
    """Least-squares power-law exponent of Gamma_c against T_b inside a window.

    Requires at least 8 records from one (N, d) family with T_b inside the
    window, which must sit within (0, 1) where the power law applies.
    """
    lo, hi = window
    if not (0.0 < lo < hi < 1.0):
        raise ValueError("fit window must satisfy 0 < lo < hi < 1")
    selected = [r for r in records if lo <= r.tb_over_t0 <= hi]
    if len(selected) < 8:
        raise InsufficientData(
            f"{len(selected)} records inside window [{lo}, {hi}]; at least 8 required"
        )
    keys = {(r.n_sites, r.d) for r in selected}
    if len(keys) != 1:
        raise ValueError(f"records mix several (N, d) families: {sorted(keys)}")
    ((_, d),) = keys

    pts = sorted((math.log(r.tb_over_t0), math.log(r.gamma_c_over_t0)) for r in selected)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    n = len(pts)
    x_mean = sum(xs) / n
    y_mean = sum(ys) / n
    sxx = sum((x - x_mean) ** 2 for x in xs)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    eta = sxy / sxx
    intercept = y_mean - eta * x_mean
    ss_res = sum((y - (intercept + eta * x)) ** 2 for x, y in zip(xs, ys))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else math.inf
    return ExponentFit(d=d, eta=eta, stderr=stderr, window=(lo, hi), points=tuple(pts))


def verify_maximal_breaking(n_sites: int, profile: HoppingProfile) -> MaximalBreakingReport:
    """Check the three clauses of the middle-bond threshold law for one profile.

    For even N with adjacent impurities, (a) the threshold equals the middle
    bond amplitude, (b) just above it every eigenvalue is complex, and
    (c) just below it none are.  Holds for any parity-symmetric profile.
    """
    if n_sites % 2 != 0:
        raise ValueError("maximal breaking requires an even lattice")
    m = n_sites // 2
    spec = LatticeSpec(n_sites, m, 0.0, profile)
    t_mid = spec.bond_amplitudes[m - 1]

    clauses = []
    found = find_gamma_c(spec)
    defect = abs(found.gamma_c - t_mid) / t_mid
    clauses.append(
        ClauseResult(
            name="gamma_c equals middle bond",
            passed=defect <= 1e-6,
            measured=f"gamma_c={found.gamma_c:.12g} t_mid={t_mid:.12g} rel_defect={defect:.3e}",
        )
    )
    _, n_above = is_pt_broken(spec.with_gamma(1.01 * t_mid))
    clauses.append(
        ClauseResult(
            name="all eigenvalues complex just above",
            passed=n_above == n_sites,
            measured=f"n_complex={n_above} at gamma=1.01*t_mid",
        )
    )
    _, n_below = is_pt_broken(spec.with_gamma(0.99 * t_mid))
    clauses.append(
        ClauseResult(
            name="no complex eigenvalues just below",
            passed=n_below == 0,
            measured=f"n_complex={n_below} at gamma=0.99*t_mid",
        )
    )
    return MaximalBreakingReport(n_sites=n_sites, t_mid=t_mid, clauses=tuple(clauses))


def fragility_scan(alpha: float, n_list: Sequence[int]) -> tuple[FragilityPoint, ...]:
    """Threshold-to-bandwidth ratio across lattice sizes for a power-law profile.

    alpha <= 0; each N must be even (impurities at the center).  The ratio
    gamma_c / bandwidth shrinks with N for alpha < 0 and is the quantitative
    fragility measure of the symmetric phase.
    """
    if alpha > 0:
        raise ValueError("fragility scan applies to alpha <= 0")
    points = []
    for n in n_list:
        if n % 2 != 0:
            raise ValueError("fragility scan needs even lattice sizes")
        profile = alpha_profile(1.0, alpha)
        spec = LatticeSpec(n, n // 2, 0.0, profile)
        found = find_gamma_c(spec)
        width = bandwidth(profile, n, n // 2)
        points.append(
            FragilityPoint(
                n_sites=n,
                gamma_c=found.gamma_c,
                bandwidth=width,
                ratio=found.gamma_c / width,
            )
        )
    return tuple(points)
