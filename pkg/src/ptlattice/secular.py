"""Analytic layer: quasimomenta, secular residuals, ansatz and center checks.

For a two-segment chain the eigenfunctions take a piecewise trigonometric
form with an outer quasimomentum k and an inner quasimomentum k', linked by
the shared energy through

    E = -2 t0 cos(k) = -2 tb cos(k').

The transcendental secular function M(k, k') vanishes exactly at the
eigenvalues.  This module evaluates M and its nearest-neighbor reduction as
scale-free residuals at energies produced by the spectral engine, fits the
piecewise ansatz to computed eigenvectors, and checks the central 2x2
determinant identity that pins the breaking threshold to the middle bond for
any parity-symmetric profile.  Everything is a pure function; the residual
forms are validators, not root finders.

All sine and cosine factors are evaluated in full complex arithmetic, which
collapses the separate real-k / imaginary-k cases into one formula.  The
principal branch of the complex arccosine (real part in [0, pi]) fixes the
quasimomentum branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .lattice import TWO_SEGMENT, LatticeSpec
from .spectral import Eigenvector

_DISPERSION_RTOL = 1e-10
_REALIZABLE_TOL = 1e-6
_BALANCE_TOL = 1e-8
_CONDITION_LIMIT = 1e12
_TERM_FLOOR = 1e-300
_DEGENERATE_RTOL = 1e-12
_EDGE_EXCLUSION = 1e-6


class DegenerateNormalization(ArithmeticError):
    """All additive secular terms vanished; the point carries no information."""


class IllConditionedFit(RuntimeError):
    """The ansatz design matrix is numerically rank deficient."""


class NotRealizable(RuntimeError):
    """The eigenvector cannot be phase-rotated to a real left half."""


@dataclass(frozen=True)
class QuasimomentumPair:
    """Outer and inner quasimomenta consistent with one energy."""

    k: complex
    k_prime: complex
    energy: complex
    t0: float
    tb: float

    def __post_init__(self):
        scale = 2.0 * max(self.t0, self.tb) + abs(self.energy)
        for name, t, q in (("k", self.t0, self.k), ("k_prime", self.tb, self.k_prime)):
            defect = abs(-2.0 * t * cmath.cos(q) - self.energy)
            if defect > _DISPERSION_RTOL * scale:
                raise ValueError(
                    f"dispersion violated for {name}: defect {defect:.3e} at energy {self.energy!r}"
                )


@dataclass(frozen=True)
class AnsatzCoefficients:
    """Piecewise-wave coefficients fitted to a computed eigenvector."""

    a_left: complex
    b_right: complex
    p_mid: complex
    q_mid: complex
    fit_residual: float


@dataclass(frozen=True)
class CentralBlockDecomposition:
    """Center-bond data for an even chain with nearest-neighbor impurities.

    alpha_mid and beta_mid are the amplitudes on sites N/2 and N/2-1 after the
    global phase rotation that makes the left half real; chi is the relative
    phase between the two mirror halves; det_residual is the normalized
    magnitude of the central 2x2 determinant, which vanishes for every real
    eigenpair of any parity-symmetric profile.
    """

    epsilon: float
    alpha_mid: complex
    beta_mid: complex
    chi: float
    det_residual: float


@dataclass(frozen=True)
class RealAxisScan:
    """Result of counting secular sign crossings along the real energy axis."""

    count: int
    crossings: tuple[float, ...]
    points: int


def quasimomenta_from_energy(energy: complex, t0: float, tb: float) -> QuasimomentumPair:
    """Invert the two dispersion relations on the principal arccosine branch."""
    if not (t0 > 0 and tb > 0):
        raise ValueError("t0 and tb must be strictly positive")
    k = cmath.acos(-energy / (2.0 * t0))
    k_prime = cmath.acos(-energy / (2.0 * tb))
    return QuasimomentumPair(k=k, k_prime=k_prime, energy=complex(energy), t0=t0, tb=tb)


def _require_two_segment(spec: LatticeSpec) -> None:
    if spec.profile.kind != TWO_SEGMENT:
        raise ValueError("secular residuals are defined for two-segment profiles")


def _secular_terms(spec: LatticeSpec, energies: np.ndarray):
    """The three additive terms of the secular function at each energy."""
    t0, tb = spec.profile.t0, spec.profile.tb
    big_gamma = spec.gamma / t0
    big_tb = tb / t0
    m = spec.impurity_site
    n = spec.n_sites

    k = np.arccos(-energies / (2.0 * t0))
    kp = np.arccos(-energies / (2.0 * tb))
    s_m = np.sin(k * m)
    s_m1 = np.sin(k * (m + 1))
    term_a = (s_m1 ** 2 + big_gamma ** 2 * s_m ** 2) * np.sin(kp * (n + 1 - 2 * m))
    term_b = big_tb ** 2 * s_m ** 2 * np.sin(kp * (n - 1 - 2 * m))
    term_c = -2.0 * big_tb * s_m * s_m1 * np.sin(kp * (n - 2 * m))
    return term_a, term_b, term_c


def secular_residual(spec: LatticeSpec, energy: complex) -> float:
    """Normalized magnitude of the secular function at one energy.

    |M| divided by the sum of the magnitudes of its three additive terms, so
    the residual is scale-free; values at true eigenvalues sit at rounding
    level while generic energies give order-one values.  When every additive
    term vanishes identically (each is a product containing a zero factor,
    which happens at the zero-energy eigenvalue of every odd lattice) the
    residual is rounding noise over rounding noise and the point is reported
    as DegenerateNormalization instead.
    """
    _require_two_segment(spec)
    t0, tb = spec.profile.t0, spec.profile.tb
    big_gamma = spec.gamma / t0
    big_tb = tb / t0
    a, b, c = _secular_terms(spec, np.array([energy], dtype=np.complex128))
    denom = abs(a[0]) + abs(b[0]) + abs(c[0])
    k = cmath.acos(-complex(energy) / (2.0 * t0))
    kp = cmath.acos(-complex(energy) / (2.0 * tb))
    m, n = spec.impurity_site, spec.n_sites
    factor_scale = max(
        abs(cmath.sin(k * m)),
        abs(cmath.sin(k * (m + 1))),
        abs(cmath.sin(kp * (n + 1 - 2 * m))),
        abs(cmath.sin(kp * (n - 1 - 2 * m))),
        abs(cmath.sin(kp * (n - 2 * m))),
    )
    cap = (1.0 + big_gamma ** 2 + big_tb ** 2 + 2.0 * big_tb) * factor_scale ** 3
    if denom < max(_TERM_FLOOR, _DEGENERATE_RTOL * cap):
        raise DegenerateNormalization(
            f"all secular terms vanish at energy {energy!r} (trivial point)"
        )
    return float(abs(a[0] + b[0] + c[0]) / denom)


def nn_secular_residual(spec: LatticeSpec, energy: complex) -> float:
    """Residual of the nearest-neighbor reduction for even N with m = N/2.

    The parent secular function factorizes as sin(k') times this expression
    when the impurities are adjacent; the normalization keeps the same term
    grouping so the two residuals agree pointwise, not only at roots.
    """
    _require_two_segment(spec)
    n, m = spec.n_sites, spec.impurity_site
    if n % 2 != 0 or m != n // 2:
        raise ValueError("nearest-neighbor reduction requires even N and m = N/2")
    t0, tb = spec.profile.t0, spec.profile.tb
    big_gamma = spec.gamma / t0
    big_tb = tb / t0
    k = cmath.acos(-complex(energy) / (2.0 * t0))
    s1 = cmath.sin(k * (n // 2 + 1))
    s2 = cmath.sin(k * (n // 2))
    head = s1 ** 2 + big_gamma ** 2 * s2 ** 2
    tail = big_tb ** 2 * s2 ** 2
    denom = abs(head) + abs(tail)
    cap = (1.0 + big_gamma ** 2 + big_tb ** 2) * max(abs(s1), abs(s2)) ** 2
    if denom < max(_TERM_FLOOR, _DEGENERATE_RTOL * cap):
        raise DegenerateNormalization(f"all secular terms vanish at energy {energy!r}")
    return float(abs(head - tail) / denom)


def scan_real_axis(spec: LatticeSpec, points: int = 10_000) -> RealAxisScan:
    """Count sign-bracketed zeros of the secular function on the real axis.

    On the real energy axis the secular function is either purely real or
    purely imaginary depending on the quasimomentum branch, so Re + Im is a
    signed magnitude in every branch region.  The scan covers
    [-E_scale, E_scale] and excludes a small neighborhood of the four band
    edges where the branches switch.
    """
    _require_two_segment(spec)
    t0, tb = spec.profile.t0, spec.profile.tb
    e_scale = 2.0 * max(t0, tb) + spec.gamma
    edges = (2.0 * t0, -2.0 * t0, 2.0 * tb, -2.0 * tb)
    exclusion = _EDGE_EXCLUSION * e_scale

    grid = np.linspace(-e_scale, e_scale, points)
    a, b, c = _secular_terms(spec, grid.astype(np.complex128))
    denom = np.abs(a) + np.abs(b) + np.abs(c)
    total = a + b + c
    valid = denom > _TERM_FLOOR
    for edge in edges:
        valid &= np.abs(grid - edge) > exclusion
    signed = np.where(valid, (total.real + total.imag) / np.where(valid, denom, 1.0), 0.0)

    # A sign flip across a band edge is a branch switch, not a zero, so
    # intervals containing an edge never count.
    crossings = []
    prev_idx = None
    for i in range(points):
        if not valid[i]:
            continue
        if prev_idx is not None and i == prev_idx + 1:
            lo, hi = grid[prev_idx], grid[i]
            straddles_edge = any(lo < edge < hi for edge in edges)
            if not straddles_edge and signed[prev_idx] * signed[i] < 0:
                crossings.append(0.5 * (lo + hi))
        prev_idx = i
    return RealAxisScan(count=len(crossings), crossings=tuple(crossings), points=points)


def fit_ansatz(spec: LatticeSpec, ev: Eigenvector) -> AnsatzCoefficients:
    """Least-squares fit of a computed eigenvector to the piecewise wave form.

    Left of the gain site the amplitudes follow A sin(k n), between the
    impurities P sin(k' n) + Q cos(k' n), and right of the loss site
    B sin(k (N+1-n)).  The three blocks touch disjoint unknowns, so the Gram
    matrix is block diagonal and its extreme eigenvalues give the design
    condition number exactly.
    """
    _require_two_segment(spec)
    n, m = spec.n_sites, spec.impurity_site
    mirror = spec.mirror_site
    pair = quasimomenta_from_energy(ev.eigenvalue, spec.profile.t0, spec.profile.tb)
    k, kp = pair.k, pair.k_prime
    psi = ev.amplitudes

    left = [(cmath.sin(k * site), psi[site - 1]) for site in range(1, m + 1)]
    right = [(cmath.sin(k * (n + 1 - site)), psi[site - 1]) for site in range(mirror, n + 1)]
    mid_sites = range(m + 1, mirror)
    mid_u = [cmath.sin(kp * site) for site in mid_sites]
    mid_v = [cmath.cos(kp * site) for site in mid_sites]
    mid_rhs = [psi[site - 1] for site in mid_sites]

    g_left = sum(abs(s) ** 2 for s, _ in left)
    g_right = sum(abs(s) ** 2 for s, _ in right)
    gram_eigs = [g_left, g_right]

    p_mid = q_mid = 0j
    if mid_rhs:
        guu = sum(abs(u) ** 2 for u in mid_u)
        gvv = sum(abs(v) ** 2 for v in mid_v)
        guv = sum(u.conjugate() * v for u, v in zip(mid_u, mid_v))
        half_tr = 0.5 * (guu + gvv)
        radius = math.sqrt(max(0.25 * (guu - gvv) ** 2 + abs(guv) ** 2, 0.0))
        gram_eigs.extend([half_tr + radius, half_tr - radius])

    smallest = min(gram_eigs)
    largest = max(gram_eigs)
    if smallest <= 0 or math.sqrt(largest / smallest) > _CONDITION_LIMIT:
        raise IllConditionedFit(
            f"design condition {math.inf if smallest <= 0 else math.sqrt(largest / smallest):.3e} "
            f"exceeds {_CONDITION_LIMIT:.0e} (degenerate quasimomentum or empty block)"
        )

    a_left = sum(s.conjugate() * value for s, value in left) / g_left
    b_right = sum(s.conjugate() * value for s, value in right) / g_right
    if mid_rhs:
        ru = sum(u.conjugate() * value for u, value in zip(mid_u, mid_rhs))
        rv = sum(v.conjugate() * value for v, value in zip(mid_v, mid_rhs))
        det = guu * gvv - abs(guv) ** 2
        p_mid = (ru * gvv - rv * guv) / det
        q_mid = (rv * guu - ru * guv.conjugate()) / det

    sq_err = 0.0
    peak = max(abs(a) for a in psi)
    for s, value in left:
        sq_err += abs(a_left * s - value) ** 2
    for s, value in right:
        sq_err += abs(b_right * s - value) ** 2
    for u, v, value in zip(mid_u, mid_v, mid_rhs):
        sq_err += abs(p_mid * u + q_mid * v - value) ** 2
    fit_residual = math.sqrt(sq_err / n) / peak
    return AnsatzCoefficients(
        a_left=a_left,
        b_right=b_right,
        p_mid=p_mid,
        q_mid=q_mid,
        fit_residual=float(fit_residual),
    )


def central_determinant_residual(
    spec: LatticeSpec, epsilon: float, ev: Eigenvector
) -> CentralBlockDecomposition:
    """Evaluate the central 2x2 determinant identity for one real eigenpair.

    Works for any parity-symmetric hopping profile on an even chain with
    nearest-neighbor impurities.  The eigenvector is first rotated by one
    global phase so the left half is real (raising NotRealizable when that is
    impossible, which signals a broken-phase input); the mirror halves must
    then agree in magnitude site by site up to the single phase chi.
    """
    n, m = spec.n_sites, spec.impurity_site
    if n % 2 != 0 or m != n // 2:
        raise ValueError("central determinant requires even N and m = N/2")
    half = n // 2
    psi = ev.amplitudes
    peak = max(abs(a) for a in psi)

    anchor = max(range(half), key=lambda i: abs(psi[i]))
    phase = psi[anchor] / abs(psi[anchor]) if abs(psi[anchor]) > 0 else 1.0 + 0j
    phi = [a / phase for a in psi]
    worst_im = max(abs(phi[i].imag) for i in range(half))
    if worst_im > _REALIZABLE_TOL * peak:
        raise NotRealizable(
            f"left half cannot be made real by one global phase "
            f"(residual imaginary part {worst_im:.3e}); the eigenvalue is not in the "
            "PT-symmetric phase to working precision"
        )

    alpha = phi[half - 1]
    beta = phi[half - 2] if n >= 4 else 0j
    if abs(alpha) < _TERM_FLOOR:
        raise NotRealizable("vanishing center amplitude; eigenvector is not usable here")

    balance = abs(abs(phi[half]) - abs(alpha))
    if n >= 4:
        balance = max(balance, abs(abs(phi[half + 1]) - abs(beta)))
    if balance > _BALANCE_TOL * peak:
        raise NotRealizable(
            f"mirror halves are not magnitude-balanced (defect {balance:.3e}); "
            "the eigenfunction is not PT-self-symmetric"
        )

    chi = cmath.phase(phi[half] / alpha)

    amps = spec.bond_amplitudes
    t_mid = amps[half - 1]
    t_left = amps[half - 2] if n >= 4 else 0.0
    gamma = spec.gamma
    e11 = t_left * beta + (epsilon - 1j * gamma) * alpha
    e22 = t_left * beta + (epsilon + 1j * gamma) * alpha
    off = t_mid * alpha
    det = e11 * e22 - off * off
    denom = abs(e11) * abs(e22) + abs(off) ** 2
    if denom < _TERM_FLOOR:
        raise DegenerateNormalization("central determinant normalization vanished")
    return CentralBlockDecomposition(
        epsilon=float(epsilon),
        alpha_mid=alpha,
        beta_mid=beta,
        chi=float(chi),
        det_residual=float(abs(det) / denom),
    )
