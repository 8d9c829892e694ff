"""Lattice definitions: hopping profiles, impurity placement, tridiagonal matrices.

The model is an open N-site tight-binding chain with real, parity-symmetric
bond amplitudes t(1..N-1) and a balanced gain/loss pair of on-site impurities:
+i*gamma on site m (gain) and -i*gamma on the mirror site N+1-m (loss).  The
resulting matrix is complex symmetric, invariant under the combined parity
(site reversal) and time-reversal (complex conjugation) operation, and is
Hermitian only for gamma = 0.

Everything here is immutable after construction and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

import numpy as np

TWO_SEGMENT = "two-segment"
ALPHA = "alpha"
CUSTOM = "custom"

# Custom profiles entered as equal decimals compare exactly; computed profiles
# get a relative tolerance.
_SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class HoppingProfile:
    """Parity-symmetric bond-amplitude profile for an open chain.

    kind "two-segment": amplitude tb on every bond between the impurity sites,
    t0 elsewhere.  kind "alpha": t0 * (k*(N-k))**(alpha/2) on bond k, which is
    parity-symmetric by construction.  kind "custom": explicit N-1 amplitudes,
    validated to satisfy t(k) = t(N-k).
    """

    kind: str
    t0: float | None = None
    tb: float | None = None
    alpha: float | None = None
    amplitudes: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind == TWO_SEGMENT:
            if self.t0 is None or self.tb is None:
                raise ValueError("two-segment profile requires t0 and tb")
            _require_positive("t0", self.t0)
            _require_positive("tb", self.tb)
        elif self.kind == ALPHA:
            if self.t0 is None or self.alpha is None:
                raise ValueError("alpha profile requires t0 and alpha")
            _require_positive("t0", self.t0)
            if not math.isfinite(self.alpha):
                raise ValueError("alpha must be finite")
        elif self.kind == CUSTOM:
            if not self.amplitudes:
                raise ValueError("custom profile requires a non-empty amplitude list")
            object.__setattr__(self, "amplitudes", tuple(float(t) for t in self.amplitudes))
            for k, t in enumerate(self.amplitudes, start=1):
                _require_positive(f"t({k})", t)
            _check_parity_symmetric(self.amplitudes)
        else:
            raise ValueError(f"unknown profile kind {self.kind!r}")

    @property
    def reference_amplitude(self) -> float | None:
        """t0 where the profile defines one, None for custom profiles."""
        return self.t0

    def bond_amplitudes(self, n_sites: int, impurity_site: int | None = None) -> tuple[float, ...]:
        """Amplitudes t(1..N-1) for a chain of n_sites sites.

        Two-segment profiles need the impurity site m to place the inner
        segment (bonds m..N-m carry tb).
        """
        if n_sites < 2:
            raise ValueError("n_sites must be at least 2")
        if self.kind == TWO_SEGMENT:
            if impurity_site is None:
                raise ValueError("two-segment profile needs an impurity site to materialize bonds")
            m = impurity_site
            mirror = n_sites + 1 - m
            return tuple(
                self.tb if m <= i <= mirror - 1 else self.t0
                for i in range(1, n_sites)
            )
        if self.kind == ALPHA:
            return tuple(
                self.t0 * (k * (n_sites - k)) ** (self.alpha / 2.0)
                for k in range(1, n_sites)
            )
        if len(self.amplitudes) != n_sites - 1:
            raise ValueError(
                f"custom profile has {len(self.amplitudes)} amplitudes, "
                f"chain with {n_sites} sites needs {n_sites - 1}"
            )
        return self.amplitudes


def two_segment_profile(t0: float, tb: float) -> HoppingProfile:
    return HoppingProfile(kind=TWO_SEGMENT, t0=float(t0), tb=float(tb))


def alpha_profile(t0: float, alpha: float) -> HoppingProfile:
    return HoppingProfile(kind=ALPHA, t0=float(t0), alpha=float(alpha))


def custom_profile(amplitudes) -> HoppingProfile:
    return HoppingProfile(kind=CUSTOM, amplitudes=tuple(float(t) for t in amplitudes))


def load_profile_file(path) -> HoppingProfile:
    """Read a custom profile: one positive decimal per line, N-1 lines."""
    text = Path(path).read_text()
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"{path}: line {lineno} is not a decimal number: {line!r}") from None
    if not values:
        raise ValueError(f"{path}: no amplitudes found")
    return custom_profile(values)


@dataclass(frozen=True)
class LatticeSpec:
    """Full parameter set of one lattice instance.

    n_sites N >= 2, impurity site m in [1, N//2] (the mirror configuration is
    equivalent by parity), impurity strength gamma >= 0, and a hopping profile.
    """

    n_sites: int
    impurity_site: int
    gamma: float
    profile: HoppingProfile

    def __post_init__(self):
        n, m = self.n_sites, self.impurity_site
        if not isinstance(n, int) or n < 2:
            raise ValueError("n_sites must be an integer >= 2")
        if not isinstance(m, int) or not (1 <= m <= n // 2):
            raise ValueError(
                f"impurity_site must satisfy 1 <= m <= N//2 (got m={m}, N={n}); "
                "mirror placements are equivalent by parity"
            )
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError("gamma must be finite and >= 0")

    @property
    def mirror_site(self) -> int:
        return self.n_sites + 1 - self.impurity_site

    @property
    def distance(self) -> int:
        """Inter-impurity distance d = N + 1 - 2m (d = 1 means nearest neighbors)."""
        return self.n_sites + 1 - 2 * self.impurity_site

    @cached_property
    def bond_amplitudes(self) -> tuple[float, ...]:
        return self.profile.bond_amplitudes(self.n_sites, self.impurity_site)

    @property
    def gamma_dimensionless(self) -> float:
        """Gamma = gamma / t0."""
        t0 = self.profile.reference_amplitude
        if t0 is None:
            raise ValueError("dimensionless impurity strength needs a profile with a reference t0")
        return self.gamma / t0

    @property
    def tb_dimensionless(self) -> float:
        """T_b = tb / t0, defined for two-segment profiles."""
        if self.profile.kind != TWO_SEGMENT:
            raise ValueError("T_b is defined for two-segment profiles only")
        return self.profile.tb / self.profile.t0

    def with_gamma(self, gamma: float) -> "LatticeSpec":
        return replace(self, gamma=float(gamma))


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """Complex-symmetric tridiagonal matrix stored as two bands.

    The banded representation is load-bearing: the spectral recurrence and the
    eigenvector recurrences consume the bands directly, never a dense array.
    Off-diagonal entries are -t(i) and therefore strictly negative.
    """

    diagonal: tuple[complex, ...]
    off_diagonal: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "diagonal", tuple(complex(d) for d in self.diagonal))
        object.__setattr__(self, "off_diagonal", tuple(float(t) for t in self.off_diagonal))
        if len(self.diagonal) < 1:
            raise ValueError("empty diagonal")
        if len(self.off_diagonal) != len(self.diagonal) - 1:
            raise ValueError("off_diagonal must have one entry fewer than diagonal")
        if any(not (t < 0) for t in self.off_diagonal):
            raise ValueError("off-diagonal entries are -t(i) and must be strictly negative")

    @property
    def n_sites(self) -> int:
        return len(self.diagonal)

    @cached_property
    def e_scale(self) -> float:
        """Energy scale 2*max hopping + gamma used by tolerances and root bounds."""
        hop = max((abs(t) for t in self.off_diagonal), default=0.0)
        return 2.0 * hop + max(abs(d) for d in self.diagonal)

    @cached_property
    def diag_array(self) -> np.ndarray:
        return np.array(self.diagonal, dtype=np.complex128)

    @cached_property
    def offdiag_array(self) -> np.ndarray:
        return np.array(self.off_diagonal, dtype=np.float64)


def build_hamiltonian(spec: LatticeSpec) -> TridiagonalHamiltonian:
    """Materialize the chain matrix: diagonal (+i*gamma at m, -i*gamma at the
    mirror site, zero elsewhere) and off-diagonal entries -t(i)."""
    diag = [0j] * spec.n_sites
    diag[spec.impurity_site - 1] = 1j * spec.gamma
    diag[spec.mirror_site - 1] = -1j * spec.gamma
    off = tuple(-t for t in spec.bond_amplitudes)
    return TridiagonalHamiltonian(diagonal=tuple(diag), off_diagonal=off)


def apply_parity(v):
    """Site reversal: output(n) = input(N+1-n)."""
    return tuple(reversed(tuple(v)))


def pt_transform_hamiltonian(h: TridiagonalHamiltonian) -> TridiagonalHamiltonian:
    """PT * H * PT: reverse site indices and conjugate all entries."""
    diag = tuple(complex(d).conjugate() for d in reversed(h.diagonal))
    off = tuple(reversed(h.off_diagonal))
    return TridiagonalHamiltonian(diagonal=diag, off_diagonal=off)


def bandwidth(profile: HoppingProfile, n_sites: int, impurity_site: int | None = None) -> float:
    """Spread E_max - E_min of the Hermitian (gamma = 0) chain spectrum.

    Two-segment profiles need the impurity site because it fixes the bond
    layout; the other kinds ignore it.
    """
    from .spectral import eigenvalues

    if profile.kind == TWO_SEGMENT and impurity_site is None:
        raise ValueError("two-segment bandwidth needs the impurity site to place the bonds")
    m = impurity_site if impurity_site is not None else 1
    spec = LatticeSpec(n_sites=n_sites, impurity_site=m, gamma=0.0, profile=profile)
    spectrum = eigenvalues(build_hamiltonian(spec))
    reals = [ev.real for ev in spectrum.eigenvalues]
    return max(reals) - min(reals)


def _require_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and strictly positive (got {value})")


def _check_parity_symmetric(amplitudes: tuple[float, ...]) -> None:
    n = len(amplitudes) + 1
    for k in range(1, len(amplitudes) + 1):
        a, b = amplitudes[k - 1], amplitudes[n - k - 1]
        if a != b and abs(a - b) > _SYMMETRY_RTOL * max(abs(a), abs(b)):
            raise ValueError(
                f"custom profile is not parity-symmetric: t({k})={a!r} vs t({n - k})={b!r}"
            )
