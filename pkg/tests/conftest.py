"""Shared closed-form oracles and helpers for the test suite."""

from __future__ import annotations

import math
from functools import lru_cache

import pytest

from ptlattice import LatticeSpec, two_segment_profile
from ptlattice.phase import find_gamma_c


def uniform_chain_eigenvalues(n_sites: int, t0: float = 1.0) -> list[float]:
    """Closed-form spectrum of the open uniform chain: -2 t0 cos(n pi / (N+1))."""
    return sorted(-2.0 * t0 * math.cos(k * math.pi / (n_sites + 1)) for k in range(1, n_sites + 1))


def two_site_eigenvalues(tb: float, gamma: float) -> list[complex]:
    """Closed-form spectrum of the two-site lattice: +-sqrt(tb^2 - gamma^2)."""
    root_sq = tb * tb - gamma * gamma
    mag = math.sqrt(abs(root_sq))
    return [mag, -mag] if root_sq >= 0 else [1j * mag, -1j * mag]


@lru_cache(maxsize=None)
def cached_gamma_c(n_sites: int, m: int, tb: float, t0: float = 1.0) -> float:
    spec = LatticeSpec(n_sites, m, 0.0, two_segment_profile(t0, tb))
    return find_gamma_c(spec).gamma_c


def simple_real_eigenvalues(spectrum, gap_floor_rel: float = 1e-6) -> list[complex]:
    """Real-classified eigenvalues whose nearest neighbor is resolvably far.

    Quasi-degenerate doublets are excluded: their computed eigenvectors mix
    the two PT-partner states and are not individually parity-balanced.
    """
    evs = spectrum.eigenvalues
    floor = gap_floor_rel * spectrum.e_scale
    out = []
    for i, (ev, cls) in enumerate(zip(evs, spectrum.classifications)):
        if cls != "real":
            continue
        gap = min(abs(ev - other) for j, other in enumerate(evs) if j != i)
        if gap > floor:
            out.append(ev)
    return out


@pytest.fixture
def tmp_profile_file(tmp_path):
    def make(amplitudes, name="profile.txt"):
        path = tmp_path / name
        path.write_text("\n".join(f"{a}" for a in amplitudes) + "\n")
        return str(path)

    return make
