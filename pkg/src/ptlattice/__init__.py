"""Spectra and symmetry-breaking thresholds of PT-symmetric tight-binding lattices."""

from .lattice import (
    HoppingProfile,
    LatticeSpec,
    TridiagonalHamiltonian,
    alpha_profile,
    apply_parity,
    bandwidth,
    build_hamiltonian,
    custom_profile,
    load_profile_file,
    pt_transform_hamiltonian,
    two_segment_profile,
)
from .spectral import (
    ConvergenceFailure,
    DefectiveCandidate,
    Eigenvector,
    Spectrum,
    brute_force_spectrum,
    char_poly,
    eigenvalues,
    eigenvector,
    multiset_distance,
)

__version__ = "0.1.0"
