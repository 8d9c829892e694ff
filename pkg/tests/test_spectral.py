"""Spectral engine: characteristic polynomial, Aberth solver, oracle, eigenvectors."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ptlattice.spectral as spectral
from ptlattice import (
    ConvergenceFailure,
    DefectiveCandidate,
    LatticeSpec,
    TridiagonalHamiltonian,
    brute_force_spectrum,
    build_hamiltonian,
    char_poly,
    eigenvalues,
    eigenvector,
    multiset_distance,
    two_segment_profile,
)
from ptlattice.verify import random_spec

from conftest import two_site_eigenvalues, uniform_chain_eigenvalues


class TestCharPoly:
    def test_single_site_base_case(self):
        h = TridiagonalHamiltonian(diagonal=(1.5 + 0.5j,), off_diagonal=())
        value, derivative, expo = char_poly(h, 0.25)
        assert value == 1.25 + 0.5j
        assert derivative == -1
        assert expo == 0

    def test_two_site_closed_form(self):
        h = build_hamiltonian(LatticeSpec(2, 1, 0.6, two_segment_profile(1.0, 1.0)))
        value, derivative, expo = char_poly(h, 0.8)
        # p(z) = z^2 - (tb^2 - gamma^2) vanishes at z = 0.8
        assert abs(value) < 1e-14
        assert derivative == pytest.approx(1.6)
        assert expo == 0

    def test_hermitian_determinant_is_real_on_the_real_axis(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(2, 12)
            spec = LatticeSpec(n, rng.randint(1, n // 2), 0.0,
                               two_segment_profile(rng.uniform(0.3, 2), rng.uniform(0.3, 2)))
            h = build_hamiltonian(spec)
            z = rng.uniform(-3, 3)
            value, _, _ = char_poly(h, z)
            assert abs(value.imag) <= 1e-14 * max(abs(value), 1.0)

    def test_matches_expanded_coefficients(self):
        spec = LatticeSpec(10, 3, 0.8, two_segment_profile(1.0, 1.7))
        h = build_hamiltonian(spec)
        coeffs = spectral._expand_coefficients(h)
        for z in (0.3 + 0.2j, -1.5, 2.0j, 0.0):
            value, _, expo = char_poly(h, z)
            direct = spectral._poly_eval(coeffs, z)
            assert value * 2.0 ** expo == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_rescaling_survives_huge_lattices(self):
        spec = LatticeSpec(10_000, 5_000, 0.5, two_segment_profile(1.0, 2.0))
        h = build_hamiltonian(spec)
        value, derivative, expo = char_poly(h, 1.234 + 0.1j)
        assert math.isfinite(abs(value)) and math.isfinite(abs(derivative))
        assert expo > 0

    def test_derivative_against_finite_differences(self):
        spec = LatticeSpec(9, 4, 0.7, two_segment_profile(1.0, 1.6))
        h = build_hamiltonian(spec)
        step = 1e-6
        for z in (0.4 + 0.3j, -1.1, 2.2j):
            _, derivative, _ = char_poly(h, z)
            plus, _, _ = char_poly(h, z + step)
            minus, _, _ = char_poly(h, z - step)
            assert derivative == pytest.approx((plus - minus) / (2 * step), rel=1e-8)


class TestEigenvalues:
    def test_two_site_real_phase(self):
        h = build_hamiltonian(LatticeSpec(2, 1, 0.6, two_segment_profile(1.0, 1.0)))
        s = eigenvalues(h)
        assert multiset_distance(s.eigenvalues, [0.8, -0.8]) < 1e-12
        assert s.n_complex == 0
        assert s.classifications == ("real", "real")

    def test_two_site_broken_phase(self):
        h = build_hamiltonian(LatticeSpec(2, 1, 1.25, two_segment_profile(1.0, 1.0)))
        s = eigenvalues(h)
        assert multiset_distance(s.eigenvalues, [0.75j, -0.75j]) < 1e-12
        assert s.n_complex == 2

    def test_uniform_chain_closed_form(self):
        h = build_hamiltonian(LatticeSpec(5, 2, 0.0, two_segment_profile(1.0, 1.0)))
        s = eigenvalues(h)
        assert multiset_distance(s.eigenvalues, uniform_chain_eigenvalues(5)) < 1e-12

    def test_maximal_breaking_counts(self):
        spec = LatticeSpec(20, 10, 1.01, two_segment_profile(1.0, 1.0))
        assert eigenvalues(build_hamiltonian(spec)).n_complex == 20
        spec = LatticeSpec(20, 10, 0.99, two_segment_profile(1.0, 1.0))
        assert eigenvalues(build_hamiltonian(spec)).n_complex == 0

    def test_sorted_by_real_then_imaginary(self):
        spec = LatticeSpec(12, 6, 1.4, two_segment_profile(1.0, 1.0))
        s = eigenvalues(build_hamiltonian(spec))
        keys = [(ev.real, ev.imag) for ev in s.eigenvalues]
        assert keys == sorted(keys)

    def test_residuals_within_contract(self):
        rng = random.Random(5)
        for _ in range(25):
            s = eigenvalues(build_hamiltonian(random_spec(rng, n_max=16)))
            assert all(r <= 1e-9 for r in s.residuals) or max(s.residuals) <= 1e-6

    def test_warm_start_reproduces_cold_result(self):
        spec = LatticeSpec(14, 5, 0.6, two_segment_profile(1.0, 0.8))
        h = build_hamiltonian(spec)
        cold = eigenvalues(h)
        nudged = tuple(ev + 1e-4 * (1 + 1j) for ev in cold.eigenvalues)
        warm = eigenvalues(h, initial=nudged)
        assert multiset_distance(cold.eigenvalues, warm.eigenvalues) < 1e-10

    def test_exceptional_point_spectrum(self):
        # At gamma exactly equal to the inner hopping every eigenvalue is a
        # double root; the solver must still deliver the analytic positions.
        spec = LatticeSpec(20, 10, 0.7, two_segment_profile(1.0, 0.7))
        s = eigenvalues(build_hamiltonian(spec))
        exact = [-2.0 * math.cos(n * math.pi / 11) for n in range(1, 11)]
        doubled = sorted(exact + exact)
        got = sorted(ev.real for ev in s.eigenvalues)
        assert max(abs(a - b) for a, b in zip(got, doubled)) < 1e-6

    def test_convergence_failure_reports_indices(self, monkeypatch):
        monkeypatch.setattr(spectral, "_MAX_SWEEPS", 2)
        spec = LatticeSpec(16, 8, 0.3, two_segment_profile(1.0, 1.0))
        with pytest.raises(ConvergenceFailure):
            eigenvalues(build_hamiltonian(spec))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 10), st.floats(0.2, 2.5), st.floats(0.2, 2.5))
    def test_hermitian_spectra_are_fully_real(self, n, t0, tb):
        spec = LatticeSpec(n, 1 + (n // 2 - 1) // 2, 0.0, two_segment_profile(t0, tb))
        assert eigenvalues(build_hamiltonian(spec)).n_complex == 0


class TestSymmetryInvariants:
    def test_closure_trace_and_bound(self):
        rng = random.Random(11)
        for _ in range(30):
            spec = random_spec(rng, n_max=20)
            h = build_hamiltonian(spec)
            s = eigenvalues(h)
            evs = s.eigenvalues
            scale = h.e_scale
            assert multiset_distance(evs, [ev.conjugate() for ev in evs]) <= 1e-8 * scale
            assert multiset_distance(evs, [-ev.conjugate() for ev in evs]) <= 1e-8 * scale
            assert abs(sum(evs)) <= 1e-10 * len(evs) * scale
            hop = max(abs(t) for t in h.off_diagonal)
            assert all(abs(ev.real) <= 2 * hop + 1e-8 * scale for ev in evs)
            assert s.n_complex % 2 == 0


class TestEigenvector:
    def test_two_site_amplitudes(self):
        h = build_hamiltonian(LatticeSpec(2, 1, 0.6, two_segment_profile(1.0, 1.0)))
        ev = eigenvector(h, 0.8)
        # Forward recurrence: psi(2) = (i*gamma - E) psi(1) / t.
        assert ev.amplitudes[0] == 1
        assert ev.amplitudes[1] == pytest.approx(-0.8 + 0.6j)
        assert ev.closure_residual <= 1e-12

    def test_uniform_chain_node_pattern(self):
        h = build_hamiltonian(LatticeSpec(5, 2, 0.0, two_segment_profile(1.0, 1.0)))
        ev = eigenvector(h, 0.0)
        assert [a.real for a in ev.amplitudes] == pytest.approx([1, 0, -1, 0, 1], abs=1e-12)

    def test_closure_residual_contract_across_spectrum(self):
        rng = random.Random(23)
        for _ in range(10):
            spec = random_spec(rng, n_max=14)
            h = build_hamiltonian(spec)
            for lam in eigenvalues(h).eigenvalues:
                vec = eigenvector(h, lam)
                assert vec.closure_residual <= 1e-7
                assert max(abs(a) for a in vec.amplitudes) == pytest.approx(1.0)

    def test_rejects_non_eigenvalue(self):
        h = build_hamiltonian(LatticeSpec(2, 1, 0.6, two_segment_profile(1.0, 1.0)))
        with pytest.raises(DefectiveCandidate):
            eigenvector(h, 0.5)

    def test_inverse_iteration_certifies_a_true_eigenpair(self):
        spec = LatticeSpec(10, 4, 0.4, two_segment_profile(1.0, 1.3))
        h = build_hamiltonian(spec)
        lam = eigenvalues(h).eigenvalues[2]
        psi, residual = spectral._inverse_iteration(h, lam)
        assert residual <= 1e-7
        forward = eigenvector(h, lam)
        peak = max(range(len(psi)), key=lambda i: abs(psi[i]))
        aligned = [a / psi[peak] for a in psi]
        assert max(abs(a - b) for a, b in zip(aligned, forward.amplitudes)) <= 1e-6


class TestSpectrumInvariants:
    def test_odd_complex_count_is_rejected(self):
        with pytest.raises(ValueError, match="conjugate pairs"):
            spectral.Spectrum(
                eigenvalues=(1j,),
                classifications=("complex",),
                residuals=(0.0,),
                n_complex=1,
                e_scale=1.0,
            )


class TestBruteForceOracle:
    def test_rejects_large_lattices(self):
        h = build_hamiltonian(LatticeSpec(13, 6, 0.0, two_segment_profile(1.0, 1.0)))
        with pytest.raises(ValueError, match="N <= 12"):
            brute_force_spectrum(h)

    @pytest.mark.parametrize("gamma,tb", [(0.6, 1.0), (1.25, 1.0), (0.0, 2.0), (2.9, 3.0)])
    def test_two_site_closed_form(self, gamma, tb):
        h = build_hamiltonian(LatticeSpec(2, 1, gamma, two_segment_profile(1.0, tb)))
        s = brute_force_spectrum(h)
        assert multiset_distance(s.eigenvalues, two_site_eigenvalues(tb, gamma)) < 1e-10

    def test_hermitian_input_gives_real_roots(self):
        h = build_hamiltonian(LatticeSpec(9, 4, 0.0, two_segment_profile(1.0, 0.4)))
        s = brute_force_spectrum(h)
        assert s.n_complex == 0
        assert multiset_distance(s.eigenvalues, eigenvalues(h).eigenvalues) < 1e-8

    def test_agrees_with_engine_on_random_lattices(self):
        rng = random.Random(41)
        worst = 0.0
        for _ in range(60):
            spec = random_spec(rng)
            h = build_hamiltonian(spec)
            dist = multiset_distance(
                eigenvalues(h).eigenvalues, brute_force_spectrum(h).eigenvalues
            )
            worst = max(worst, dist / h.e_scale)
        assert worst <= 1e-8


class TestMultisetDistance:
    def test_ordering_insensitive(self):
        a = [1.0, 2.0 + 1j, -3.0]
        b = [-3.0, 1.0, 2.0 + 1j]
        assert multiset_distance(a, b) == 0

    def test_reports_worst_pairing(self):
        assert multiset_distance([0.0, 1.0], [0.0, 1.5]) == pytest.approx(0.5)

    def test_length_mismatch_is_infinite(self):
        assert multiset_distance([1.0], [1.0, 2.0]) == math.inf
