"""Thresholds, sweeps, exponent fits, maximal-breaking checks, fragility."""

import random

import pytest

from ptlattice import (
    LatticeSpec,
    TridiagonalHamiltonian,
    alpha_profile,
    build_hamiltonian,
    two_segment_profile,
)
from ptlattice.phase import (
    BracketFailure,
    InsufficientData,
    SweepRecord,
    _bisect_threshold,
    audit_monotonicity,
    find_gamma_c,
    fit_exponent,
    fragility_scan,
    is_pt_broken,
    sweep_phase_diagram,
    verify_maximal_breaking,
)
from ptlattice.verify import random_symmetric_profile

from conftest import cached_gamma_c

# Threshold of the N=21, m=10 (d=2), tb=t0=1 lattice, recorded from the first
# validated run; no closed form is known for the odd case.
GOLDEN_ODD_THRESHOLD = 0.5176698996783671


class TestPredicate:
    def test_hermitian_is_unbroken(self):
        spec = LatticeSpec(10, 5, 0.0, two_segment_profile(1.0, 1.0))
        assert is_pt_broken(spec) == (False, 0)

    def test_two_site_broken(self):
        spec = LatticeSpec(2, 1, 1.25, two_segment_profile(1.0, 1.0))
        assert is_pt_broken(spec) == (True, 2)

    def test_maximal_breaking_count(self):
        spec = LatticeSpec(20, 10, 1.01, two_segment_profile(1.0, 1.0))
        assert is_pt_broken(spec) == (True, 20)


class TestFindGammaC:
    def test_adjacent_impurities_follow_the_inner_hopping(self):
        spec = LatticeSpec(20, 10, 0.0, two_segment_profile(1.0, 0.7))
        result = find_gamma_c(spec)
        assert result.gamma_c == pytest.approx(0.7, rel=1e-6)
        assert result.n_complex_below == 0
        assert result.n_complex_above == 20
        assert result.bracket_width <= 1e-10 * 1.0
        assert result.iterations <= 80

    def test_two_site_closed_form(self):
        spec = LatticeSpec(2, 1, 0.0, two_segment_profile(1.0, 3.0))
        assert find_gamma_c(spec).gamma_c == pytest.approx(3.0, rel=1e-6)

    def test_odd_lattice_golden_value(self):
        spec = LatticeSpec(21, 10, 0.0, two_segment_profile(1.0, 1.0))
        result = find_gamma_c(spec)
        assert 0.0 < result.gamma_c < 4.0
        assert result.gamma_c == pytest.approx(GOLDEN_ODD_THRESHOLD, rel=1e-6)
        assert result.n_complex_above == 4

    def test_ignores_the_gamma_field(self):
        base = LatticeSpec(8, 4, 0.0, two_segment_profile(1.0, 1.2))
        assert find_gamma_c(base).gamma_c == find_gamma_c(base.with_gamma(5.0)).gamma_c

    def test_bracket_failure_when_gamma_max_is_unbroken(self):
        spec = LatticeSpec(8, 4, 0.0, two_segment_profile(1.0, 1.0))
        with pytest.raises(BracketFailure):
            find_gamma_c(spec, gamma_max=0.5)

    def test_mirror_impurity_placement_gives_the_same_threshold(self):
        spec = LatticeSpec(12, 4, 0.0, two_segment_profile(1.0, 0.8))
        direct = find_gamma_c(spec)
        amps = spec.bond_amplitudes

        def mirrored(gamma: float) -> TridiagonalHamiltonian:
            h = build_hamiltonian(spec.with_gamma(gamma))
            diag = tuple(d.conjugate() for d in reversed(h.diagonal))
            return TridiagonalHamiltonian(diag, tuple(reversed(h.off_diagonal)))

        swapped = _bisect_threshold(mirrored, max(amps), 2.0 * max(amps) * spec.n_sites)
        assert abs(direct.gamma_c - swapped.gamma_c) <= 1e-10

    def test_threshold_scales_with_all_energies(self):
        for scale in (0.5, 3.0):
            a = cached_gamma_c(12, 5, 0.9)
            spec = LatticeSpec(12, 5, 0.0, two_segment_profile(scale, 0.9 * scale))
            b = find_gamma_c(spec).gamma_c
            assert b == pytest.approx(scale * a, rel=1e-8)


class TestSweep:
    def test_adjacent_impurity_law_across_the_grid(self):
        out = sweep_phase_diagram(20, [1], [0.5, 1.0, 2.0, 5.0], audit_points=16)
        assert not out.failures
        for rec in out.records:
            assert rec.gamma_c_over_t0 == pytest.approx(rec.tb_over_t0, rel=1e-6)
            assert rec.n_complex_above == 20

    def test_threshold_decreases_with_distance_at_weak_inner_hopping(self):
        out = sweep_phase_diagram(20, [1, 3, 5, 7], [0.2], audit_points=0)
        gammas = [rec.gamma_c for rec in sorted(out.records, key=lambda r: r.d)]
        assert all(a > b for a, b in zip(gammas, gammas[1:]))

    def test_deterministic_ordering(self):
        out = sweep_phase_diagram(8, [3, 1], [1.0, 0.5], audit_points=0)
        keys = [(rec.d, rec.tb_over_t0) for rec in out.records]
        assert keys == sorted(keys)

    def test_rejects_incompatible_distance(self):
        with pytest.raises(ValueError, match="incompatible"):
            sweep_phase_diagram(20, [2], [1.0])

    def test_rejects_empty_grids(self):
        with pytest.raises(ValueError):
            sweep_phase_diagram(20, [], [1.0])
        with pytest.raises(ValueError):
            sweep_phase_diagram(20, [1], [])
        with pytest.raises(ValueError):
            sweep_phase_diagram(20, [1], [0.0])

    def test_record_distance_consistency_enforced(self):
        with pytest.raises(ValueError, match="inconsistent"):
            SweepRecord(
                n_sites=10, impurity_site=3, d=1, t0=1.0, tb=1.0, tb_over_t0=1.0,
                gamma_c=1.0, gamma_c_over_t0=1.0, n_complex_above=2, bracket_width=1e-12,
            )

    def test_audit_passes_on_a_clean_record(self):
        spec = LatticeSpec(12, 6, 0.0, two_segment_profile(1.0, 0.8))
        audit_monotonicity(spec, find_gamma_c(spec).gamma_c, points=24)

    def test_threshold_tracks_inner_hopping_within_ten_percent(self):
        for d in (3, 5):
            for tb in (2.0, 3.0):
                gamma_c = cached_gamma_c(20, (21 - d) // 2, tb)
                assert 0.9 * tb <= gamma_c <= 1.1 * tb


class TestFitExponent:
    @staticmethod
    def _records(d, etas, n=20, count=10):
        t0 = 1.0
        m = (n + 1 - d) // 2
        records = []
        for i in range(count):
            tb = 0.05 * (0.3 / 0.05) ** (i / (count - 1))
            records.append(
                SweepRecord(
                    n_sites=n, impurity_site=m, d=d, t0=t0, tb=tb, tb_over_t0=tb,
                    gamma_c=tb ** etas, gamma_c_over_t0=tb ** etas,
                    n_complex_above=4, bracket_width=1e-12,
                )
            )
        return records

    def test_recovers_a_synthetic_power_law(self):
        fit = fit_exponent(self._records(3, 2.75), (0.05, 0.3))
        assert fit.eta == pytest.approx(2.75, abs=1e-12)
        assert fit.stderr == pytest.approx(0.0, abs=1e-10)
        assert fit.n_points == 10

    def test_adjacent_impurities_have_unit_exponent(self):
        out = sweep_phase_diagram(
            20, [1], [0.05 * (0.3 / 0.05) ** (i / 9) for i in range(10)], audit_points=0
        )
        fit = fit_exponent(out.records, (0.05, 0.3))
        assert fit.eta == pytest.approx(1.0, abs=0.01)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            fit_exponent(self._records(3, 2.0, count=9)[:7], (0.05, 0.3))

    def test_rejects_mixed_families(self):
        records = self._records(3, 2.0) + self._records(5, 3.0)
        with pytest.raises(ValueError, match="families"):
            fit_exponent(records, (0.05, 0.3))

    def test_rejects_bad_window(self):
        records = self._records(3, 2.0)
        for window in ((0.0, 0.3), (0.05, 1.0), (0.3, 0.05)):
            with pytest.raises(ValueError, match="window"):
                fit_exponent(records, window)


class TestMaximalBreaking:
    @pytest.mark.parametrize("tb", [0.5, 2.0])
    def test_two_segment_profiles(self, tb):
        report = verify_maximal_breaking(20, two_segment_profile(1.0, tb))
        assert report.passed, [c.measured for c in report.clauses if not c.passed]
        assert report.t_mid == tb

    @pytest.mark.parametrize("alpha", [-1.0, 0.5])
    def test_power_law_profiles(self, alpha):
        report = verify_maximal_breaking(20, alpha_profile(1.0, alpha))
        assert report.passed
        assert report.t_mid == pytest.approx((10 * 10) ** (alpha / 2))

    def test_random_symmetric_profiles(self):
        rng = random.Random(19)
        for _ in range(6):
            report = verify_maximal_breaking(12, random_symmetric_profile(rng, 12))
            assert report.passed, [c.measured for c in report.clauses if not c.passed]

    def test_rejects_odd_lattice(self):
        with pytest.raises(ValueError, match="even"):
            verify_maximal_breaking(9, two_segment_profile(1.0, 1.0))


class TestFragility:
    def test_ratio_shrinks_for_negative_alpha(self):
        points = fragility_scan(-1.0, [8, 16, 32])
        ratios = [p.ratio for p in points]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        for p in points:
            assert p.gamma_c == pytest.approx(2.0 / p.n_sites, rel=1e-6)

    def test_uniform_control_is_flat(self):
        points = fragility_scan(0.0, [16, 32, 64])
        ratios = [p.ratio for p in points]
        assert (max(ratios) - min(ratios)) / ratios[0] <= 0.05
        for p in points:
            assert p.gamma_c == pytest.approx(1.0, rel=1e-6)

    def test_rejects_positive_alpha_and_odd_sizes(self):
        with pytest.raises(ValueError, match="alpha"):
            fragility_scan(0.3, [8])
        with pytest.raises(ValueError, match="even"):
            fragility_scan(-1.0, [9])
