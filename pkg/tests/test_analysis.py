import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graph_cubature import (
    BandwidthError,
    cluster_spectral,
    compute_constants,
    gradient_norm,
    graph_spectrum,
    make_average,
    make_dirac,
    normalize,
    pw_basis,
)
from graph_cubature.analysis import (
    InequalityReport,
    check_operator_poincare,
    check_sample_poincare,
    check_cluster_poincare,
    check_double_l1,
    check_global_poincare,
    check_l1_inequality,
    check_plancherel_polya,
    check_poincare_with_sample,
    cluster_residual,
    compare,
    frame_lower_factor,
    local_gradient_energy,
    optimal_tau,
    summarize,
)
from graph_cubature.generators import CommunitySpec, gen_community, gen_path, gen_random_connected


class TestCompare:
    def test_equal_is_not_violation(self):
        assert not compare(1.0, 1.0).violated

    def test_within_tolerance(self):
        assert not compare(1.0 + 1e-10, 1.0).violated
        assert compare(1.0 + 1e-8, 1.0).violated

    def test_zero_zero(self):
        r = compare(0.0, 0.0)
        assert not r.violated and r.slack == 0.0

    def test_summary_witness(self):
        rs = [compare(0.5, 1.0), compare(2.0, 1.0), compare(0.9, 1.0)]
        rep = summarize("demo", rs, witnesses=[{"k": 0}, {"k": 1}, {"k": 2}])
        assert rep.violated and rep.witness["k"] == 1 and rep.trials == 3
        assert InequalityReport.from_json(rep.to_json()) == rep


class TestPoincare:
    def test_tight_on_first_eigenvector(self):
        g = gen_random_connected(15, 0.3, seed=4)
        sd = graph_spectrum(g)
        r = check_global_poincare(g, sd, np.ones(15), sd.eigenvectors[:, 1])
        assert not r.violated
        assert r.lhs / r.rhs >= 1 - 1e-9

    def test_zero_signal(self):
        g = gen_path(5)
        r = check_global_poincare(g, graph_spectrum(g), np.ones(5), np.zeros(5))
        assert r.lhs == 0 and not r.violated

    def test_disconnected_rejected(self):
        from graph_cubature import Graph
        g = Graph(4, ((0, 1, 1.0), (2, 3, 1.0)))
        with pytest.raises(ValueError):
            check_global_poincare(g, graph_spectrum(g), np.ones(4), np.arange(4.0))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**31))
    def test_suite_random(self, n, seed):
        g = gen_random_connected(n, 0.3, seed)
        sd = graph_spectrum(g)
        rng = np.random.default_rng(seed)
        psi = rng.uniform(0, 1, n) + 0.01
        f = rng.standard_normal(n)
        assert not check_global_poincare(g, sd, psi, f).violated
        assert not check_sample_poincare(g, sd, psi, f).violated
        for eps in (0.1, 1.0, 10.0):
            assert not check_poincare_with_sample(g, sd, psi, f, eps).violated

    def test_bad_eps(self):
        g = gen_path(3)
        with pytest.raises(ValueError):
            check_poincare_with_sample(g, graph_spectrum(g), np.ones(3), np.ones(3), 0.0)


class TestClusterPoincare:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 6), st.integers(0, 10**6))
    def test_random(self, N, m, seed):
        g, p = gen_community(CommunitySpec(N, m, 0.8, 1.0, 0.1, 2, seed=seed))
        cs = cluster_spectral(g, p)
        rng = np.random.default_rng(seed)
        nf = normalize(make_dirac(p, [c[rng.integers(len(c))] for c in p.clusters], g.n))
        f = rng.standard_normal(g.n)
        assert not check_cluster_poincare(g, p, cs, nf, f).violated

    def test_local_energy_below_global(self, rng):
        g, p = gen_community(CommunitySpec(3, 4, 0.9, 1.0, 0.5, 2, seed=1))
        f = rng.standard_normal(g.n)
        assert local_gradient_energy(g, p, f) <= gradient_norm(g, f) ** 2

    def test_residual_zero_on_cluster_constants(self, barbell):
        g, p = barbell
        nf = normalize(make_average(p, g.n))
        f = np.array([2.0] * 3 + [-1.0] * 3)
        np.testing.assert_allclose(cluster_residual(p, nf, f), 0, atol=1e-15)


class TestOperatorPoincare:
    def test_square_root_reproduces_global_poincare(self, rng):
        g = gen_random_connected(12, 0.4, seed=7)
        sd = graph_spectrum(g)
        t = np.sqrt(np.clip(sd.eigenvalues, 0, None))
        t[0] = 0.0
        psi = rng.uniform(0.1, 1, 12)
        f = rng.standard_normal(12)
        a = check_operator_poincare(t, sd.eigenvectors, psi, f)
        b = check_global_poincare(g, sd, psi, f)
        assert abs(a.slack - b.slack) <= 1e-10

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            check_operator_poincare([0.0, 1.0], np.eye(3), np.ones(2), np.ones(2))
        with pytest.raises(ValueError):
            check_operator_poincare([0.0, 0.0], np.eye(2), np.ones(2), np.ones(2))


class TestFrame:
    def test_optimal_tau_vs_grid(self):
        for omega, a_xi in [(0.1, 1.0), (0.5, 1.5), (0.01, 10.0), (0.2, 0.3)]:
            tau, value = optimal_tau(omega, a_xi)
            grid = np.linspace(1e-4, 1 / (omega * a_xi) - 1, 200001)
            best = np.max((1 - omega * (1 + grid) * a_xi) * grid / (1 + grid))
            assert value == pytest.approx(best, rel=1e-6)
            assert frame_lower_factor(omega, a_xi, tau) == pytest.approx(value, rel=1e-12)

    def test_optimal_tau_zero_omega(self):
        assert optimal_tau(0.0, 2.0) == (math.inf, 1.0)

    def test_out_of_range(self):
        with pytest.raises(BandwidthError):
            optimal_tau(1.0, 1.0)

    def test_barbell_frame(self, barbell_setup):
        g, p, sd, cs, ff, nf, c = barbell_setup
        rep = check_plancherel_polya(g, sd, p, nf, c, 0.08, trials=300)
        assert not rep.violated
        assert rep.bound_lower <= rep.empirical_lower <= rep.empirical_upper <= rep.bound_upper * (1 + 1e-12)
        # phi_1 is nearly, not exactly, +-1/sqrt(6) on each triangle
        assert rep.empirical_lower == pytest.approx(0.33333005583, rel=1e-9)

    def test_omega_zero_closed_form(self, barbell_setup):
        # E_0 is the constants: sum_j <zeta_j, chi/sqrt(n)>^2 = |J| / n
        g, p, sd, cs, ff, nf, c = barbell_setup
        rep = check_plancherel_polya(g, sd, p, nf, c, 0.0, trials=10)
        assert rep.empirical_lower == pytest.approx(2 / 6, rel=1e-12)
        assert rep.empirical_upper <= 3  # max |S_j| with the raw indicators
        assert not rep.violated

    def test_raw_constants_reported(self, barbell_setup):
        g, p, sd, cs, ff, nf, c = barbell_setup
        rep = check_plancherel_polya(g, sd, p, nf, c, 0.08, trials=5)
        assert rep.raw_bound_upper == pytest.approx(3.0)
        assert rep.raw_bound_lower > rep.empirical_lower

    def test_above_frame_cutoff(self, barbell_setup):
        g, p, sd, cs, ff, nf, c = barbell_setup
        with pytest.raises(BandwidthError):
            check_plancherel_polya(g, sd, p, nf, c, 3.0)


class TestL1:
    def _setup(self, seed):
        g, p = gen_community(CommunitySpec(3, 5, 0.8, 1.0, 1e-3, 1, seed=seed))
        sd, cs = graph_spectrum(g), cluster_spectral(g, p)
        ff = make_average(p, g.n)
        nf = normalize(ff, cs)
        return g, p, sd, cs, nf, compute_constants(ff, nf, p, cs)

    def test_l1_and_double(self):
        for seed in range(10):
            g, p, sd, cs, nf, c = self._setup(seed)
            omega = c.omega_cubature(0.4)
            pw = pw_basis(sd, omega)
            rng = np.random.default_rng(seed)
            for _ in range(20):
                f = pw.basis @ rng.standard_normal(pw.dim)
                assert not check_l1_inequality(g, p, cs, nf, c, omega, f).violated
                assert not check_double_l1(g, p, nf, c, omega, f, sd=sd).violated

    def test_l1_requires_x_omega(self):
        g, p, sd, cs, nf, c = self._setup(0)
        with pytest.raises(BandwidthError):
            check_l1_inequality(g, p, cs, nf, c, 1e-6, sd.eigenvectors[:, -1])

    def test_double_requires_e_omega(self):
        g, p, sd, cs, nf, c = self._setup(0)
        omega = c.omega_cubature(0.4)
        with pytest.raises(BandwidthError):
            check_double_l1(g, p, nf, c, omega, sd.eigenvectors[:, -1], sd=sd)

    def test_gamma_guard(self):
        g, p, sd, cs, nf, c = self._setup(0)
        with pytest.raises(BandwidthError):
            check_double_l1(g, p, nf, c, c.omega_cubature(0.6), np.ones(g.n))
