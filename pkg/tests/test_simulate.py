import numpy as np
import pytest

from supdens import (
    EPANECHNIKOV,
    ConfigError,
    ExperimentSpec,
    MethodSpec,
    Sample,
    SupportInterval,
    TABLE_METHODS,
    beta_pdf,
    boundary_ise,
    fit_naive,
    fit_reflection,
    run_experiment,
    sample_beta,
)


class TestBetaPdf:
    def test_uniform(self):
        xs = np.array([-0.5, 0.0, 0.3, 1.0, 1.5])
        assert np.allclose(beta_pdf(1, 1, xs), [0, 1, 1, 1, 0])

    def test_beta31_at_one(self):
        assert beta_pdf(3, 1, 1.0) == pytest.approx(3.0, rel=1e-14)
        assert beta_pdf(3, 1, 0.5) == pytest.approx(3 * 0.25, rel=1e-14)

    def test_beta33_flat_at_one(self):
        assert beta_pdf(3, 3, 1.0) == 0.0
        # numeric derivative at 1- tends to 0
        eps = 1e-6
        slope = (beta_pdf(3, 3, 1.0) - beta_pdf(3, 3, 1.0 - eps)) / eps
        assert abs(slope) < 1e-3

    def test_integrates_to_one(self):
        from supdens.quadrature import composite_simpson

        for p, q in [(1, 1), (3, 1), (3, 3), (2.5, 1.7)]:
            total = composite_simpson(lambda x: np.asarray(beta_pdf(p, q, x)), 0, 1, 20001)
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_invalid_shapes(self):
        with pytest.raises(ConfigError):
            beta_pdf(0.0, 1.0, 0.5)


class TestSampleBeta:
    def test_determinism(self):
        a = sample_beta(2.0, 3.0, 50, 99)
        b = sample_beta(2.0, 3.0, 50, 99)
        assert np.array_equal(a.values, b.values)

    def test_support(self):
        s = sample_beta(0.7, 2.0, 1000, 5)
        assert s.min >= 0.0 and s.max <= 1.0

    def test_mean_clt_band(self):
        s = sample_beta(1.0, 1.0, 100_000, 1234)
        assert abs(float(np.mean(s.values)) - 0.5) < 0.005

    def test_tuple_seed_gives_distinct_streams(self):
        a = sample_beta(1.0, 1.0, 20, (7, 0))
        b = sample_beta(1.0, 1.0, 20, (7, 1))
        assert not np.array_equal(a.values, b.values)


class TestBoundaryIse:
    def test_zero_when_est_equals_truth(self):
        rng = np.random.default_rng(50)
        s = Sample(rng.uniform(0, 1, 60))
        est = fit_naive(s, 0.1, EPANECHNIKOV)
        ise = boundary_ise(est, lambda xs: est.pdf(xs), 1.0, 0.1)
        assert ise == pytest.approx(0.0, abs=1e-12)

    def test_constant_offset_gives_c_squared_length(self):
        rng = np.random.default_rng(51)
        s = Sample(rng.uniform(0, 1, 60))
        h = 0.1
        est = fit_naive(s, h, EPANECHNIKOV)
        c, a, b = 0.3, 0.95, 1.05

        def truth(xs):
            return est.pdf(xs) - c * ((xs >= a) & (xs <= b))

        ise = boundary_ise(est, truth, 1.0, h, nodes=40001)
        assert ise == pytest.approx(c * c * (b - a), rel=1e-3)

    def test_region_covers_estimator_support(self):
        s = Sample([0.2, 0.6, 0.9])
        h = 0.2
        est = fit_reflection(s, h, EPANECHNIKOV, SupportInterval(0.0, 1.4))
        # truth vanishing outside [0, 1]: everything the estimator puts beyond
        # must be charged
        ise_wide = boundary_ise(est, lambda xs: np.asarray(beta_pdf(1, 1, xs)), 1.0, h)
        assert ise_wide > 0

    def test_invalid_nodes(self):
        s = Sample([0.2, 0.6])
        est = fit_naive(s, 0.1, EPANECHNIKOV)
        with pytest.raises(ConfigError):
            boundary_ise(est, lambda xs: xs * 0, 1.0, 0.1, nodes=0)


class TestRunExperiment:
    def test_single_replication_deterministic(self):
        spec = ExperimentSpec(p=1, q=1, ns=(30,), reps=1, seed=42, quad_nodes=801)
        r1 = run_experiment(spec)
        r2 = run_experiment(spec)
        assert r1.table_csv() == r2.table_csv()
        for c1, c2 in zip(r1.cells, r2.cells):
            assert c1.mean_ise == c2.mean_ise

    def test_mean_ise_decreases_with_n(self):
        # stable methods at a desk scale; seed fixed
        methods = (MethodSpec("naive"), TABLE_METHODS[3], TABLE_METHODS[4])
        spec = ExperimentSpec(p=1, q=1, ns=(50, 200), methods=methods, reps=150, seed=3,
                              quad_nodes=2001)
        res = run_experiment(spec)
        for m in methods:
            assert res.cell(200, m.label).mean_ise < res.cell(50, m.label).mean_ise

    def test_split_halves_agree_within_3_sem(self):
        base = dict(p=1.0, q=1.0, ns=(60,), methods=(MethodSpec("naive"),), reps=60,
                    quad_nodes=1001)
        r1 = run_experiment(ExperimentSpec(seed=11, **base))
        r2 = run_experiment(ExperimentSpec(seed=12, **base))
        c1, c2 = r1.cells[0], r2.cells[0]
        combined = np.hypot(c1.sem, c2.sem)
        assert abs(c1.mean_ise - c2.mean_ise) <= 3.0 * combined

    def test_fixed_bandwidth_policy(self):
        spec = ExperimentSpec(p=3, q=1, ns=(40,), reps=3, seed=1, bandwidth=0.15,
                              quad_nodes=801)
        res = run_experiment(spec)
        assert all(c.mean_ise >= 0 for c in res.cells)

    def test_fallbacks_counted_and_kept(self):
        # tiny n with modest bandwidth: reflection solves fall back sometimes
        spec = ExperimentSpec(p=1, q=1, ns=(8,), methods=(TABLE_METHODS[3],), reps=40,
                              seed=2, quad_nodes=801)
        res = run_experiment(spec)
        cell = res.cells[0]
        assert cell.reps == 40
        assert cell.fallbacks >= 0

    def test_table_csv_shape(self):
        spec = ExperimentSpec(p=1, q=1, ns=(20, 30), reps=2, seed=0, quad_nodes=501)
        res = run_experiment(spec)
        lines = res.table_csv().strip().split("\n")
        assert lines[0] == "distribution,n," + ",".join(m.label for m in TABLE_METHODS)
        assert len(lines) == 3
        assert lines[1].startswith("beta(1,1),20,")

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            ExperimentSpec(reps=0)
        with pytest.raises(ConfigError):
            ExperimentSpec(bandwidth="plugin")
        with pytest.raises(ConfigError):
            ExperimentSpec(ns=(1,))
