import json
import math

import numpy as np
import pytest

from tree_uncover import harness
from tree_uncover.harness import ExperimentConfig, chi_square_test, total_variation


def test_chi_square_examples():
    res = chi_square_test([60, 40], [0.5, 0.5], 100)
    assert res.statistic == pytest.approx(4.0)
    assert res.df == 1
    assert res.p_value == pytest.approx(0.0455002638963584, rel=1e-12)
    flat = chi_square_test([250, 250, 500], [0.25, 0.25, 0.5], 1000)
    assert flat.statistic == 0 and flat.p_value == 1.0


def test_chi_square_merges_small_bins_into_tail():
    probs = [0.5, 0.4, 0.001, 0.001]
    res = chi_square_test([500, 398, 1, 0], probs, 1000)
    assert res.bins[-1][0] <= 2
    assert all(e >= 5 for e in res.expected)
    assert sum(res.observed) == 1000


def test_chi_square_degenerate():
    res = chi_square_test([10], [1.0], 10)
    assert res.degenerate and res.df == 0
    with pytest.raises(ValueError):
        chi_square_test([1, 2], [0.8, 0.8], 3)


def test_p_value_is_incomplete_gamma():
    from scipy.stats import chi2

    for stat, df in [(0.5, 1), (12.0, 7), (80.0, 60)]:
        assert harness.chi_square_sf(stat, df) == pytest.approx(chi2.sf(stat, df), rel=1e-12)


def test_total_variation():
    counts = np.array([500, 500])
    assert total_variation(counts, lambda m: 0.5 if m < 2 else 0.0) == pytest.approx(0.0)
    assert total_variation(counts, lambda m: 1.0 if m == 0 else 0.0) == pytest.approx(0.5)
    geom = lambda m: 0.5 ** (m + 1)
    assert total_variation(np.array([1, 0, 0]), geom) == pytest.approx(0.5)


def test_law_distance_accounts_for_missing_mass():
    assert harness.law_distance(np.array([0.5, 0.5]), lambda j: 0.5 ** (j + 1)) == pytest.approx(0.25)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("edges", 10, 0)
    with pytest.raises(ValueError):
        ExperimentConfig("edges", 10, 5, grid=(1.5,))
    with pytest.raises(ValueError):
        ExperimentConfig("clusters", 10, 5)
    with pytest.raises(ValueError):
        ExperimentConfig("largest", 10, 5, k=5)
    with pytest.raises(ValueError):
        ExperimentConfig("unknown", 10, 5)


def test_results_do_not_depend_on_thread_count(monkeypatch):
    cfg = dict(kind="edges", n=200, samples=2500, seed=9, js=(50, 100), grid=(0.3, 0.7), chunk_size=300)
    monkeypatch.setenv("TREE_UNCOVER_THREADS", "1")
    one = harness.run_edge_moment_experiment(ExperimentConfig(**cfg)).to_json()
    monkeypatch.setenv("TREE_UNCOVER_THREADS", "4")
    four = harness.run_edge_moment_experiment(ExperimentConfig(**cfg)).to_json()
    assert json.loads(one)["tables"] == json.loads(four)["tables"]


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("TREE_UNCOVER_THREADS", raising=False)
    assert harness.resolve_threads(3) == 3
    monkeypatch.setenv("TREE_UNCOVER_THREADS", "2")
    assert harness.resolve_threads(3) == 2


def test_edge_experiment_report_shape():
    cfg = ExperimentConfig("edges", 300, 2000, seed=3, js=(150,), grid=(0.3, 0.6), limit_samples=2000)
    rep = harness.run_edge_moment_experiment(cfg)
    row = rep.tables["edge_moments"][0]
    assert abs(row["mean"] - row["exact_mean"]) < 4 * row["se_mean"]
    cov = rep.tables["covariance"][0]
    assert cov["limit_cov"] == pytest.approx(0.036)
    assert "sampled_limit_cov" in cov
    assert "[process]" in rep.to_text()


def test_self_consistency_of_path_sources():
    rows = harness.compare_path_sources(100, 100_000, [20, 50, 80], seed=5, chunk_size=10_000)
    assert all(r["p_value"] > 1e-3 for r in rows)


def test_martingale_increments_are_centred():
    cfg = ExperimentConfig("martingale", 200, 20_000, seed=4, js=(50, 100, 150))
    rep = harness.run_martingale_experiment(cfg)
    for row in rep.tables["increments"]:
        assert abs(row["mean_increment"]) < 4 * row["se"]


def test_normality_proxy():
    cfg = ExperimentConfig("edges", 2000, 20_000, seed=21, grid=(0.3, 0.6))
    rep = harness.run_edge_moment_experiment(cfg)
    for row in rep.tables["process"]:
        assert abs(row["skewness"]) < 0.1
        assert abs(row["excess_kurtosis"]) < 0.2


def test_exact_pmf_goodness_of_fit():
    rep = harness.run_cluster_experiment(ExperimentConfig("clusters", 50, 100_000, seed=3, k=25))
    assert rep.scalars["exact_p_value"] > 1e-3
    for row in rep.tables["components"]:
        assert row["mean_count"] == pytest.approx(row["exact"], rel=0.05)


def test_float_pmf_matches_exact():
    from tree_uncover.exact import root_cluster_pmf

    for n, k in [(7, 3), (30, 29), (40, 12)]:
        for m in range(k + 1):
            assert math.exp(harness.root_cluster_log_pmf(n, k, m)) == pytest.approx(
                float(root_cluster_pmf(n, k, m)), rel=1e-11)


def test_critical_largest_component_report():
    cfg = ExperimentConfig("largest", 400, 500, seed=2, k=380, alpha=0.6, regime="critical")
    rep = harness.run_largest_component_experiment(cfg, qmc_points=2**12)
    assert rep.scalars["c"] == pytest.approx(1.0)
    assert 0 < rep.scalars["tail_limit"] < 1


def test_paths_csv(tmp_path):
    out = tmp_path / "paths.csv"
    cfg = ExperimentConfig("edges", 20, 50, seed=1, grid=(0.5,), paths_csv=str(out), paths_to_stream=3)
    harness.run_edge_moment_experiment(cfg)
    lines = out.read_text().splitlines()
    assert lines[0] == "sample,j,k_j" and len(lines) == 1 + 3 * 20
