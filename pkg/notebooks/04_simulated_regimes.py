"""Monte Carlo check of the cluster regimes on moderately large trees.

Uses the chunked harness, so the output does not depend on the number of
threads. Takes about half a minute.

    python3 notebooks/04_simulated_regimes.py
"""
from tree_uncover import harness
from tree_uncover.harness import ExperimentConfig

n = 4000
runs = [
    ExperimentConfig("clusters", n, 20_000, seed=11, k=n // 2, regime="central"),
    ExperimentConfig("clusters", n, 20_000, seed=12, k=n - 63, regime="critical"),
    ExperimentConfig("clusters", n, 20_000, seed=13, k=n - 3, regime="supercritical-fixed"),
]
for cfg in runs:
    rep = harness.run_cluster_experiment(cfg)
    s = rep.scalars
    print(f"{cfg.regime:>20}: mean R/n {s['mean_R_over_n']:.4f}, exact {float(s['exact_mean_R_over_n']):.4f}, "
          f"chi-square vs exact law p={s['exact_p_value']:.3f}")

cfg = ExperimentConfig("edges", 2000, 10_000, seed=14, grid=(0.3, 0.6), limit_samples=10_000)
rep = harness.run_edge_moment_experiment(cfg)
print()
print(rep.to_text())
