"""Monte Carlo experiments tying simulated uncover processes to exact values and limit laws.

Work is split into fixed-size chunks. Chunk ``i`` draws from
``RngStream(seed, i)``, and results are reassembled in chunk order, so every
report is bit-reproducible and independent of the number of worker threads.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import gammaincc

from tree_uncover import _kernels, asymptotics, exact
from tree_uncover.trees import RngStream, sample_prufer_batch
from tree_uncover.uncover import recursive_model_sampler, sup_abs_Z, z_on_grid

KINDS = ("edges", "clusters", "largest", "martingale")
REGIMES = ("central", "critical", "supercritical-fixed")
TV_FLOOR = 1e-8


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int
    samples: int
    seed: int = 42
    k: int | None = None
    js: tuple[int, ...] = ()
    grid: tuple[float, ...] = ()
    tail_levels: tuple[float, ...] = (2.0, 3.0)
    regime: str | None = None
    c: float | None = None
    alpha: float | None = None
    source: str = "tree"
    limit_samples: int = 0
    chunk_size: int = 1000
    threads: int | None = None
    paths_csv: str | None = None
    paths_to_stream: int = 10

    def __post_init__(self):
        object.__setattr__(self, "js", tuple(int(j) for j in self.js))
        object.__setattr__(self, "grid", tuple(float(t) for t in self.grid))
        object.__setattr__(self, "tail_levels", tuple(float(c) for c in self.tail_levels))
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if any(not 0.0 <= t <= 1.0 for t in self.grid):
            raise ValueError("grid values must lie in [0, 1]")
        if any(not 1 <= j <= self.n for j in self.js):
            raise ValueError(f"positions must lie in 1..{self.n}")
        if self.k is not None and not 0 <= self.k <= self.n:
            raise ValueError(f"k must lie in 0..{self.n}")
        if self.kind in ("clusters", "largest") and self.k is None:
            raise ValueError(f"{self.kind} experiment needs k")
        if self.source not in ("tree", "recursive"):
            raise ValueError("source must be 'tree' or 'recursive'")
        if self.regime is not None and self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")
        if self.kind == "largest" and not (self.alpha is not None and 0 < self.alpha <= 1):
            raise ValueError("largest-component experiment needs alpha in (0, 1]")


@dataclass
class GofResult:
    statistic: float
    df: int
    p_value: float
    bins: list[tuple[int, int]] = field(default_factory=list)
    observed: list[int] = field(default_factory=list)
    expected: list[float] = field(default_factory=list)
    degenerate: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    """Scalars plus named tables (lists of equal-keyed rows)."""

    kind: str
    config: dict
    scalars: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _plain({"kind": self.kind, "config": self.config, "scalars": self.scalars,
                       "tables": self.tables})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"experiment: {self.kind}"]
        width = max((len(k) for k in self.scalars), default=0)
        for key, value in self.scalars.items():
            lines.append(f"  {key.ljust(width)}  {_fmt(value)}")
        for name, rows in self.tables.items():
            lines.append("")
            lines.append(f"[{name}]")
            if not rows:
                continue
            cols = list(rows[0])
            cells = [[_fmt(r[c]) for c in cols] for r in rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
            lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
        return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


# -- statistics ----------------------------------------------------------------


def chi_square_sf(statistic: float, df: int) -> float:
    """Chi-square survival function as a regularized upper incomplete gamma."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if math.isinf(statistic):
        return 0.0
    return float(gammaincc(df / 2.0, statistic / 2.0))


def _merge_bins(expected_counts, min_expected: float) -> list[tuple[int, int]]:
    # sweep left to right; a short remainder joins the last full bin
    bins, start, acc = [], 0, 0.0
    for i, e in enumerate(expected_counts):
        acc += e
        if acc >= min_expected:
            bins.append((start, i + 1))
            start, acc = i + 1, 0.0
    if start < len(expected_counts):
        if bins:
            bins[-1] = (bins[-1][0], len(expected_counts))
        else:
            bins.append((start, len(expected_counts)))
    return bins


def chi_square_test(observed, expected, total: int, min_expected: float = 5.0) -> GofResult:
    """Pearson goodness of fit of counts against probabilities.

    Any probability not covered by ``expected`` (and any count not covered by
    ``observed``) forms a final tail bin. Adjacent bins are merged until each
    expects at least ``min_expected`` counts.
    """
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    if total <= 0:
        raise ValueError("total must be positive")
    if len(observed) != len(expected):
        raise ValueError("observed and expected must have equal length")
    if np.any(expected < 0) or expected.sum() > 1 + 1e-9:
        raise ValueError("expected probabilities must be non-negative and sum to at most 1")
    obs = np.append(observed, total - observed.sum())
    exp = np.append(expected, max(0.0, 1.0 - expected.sum())) * total
    bins = _merge_bins(exp, min_expected)
    o = np.array([obs[a:b].sum() for a, b in bins])
    e = np.array([exp[a:b].sum() for a, b in bins])
    if len(bins) < 2:
        return GofResult(0.0, 0, 1.0, bins, o.tolist(), e.tolist(), degenerate=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(e > 0, (o - e) ** 2 / e, np.where(o > 0, np.inf, 0.0))
    stat = float(terms.sum())
    df = len(bins) - 1
    return GofResult(stat, df, chi_square_sf(stat, df), bins, o.tolist(), e.tolist())


def chi_square_homogeneity(counts_a, counts_b, min_expected: float = 5.0) -> GofResult:
    """Two-sample chi-square test that two count vectors share one distribution."""
    a = np.asarray(counts_a, dtype=float)
    b = np.asarray(counts_b, dtype=float)
    size = max(len(a), len(b))
    a = np.pad(a, (0, size - len(a)))
    b = np.pad(b, (0, size - len(b)))
    na, nb = a.sum(), b.sum()
    if na <= 0 or nb <= 0:
        raise ValueError("both samples must be non-empty")
    pooled = a + b
    # the smaller sample's expected count governs the merge
    bins = _merge_bins(pooled * min(na, nb) / (na + nb), min_expected)
    oa = np.array([a[i:j].sum() for i, j in bins])
    ob = np.array([b[i:j].sum() for i, j in bins])
    if len(bins) < 2:
        return GofResult(0.0, 0, 1.0, bins, degenerate=True)
    pool = oa + ob
    ea, eb = pool * na / (na + nb), pool * nb / (na + nb)
    stat = float(((oa - ea) ** 2 / ea).sum() + ((ob - eb) ** 2 / eb).sum())
    df = len(bins) - 1
    return GofResult(stat, df, chi_square_sf(stat, df), bins)


def total_variation(counts, pmf, floor: float = TV_FLOOR, max_support: int = 10**7) -> float:
    """Distance between an empirical law on ``0, 1, ...`` and a p.m.f. of total mass one.

    The support is scanned until both laws have mass below ``floor``. Limit
    mass outside the scanned range counts fully towards the distance.
    """
    counts = np.asarray(counts, dtype=float)
    emp = counts / counts.sum()
    tv, seen = 0.0, 0.0
    m = 0
    while m < max_support:
        p = pmf(m)
        q = emp[m] if m < len(emp) else 0.0
        if m >= len(emp) and p < floor:
            break
        if p >= floor or q >= floor:
            tv += abs(p - q)
            seen += p
        m += 1
    return float(0.5 * (tv + max(0.0, 1.0 - seen)))


def _moments(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=float)
    n = len(x)
    mean = x.mean()
    c = x - mean
    m2 = float((c**2).mean())
    m3 = float((c**3).mean())
    m4 = float((c**4).mean())
    var = m2 * n / (n - 1) if n > 1 else 0.0
    return {
        "mean": float(mean),
        "var": var,
        "se_mean": math.sqrt(var / n),
        "se_var": math.sqrt(max(m4 - m2 * m2, 0.0) / n),
        "skewness": m3 / m2**1.5 if m2 > 0 else 0.0,
        "excess_kurtosis": m4 / m2**2 - 3.0 if m2 > 0 else 0.0,
    }


def _covariance(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Sample covariance and its standard error."""
    prod = (x - x.mean()) * (y - y.mean())
    n = len(x)
    return float(prod.sum() / (n - 1)), float(prod.std(ddof=1) / math.sqrt(n))


# -- chunked execution ------------------------------------------------------------


def resolve_threads(requested: int | None = None) -> int:
    env = os.environ.get("TREE_UNCOVER_THREADS")
    if env:
        value = int(env)
    elif requested is not None:
        value = int(requested)
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise ValueError("thread count must be >= 1")
    return value


def run_chunked(seed: int, samples: int, chunk_size: int, work, threads: int | None = None) -> list:
    """Run ``work(generator, count)`` over all chunks, returning results in chunk order."""
    plan = [(i, min(chunk_size, samples - i * chunk_size))
            for i in range(math.ceil(samples / chunk_size))]

    def job(item):
        index, count = item
        return work(RngStream(seed, index).generator(), count)

    workers = min(resolve_threads(threads), len(plan))
    if workers == 1:
        return [job(item) for item in plan]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(job, plan))


def sample_tree_paths(n: int, count: int, gen) -> np.ndarray:
    """Edge-count paths of uniform random trees, shape ``(count, n + 1)`` with ``K_0 = 0``."""
    us, vs = sample_prufer_batch(n, count, gen)
    inc = _kernels.uncover_increments(us, vs, n)
    out = np.zeros((count, n + 1), dtype=np.int64)
    np.cumsum(inc, axis=1, out=out[:, 1:])
    return out


def sample_paths(n: int, count: int, gen, source: str = "tree") -> np.ndarray:
    if source == "tree":
        return sample_tree_paths(n, count, gen)
    body = recursive_model_sampler(n, gen, size=count)
    return np.concatenate([np.zeros((count, 1), np.int64), body], axis=1)


def _stream_paths(cfg: ExperimentConfig) -> None:
    count = min(cfg.paths_to_stream, cfg.samples)
    paths = sample_paths(cfg.n, count, RngStream(cfg.seed, 0).generator(), cfg.source)
    with open(cfg.paths_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "j", "k_j"])
        for i, row in enumerate(paths):
            writer.writerows((i, j, int(kj)) for j, kj in enumerate(row[1:], start=1))


# -- experiments ------------------------------------------------------------------


def run_edge_moment_experiment(cfg: ExperimentConfig) -> Report:
    """Moments of ``K_j``, covariances of ``Z`` on a grid and ``sup |Z|`` tail fractions."""
    grid = np.asarray(cfg.grid, dtype=float)
    js = np.asarray(cfg.js, dtype=np.int64)

    def work(gen, count):
        paths = sample_paths(cfg.n, count, gen, cfg.source)
        return paths[:, js], z_on_grid(paths, grid), sup_abs_Z(paths)

    parts = run_chunked(cfg.seed, cfg.samples, cfg.chunk_size, work, cfg.threads)
    kj = np.concatenate([p[0] for p in parts])
    z = np.concatenate([p[1] for p in parts])
    sup = np.concatenate([p[2] for p in parts])
    if cfg.paths_csv:
        _stream_paths(cfg)

    rep = Report("edges", asdict(cfg), {"n": cfg.n, "samples": cfg.samples, "source": cfg.source})
    rows = []
    for i, j in enumerate(cfg.js):
        mom = _moments(kj[:, i])
        rows.append({"j": j, "mean": mom["mean"], "se_mean": mom["se_mean"],
                     "exact_mean": float(exact.expected_edges(cfg.n, j)),
                     "var": mom["var"], "se_var": mom["se_var"],
                     "exact_var": float(exact.variance_edges(cfg.n, j))})
    rep.tables["edge_moments"] = rows

    rep.tables["process"] = []
    for i, t in enumerate(grid):
        mom = _moments(z[:, i])
        rep.tables["process"].append({
            "t": float(t), "mean_Z": mom["mean"], "var_Z": mom["var"], "se_var": mom["se_var"],
            "limit_var": asymptotics.limit_covariance(t, t),
            "skewness": mom["skewness"], "excess_kurtosis": mom["excess_kurtosis"]})

    limit = None
    if cfg.limit_samples and len(grid):
        limit = asymptotics.sample_limit_process(grid, RngStream(cfg.seed, 2**63).generator(),
                                                 size=cfg.limit_samples)
    cov_rows = []
    for a in range(len(grid)):
        for b in range(a + 1, len(grid)):
            s, t = sorted((grid[a], grid[b]))
            cov, se = _covariance(z[:, a], z[:, b])
            row = {"s": float(s), "t": float(t), "cov": cov, "se": se,
                   "limit_cov": asymptotics.limit_covariance(s, t)}
            if limit is not None:
                lc, lse = _covariance(limit[:, a], limit[:, b])
                row.update(sampled_limit_cov=lc, sampled_limit_se=lse)
            cov_rows.append(row)
    rep.tables["covariance"] = cov_rows
    if limit is not None:
        rep.tables["limit_process"] = [
            {"t": float(t), **{k: v for k, v in _moments(limit[:, i]).items()
                               if k in ("mean", "var", "se_mean", "se_var")}}
            for i, t in enumerate(grid)]

    rep.tables["sup_tail"] = []
    for level in cfg.tail_levels:
        frac = float((sup >= level).mean())
        bound = 4.0 / (level - 1.0) ** 2 if level > 1 else math.inf
        rep.tables["sup_tail"].append({
            "C": level, "fraction": frac, "se": math.sqrt(frac * (1 - frac) / len(sup)),
            "bound": bound})
    return rep


def _cluster_batches(cfg: ExperimentConfig):
    n, k = cfg.n, cfg.k

    def work(gen, count):
        us, vs = sample_prufer_batch(n, count, gen)
        roots = gen.integers(0, n, size=count, dtype=np.int64)
        return _kernels.cluster_batch(us, vs, n, k, roots)

    parts = run_chunked(cfg.seed, cfg.samples, cfg.chunk_size, work, cfg.threads)
    root = np.concatenate([p[0] for p in parts])
    largest = np.concatenate([p[1] for p in parts])
    hist = np.sum([p[2] for p in parts], axis=0)
    return root, largest, hist


def _critical_c(cfg: ExperimentConfig) -> float:
    return cfg.c if cfg.c is not None else (cfg.n - cfg.k) / math.sqrt(cfg.n)


def root_cluster_log_pmf(n: int, k: int, m: int) -> float:
    """Floating-point log of the exact root-cluster p.m.f., usable at large ``n``."""
    if not 0 <= m <= k <= n:
        raise ValueError("need 0 <= m <= k <= n")
    if m == 0:
        return math.log((n - k) / n) if k < n else -math.inf
    if k == n:
        return 0.0 if m == n else -math.inf
    return (m * math.log(m) + math.log(n - k) + math.lgamma(k + 1) - math.lgamma(m + 1)
            - math.lgamma(k - m + 1) + (k - m - 1) * math.log(n - m) - k * math.log(n))


def root_cluster_pmf_array(n: int, k: int) -> np.ndarray:
    return np.array([math.exp(root_cluster_log_pmf(n, k, m)) for m in range(k + 1)])


def law_distance(pmf_a: np.ndarray, pmf_b, floor: float = TV_FLOOR) -> float:
    """Total variation between a finite p.m.f. array and a p.m.f. of total mass one.

    Mass of ``pmf_b`` beyond the array's support counts fully.
    """
    pmf_a = np.asarray(pmf_a, dtype=float)
    b = np.array([pmf_b(j) for j in range(len(pmf_a))])
    keep = (pmf_a >= floor) | (b >= floor)
    return 0.5 * (float(np.abs(pmf_a - b)[keep].sum()) + max(0.0, 1.0 - float(b[keep].sum())))


def run_cluster_experiment(cfg: ExperimentConfig, exact_limit: int = 400,
                           components_upto: int = 5) -> Report:
    """Root-cluster law against the exact p.m.f. and the requested limit regime.

    Limit comparisons report two distances: the plug-in distance of the
    empirical law (inflated by sampling noise on long tails) and the distance
    of the exact finite-``n`` law, which the chi-square ties to the simulation.
    """
    n, k = cfg.n, cfg.k
    root, largest, hist = _cluster_batches(cfg)
    counts = np.bincount(root, minlength=k + 1)
    total = len(root)
    probs = root_cluster_pmf_array(n, k)
    gof = chi_square_test(counts, probs / max(1.0, probs.sum()), total)
    rep = Report("clusters", asdict(cfg), {
        "n": n, "k": k, "samples": cfg.samples,
        "mean_R_over_n": float(root.mean() / n),
        "se_mean_R_over_n": float(root.std(ddof=1) / n / math.sqrt(total)) if total > 1 else 0.0,
        "mean_Cmax_over_n": float(largest.mean() / n),
        "exact_chi2": gof.statistic, "exact_df": gof.df, "exact_p_value": gof.p_value})
    if n <= exact_limit:
        rep.scalars["exact_mean_R_over_n"] = float(exact.root_cluster_expectation(n, k) / n)
        rep.tables["components"] = [
            {"r": r, "mean_count": hist[r] / cfg.samples,
             "exact": float(exact.expected_components(n, k, r))}
            for r in range(1, min(k, components_upto) + 1)]
    else:
        rep.scalars["exact_mean_R_over_n"] = exact.root_cluster_expectation_integral(n, k) / n
    rep.tables["pmf"] = [{"m": m, "empirical": counts[m] / total, "exact": probs[m]}
                         for m in range(min(k, 50) + 1)]

    if cfg.regime == "central":
        alpha = cfg.alpha if cfg.alpha is not None else k / n
        limit = lambda m: asymptotics.central_limit_pmf(alpha, m)
        rep.scalars["alpha"] = alpha
        rep.scalars["tv_to_limit"] = total_variation(counts, limit)
        rep.scalars["exact_law_tv_to_limit"] = law_distance(probs, limit)
    elif cfg.regime == "critical":
        c = _critical_c(cfg)
        rep.scalars["c"] = c
        rep.scalars["kappa"] = asymptotics.kappa(c)
        rep.scalars["kappa_quadrature"] = asymptotics.critical_mean(c)
    elif cfg.regime == "supercritical-fixed":
        d = n - k
        limit = lambda j: asymptotics.borel_type_pmf(d, j)
        # n - d - R = k - R, so reverse the root-cluster arrays
        rep.scalars["d"] = d
        rep.scalars["tv_to_limit"] = total_variation(counts[::-1], limit)
        rep.scalars["exact_law_tv_to_limit"] = law_distance(probs[::-1], limit)
    return rep


def run_largest_component_experiment(cfg: ExperimentConfig, qmc_points: int = 2**20) -> Report:
    """Distribution of the largest cluster; the critical tail is paired with its limit."""
    n, k = cfg.n, cfg.k
    _, largest, _ = _cluster_batches(cfg)
    frac = largest / n
    ge = float((largest >= cfg.alpha * n).mean())
    gt = float((frac > cfg.alpha).mean())
    se = math.sqrt(ge * (1 - ge) / len(largest))
    rep = Report("largest", asdict(cfg), {
        "n": n, "k": k, "d": n - k, "samples": cfg.samples, "alpha": cfg.alpha,
        "mean_Cmax_over_n": float(frac.mean()),
        "se_mean_Cmax_over_n": float(frac.std(ddof=1) / math.sqrt(len(frac))) if len(frac) > 1 else 0.0,
        "tail_ge": ge, "tail_gt": gt, "se_tail": se})
    rep.tables["quantiles"] = [{"q": q, "Cmax_over_n": float(np.quantile(frac, q))}
                               for q in (0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99)]
    if cfg.regime == "critical":
        c = _critical_c(cfg)
        rep.scalars["c"] = c
        rep.scalars["tail_limit"] = asymptotics.largest_component_tail_limit(
            c, cfg.alpha, qmc_points=qmc_points)
    return rep


def run_martingale_experiment(cfg: ExperimentConfig, bins: int = 5) -> Report:
    """Mean of ``Y_{j+1} - Y_j`` within quantile bins of ``Y_j`` for each ``j`` in ``cfg.js``."""
    n = cfg.n
    for j in cfg.js:
        if not 1 <= j <= n - 2:
            raise ValueError(f"martingale step needs 1 <= j <= n - 2, got {j}")
    js = np.asarray(cfg.js, dtype=np.int64)

    def work(gen, count):
        paths = sample_paths(n, count, gen, cfg.source)
        y0 = (paths[:, js] - js * (js - 1) / n) / (n - js)
        y1 = (paths[:, js + 1] - (js + 1) * js / n) / (n - js - 1)
        return y0, y1

    parts = run_chunked(cfg.seed, cfg.samples, cfg.chunk_size, work, cfg.threads)
    y0 = np.concatenate([p[0] for p in parts])
    y1 = np.concatenate([p[1] for p in parts])
    rows = []
    for i, j in enumerate(cfg.js):
        edges = np.unique(np.quantile(y0[:, i], np.linspace(0, 1, bins + 1)))
        label = np.clip(np.searchsorted(edges, y0[:, i], side="right") - 1, 0, len(edges) - 2)
        diff = y1[:, i] - y0[:, i]
        for b in range(len(edges) - 1):
            sel = diff[label == b]
            if len(sel) < 2:
                continue
            rows.append({"j": int(j), "bin": b, "count": len(sel), "mean_increment": float(sel.mean()),
                         "se": float(sel.std(ddof=1) / math.sqrt(len(sel)))})
    rep = Report("martingale", asdict(cfg), {"n": n, "samples": cfg.samples})
    rep.tables["increments"] = rows
    return rep


def compare_path_sources(n: int, samples: int, js, seed: int = 42, threads: int | None = None,
                         chunk_size: int = 1000) -> list[dict]:
    """Homogeneity tests of ``K_j`` marginals: tree-based paths versus the recursion."""
    js = np.asarray(list(js), dtype=np.int64)
    out = {}
    for source, stream_seed in (("tree", seed), ("recursive", (seed + 1) % 2**64)):
        parts = run_chunked(stream_seed, samples, chunk_size,
                            lambda gen, count: sample_paths(n, count, gen, source)[:, js], threads)
        out[source] = np.concatenate(parts)
    rows = []
    for i, j in enumerate(js):
        a = np.bincount(out["tree"][:, i], minlength=j)
        b = np.bincount(out["recursive"][:, i], minlength=j)
        gof = chi_square_homogeneity(a, b)
        rows.append({"j": int(j), "statistic": gof.statistic, "df": gof.df, "p_value": gof.p_value})
    return rows


def run_experiment(cfg: ExperimentConfig) -> Report:
    return {
        "edges": run_edge_moment_experiment,
        "clusters": run_cluster_experiment,
        "largest": run_largest_component_experiment,
        "martingale": run_martingale_experiment,
    }[cfg.kind](cfg)


def recursive_model_joint_gof(n: int, samples: int, seed: int = 42, chunk_size: int = 100_000,
                              threads: int | None = None) -> GofResult:
    """Chi-square of the recursion's joint law of ``(K_2, ..., K_{n-1})`` against enumeration."""
    from tree_uncover import oracle

    table = oracle.oracle_full_sequences(n)
    cells = sorted(table.counts)
    index = {cell[1:n - 1]: i for i, cell in enumerate(cells)}
    probs = [table.counts[cell] / table.total for cell in cells]

    def work(gen, count):
        body = recursive_model_sampler(n, gen, size=count)[:, 1:n - 1]
        keys, freq = np.unique(body, axis=0, return_counts=True)
        return [(tuple(int(x) for x in key), int(f)) for key, f in zip(keys, freq)]

    observed = np.zeros(len(cells), dtype=np.int64)
    for part in run_chunked(seed, samples, chunk_size, work, threads):
        for key, f in part:
            if key in index:
                observed[index[key]] += f
    # paths no tree produces fall into the tail bin, whose expected mass is zero
    return chi_square_test(observed, probs, samples)
