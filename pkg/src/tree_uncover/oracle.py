"""Ground truth by exhaustive enumeration of all labeled trees for small ``n``.

Trees are produced from Prüfer sequences in lexicographic order. A single
pass per ``n`` (:func:`census`) records everything the exact formulas are
checked against: full uncover paths, root-cluster sizes, component sizes and
which label sets occur as components.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from tree_uncover import exact
from tree_uncover.trees import LabeledTree, PrueferSeq, prufer_decode

MAX_N = 9
HARD_MAX_N = 10


def enumerate_trees(n: int, allow_large: bool = False, start: int = 0, stop: int | None = None):
    """Yield every labeled tree on ``n`` vertices exactly once.

    ``start``/``stop`` slice the lexicographic Prüfer index range, so disjoint
    ranges can be enumerated independently and their results merged.
    """
    limit = HARD_MAX_N if allow_large else MAX_N
    if not 1 <= n <= limit:
        raise ValueError(f"enumeration supports 1 <= n <= {limit}; got n={n}")
    if n == 1:
        if start == 0 and (stop is None or stop > 0):
            yield LabeledTree(1, ())
        return
    seqs = itertools.product(range(1, n + 1), repeat=n - 2)
    for seq in itertools.islice(seqs, start, stop):
        yield prufer_decode(PrueferSeq(n, seq))


@dataclass
class EnumerationReport:
    """Exact counts per outcome; ``total`` is the size of the enumerated population."""

    n: int
    params: dict
    counts: dict = field(default_factory=dict)
    total: int = 0

    def probability(self, outcome) -> Fraction:
        return Fraction(self.counts.get(outcome, 0), self.total)


@dataclass
class Census:
    n: int
    trees: int = 0
    paths: Counter = field(default_factory=Counter)
    # per k: root-cluster size over all (tree, root) pairs
    root_sizes: dict = field(default_factory=dict)
    # per k: number of components of size r summed over trees
    size_totals: dict = field(default_factory=dict)
    # per k: how many trees have the label set S as a component / S1, S2 both
    components: dict | None = None
    component_pairs: dict | None = None

    def merge(self, other: "Census") -> "Census":
        self.trees += other.trees
        self.paths.update(other.paths)
        for mine, theirs in ((self.root_sizes, other.root_sizes), (self.size_totals, other.size_totals)):
            for k, counter in theirs.items():
                mine.setdefault(k, Counter()).update(counter)
        if other.components is not None:
            for attr in ("components", "component_pairs"):
                mine = getattr(self, attr)
                if mine is None:
                    mine = {}
                    setattr(self, attr, mine)
                for k, counter in getattr(other, attr).items():
                    mine.setdefault(k, Counter()).update(counter)
        return self


def _components(adj, k):
    seen = set()
    comps = []
    for v in range(1, k + 1):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in adj[x]:
                if w <= k and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def build_census(n: int, with_sets: bool = False, allow_large: bool = False,
                 start: int = 0, stop: int | None = None) -> Census:
    out = Census(n)
    if with_sets:
        out.components, out.component_pairs = {}, {}
    for k in range(n + 1):
        out.root_sizes[k] = Counter()
        out.size_totals[k] = Counter()
        if with_sets:
            out.components[k] = Counter()
            out.component_pairs[k] = Counter()
    for tree in enumerate_trees(n, allow_large, start, stop):
        out.trees += 1
        adj = tree.neighbors()
        path = [0] * n
        for _, v in tree.edges:
            path[v - 1] += 1
        out.paths[tuple(itertools.accumulate(path))] += 1
        for k in range(n + 1):
            comps = _components(adj, k)
            roots = out.root_sizes[k]
            sizes = out.size_totals[k]
            roots[0] += n - k
            for comp in comps:
                roots[len(comp)] += len(comp)
                sizes[len(comp)] += 1
            if with_sets:
                out.components[k].update(comps)
                out.component_pairs[k].update(
                    frozenset(pair) for pair in itertools.combinations(comps, 2)
                )
    return out


@lru_cache(maxsize=16)
def census(n: int, with_sets: bool = False) -> Census:
    return build_census(n, with_sets)


def oracle_uncover_distribution(n: int, js) -> EnumerationReport:
    """Tree counts for every observed value of ``(k_{j_1}, ..., k_{j_r})``."""
    if n > 8:
        raise ValueError("uncover oracle limited to n <= 8")
    js = tuple(int(j) for j in js)
    if any(not 1 <= j <= n for j in js):
        raise ValueError(f"positions {js} outside 1..{n}")
    counts: Counter = Counter()
    cen = census(n)
    for path, c in cen.paths.items():
        counts[tuple(path[j - 1] for j in js)] += c
    return EnumerationReport(n, {"js": js}, dict(counts), cen.trees)


def oracle_full_sequences(n: int) -> EnumerationReport:
    cen = census(n)
    return EnumerationReport(n, {"js": "all"}, dict(cen.paths), cen.trees)


def oracle_root_cluster(n: int, k: int) -> EnumerationReport:
    """Rooted trees (``n^{n-1}`` of them) by root-cluster size after ``k`` steps."""
    if n > 7:
        raise ValueError("rooted oracle limited to n <= 7")
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    counts = census(n).root_sizes[k]
    return EnumerationReport(n, {"k": k}, {m: c for m, c in sorted(counts.items()) if c},
                             n ** (n - 1))


def oracle_expected_components(n: int, k: int, r: int) -> Fraction:
    if n > 8:
        raise ValueError("component oracle limited to n <= 8")
    if not 0 <= r <= k <= n:
        raise ValueError("need 0 <= r <= k <= n")
    cen = census(n)
    return Fraction(cen.size_totals[k][r], cen.trees)


def oracle_cluster_sets(n: int, k: int, sets) -> int:
    """Number of trees in which every given label set is a component of the forest on ``[k]``."""
    if n > 7:
        raise ValueError("set oracle limited to n <= 7")
    sets = [frozenset(s) for s in sets]
    if len(sets) not in (1, 2):
        raise ValueError("only one or two prescribed components are tracked")
    cen = census(n, with_sets=True)
    if len(sets) == 1:
        return cen.components[k][sets[0]]
    return cen.component_pairs[k][frozenset(sets)]


# -- verification suites -----------------------------------------------------------


@dataclass
class CheckResult:
    formula: str
    n: int
    checked: int = 0
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def compare(self, params: dict, expected, actual) -> None:
        self.checked += 1
        if expected != actual and self.counterexample is None:
            self.counterexample = {"params": params, "oracle": str(expected), "formula": str(actual)}

    def to_dict(self) -> dict:
        return {"formula": self.formula, "n": self.n, "checked": self.checked,
                "passed": self.passed, "counterexample": self.counterexample}


def verify_uncover(n: int, max_r: int = 2) -> list[CheckResult]:
    partial = CheckResult("count_trees_partial_sequence", n)
    gf = CheckResult("uncover_gf_coefficients", n)
    positions = list(range(2, n))
    for r in range(1, max_r + 1):
        for js in itertools.combinations(positions, r):
            table = oracle_uncover_distribution(n, js).counts
            coeffs = exact.uncover_gf_coefficients(n, js)
            for a in exact.admissible_values(n, js):
                params = {"js": list(js), "as": list(a)}
                partial.compare(params, table.get(a, 0), exact.count_trees_partial_sequence(n, js, a))
                gf.compare(params, table.get(a, 0), coeffs.get(a, 0))
    full = CheckResult("count_trees_full_sequence", n)
    paths = oracle_full_sequences(n).counts
    for seq in exact.full_sequences(n):
        full.compare({"a": list(seq)}, paths.get(seq, 0), exact.count_trees_full_sequence(seq))
    return [partial, gf, full]


def verify_clusters(n: int, max_sets: int = 2) -> list[CheckResult]:
    pmf = CheckResult("root_cluster_pmf", n)
    rooted = CheckResult("count_rooted_trees_root_cluster", n)
    mean = CheckResult("root_cluster_expectation", n)
    vertex = CheckResult("uncovered_vertex_cluster_pmf", n)
    comps = CheckResult("expected_components", n)
    sets = CheckResult("count_trees_with_clusters", n)
    cen = census(n, with_sets=max_sets > 0)
    for k in range(n + 1):
        report = oracle_root_cluster(n, k)
        oracle_mean = Fraction(0)
        for m in range(k + 1):
            p_oracle = report.probability(m)
            oracle_mean += m * p_oracle
            params = {"k": k, "m": m}
            pmf.compare(params, p_oracle, exact.root_cluster_pmf(n, k, m))
            rooted.compare(params, report.counts.get(m, 0) * exact.binom(n, k),
                           exact.count_rooted_trees_root_cluster(n, k, m))
            if m >= 1:
                vertex.compare(params, p_oracle / Fraction(k, n),
                               exact.uncovered_vertex_cluster_pmf(n, k, m))
        mean.compare({"k": k}, oracle_mean, exact.root_cluster_expectation(n, k))
        for r in range(1, k + 1):
            comps.compare({"k": k, "r": r}, oracle_expected_components(n, k, r),
                          exact.expected_components(n, k, r))
        if max_sets <= 0:
            continue
        labels = range(1, k + 1)
        for r1 in range(1, k + 1):
            for s1 in itertools.combinations(labels, r1):
                sets.compare({"k": k, "sets": [list(s1)]}, cen.components[k][frozenset(s1)],
                             exact.count_trees_with_clusters(n, k, [r1]))
                if max_sets < 2:
                    continue
                rest = [v for v in labels if v not in s1 and v > min(s1)]
                for r2 in range(1, k - r1 + 1):
                    for s2 in itertools.combinations(rest, r2):
                        key = frozenset((frozenset(s1), frozenset(s2)))
                        sets.compare({"k": k, "sets": [list(s1), list(s2)]},
                                     cen.component_pairs[k][key],
                                     exact.count_trees_with_clusters(n, k, [r1, r2]))
    return [pmf, rooted, mean, vertex, comps, sets]


def verify_abel(max_n: int) -> list[CheckResult]:
    res = CheckResult("abel_identity_check", max_n)
    for n in range(2, max_n + 1):
        for k in range(1, n):
            res.compare({"n": n, "k": k}, True, exact.abel_identity_check(n, k))
    return [res]


SUITES = ("uncover", "clusters", "abel", "all")


def verify(n: int, suite: str = "all") -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    results = []
    if suite in ("uncover", "all"):
        results += verify_uncover(n)
    if suite in ("clusters", "all"):
        results += verify_clusters(n, max_sets=2 if n <= 7 else 0)
    if suite in ("abel", "all"):
        results += verify_abel(max(n, 2))
    return results
