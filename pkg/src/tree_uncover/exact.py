"""Closed-form counts, moments and probabilities in exact rational arithmetic.

Counts are returned as Python ``int``; probabilities and moments as
:class:`fractions.Fraction`. Several formulas pass through negative powers
(e.g. ``(n - m)**(k - m - 1)`` at ``m = k``), which is why everything is
assembled in rationals and integrality is asserted at the end.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import integrate

ExactValue = Fraction


class QuadratureError(ArithmeticError):
    pass


class NonIntegralCountError(ArithmeticError):
    """A counting formula produced a non-integer; always a bug, never bad input."""


def binom(x: int, y: int) -> int:
    """Binomial coefficient with ``C(x, y) = 0`` for ``y < 0`` or ``y > x >= 0``.

    Negative ``x`` uses the falling-factorial extension, so ``C(-1, 0) = 1``.
    """
    if y < 0:
        return 0
    if x >= 0:
        return math.comb(x, y) if y <= x else 0
    num = 1
    for i in range(y):
        num *= x - i
    return num // math.factorial(y)


def power(base: int, exp: int) -> Fraction:
    """Exact ``base**exp`` for any integer exponent (``0**0 = 1``)."""
    if exp >= 0:
        return Fraction(base**exp)
    if base == 0:
        raise ZeroDivisionError(f"0 ** {exp}")
    return Fraction(1, base ** (-exp))


def falling(x: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= x - i
    return out


def as_count(value: Fraction) -> int:
    if value.denominator != 1:
        raise NonIntegralCountError(f"count evaluated to non-integer {value}")
    return value.numerator


def _check_range(n: int, k: int, lo: int = 0) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not lo <= k <= n:
        raise ValueError(f"need {lo} <= k <= n, got k={k}, n={n}")


# -- edge counts ---------------------------------------------------------------


def expected_edges(n: int, j: int) -> Fraction:
    _check_range(n, j, 1)
    return Fraction(j * (j - 1), n)


def variance_edges(n: int, k: int) -> Fraction:
    _check_range(n, k, 1)
    return Fraction(k * (k - 1) * (n - k), n * n)


def _validate_constraint(n: int, js, as_) -> tuple[list[int], list[int]]:
    js, as_ = [int(j) for j in js], [int(a) for a in as_]
    if not js or len(js) != len(as_):
        raise ValueError("js and as must be non-empty and of equal length")
    prev_j, prev_a = 1, 0
    for j, a in zip(js, as_):
        if not prev_j < j < n:
            raise ValueError(f"js must satisfy 1 < j_1 < ... < j_r < n, got {js} for n={n}")
        if not prev_a <= a <= j - 1:
            raise ValueError(f"as must be non-decreasing with 0 <= a_i <= j_i - 1, got {as_}")
        prev_j, prev_a = j, a
    return js, as_


def count_trees_partial_sequence(n: int, js, as_) -> int:
    """Labeled trees on ``n`` vertices with ``k_{j_i} = a_i`` for every ``i``."""
    js, as_ = _validate_constraint(n, js, as_)
    jr, ar = js[-1], as_[-1]
    total = Fraction((n - jr) ** (jr - ar - 1) * n ** (n - jr - 1))
    prev_j, prev_a = 1, 0
    for j, a in zip(js, as_):
        da, dj = a - prev_a, j - prev_j
        factor = sum(
            binom(prev_j - prev_a - 1, h) * binom(dj, da - h) * dj**h * j ** (da - h)
            for h in range(da + 1)
        )
        total *= factor
        prev_j, prev_a = j, a
    return as_count(total)


def admissible_values(n: int, js):
    """All a-vectors allowed for positions ``js`` (non-decreasing, ``a_i <= j_i - 1``)."""

    def extend(i, lo):
        if i == len(js):
            yield ()
            return
        for a in range(lo, js[i]):
            for rest in extend(i + 1, a):
                yield (a,) + rest

    yield from extend(0, 0)


def uncover_gf_coefficients(n: int, js) -> dict[tuple[int, ...], int]:
    """Expand the multivariate generating function of edge increments.

    Returns ``{(a_1, ..., a_r): count}`` read off the coefficients of
    ``z_1^{a_1} z_2^{a_2-a_1} ...``. Independent of the product formula in
    :func:`count_trees_partial_sequence`.
    """
    js = [int(j) for j in js]
    _validate_constraint(n, js, [0] * len(js))
    r = len(js)
    jr = js[-1]
    poly = {(0,) * r: n ** (n - jr - 1) if n - jr - 1 >= 0 else None}
    if poly[(0,) * r] is None:
        raise ValueError("js must end below n")
    prev = 1
    for i in range(r):
        # linear factor: constant n - jr, j_i z_i, (j_h - j_{h-1}) z_h for h > i
        terms = [((0,) * r, n - jr)]
        unit = [0] * r
        unit[i] = 1
        terms.append((tuple(unit), js[i]))
        for h in range(i + 1, r):
            unit = [0] * r
            unit[h] = 1
            terms.append((tuple(unit), js[h] - js[h - 1]))
        for _ in range(js[i] - prev):
            nxt: dict[tuple[int, ...], int] = {}
            for mono, coef in poly.items():
                for step, c in terms:
                    key = tuple(a + b for a, b in zip(mono, step))
                    nxt[key] = nxt.get(key, 0) + coef * c
            poly = nxt
        prev = js[i]
    out = {}
    for mono, coef in poly.items():
        out[tuple(np.cumsum(mono).tolist())] = coef
    return out


def count_trees_full_sequence(a) -> int:
    """Trees whose complete uncover sequence is ``a = (0, a_2, ..., a_{n-1}, n-1)``."""
    a = [int(x) for x in a]
    n = len(a)
    if n < 1 or a[0] != 0 or a[-1] != n - 1:
        raise ValueError(f"sequence must start with 0 and end with n-1, got {a}")
    for i in range(1, n + 1):
        if not 0 <= a[i - 1] <= i - 1:
            raise ValueError(f"a_{i}={a[i - 1]} outside 0..{i - 1}")
        if i > 1 and a[i - 1] < a[i - 2]:
            raise ValueError("sequence must be non-decreasing")
    count = 1
    for i in range(1, n - 1):
        ai, nxt = a[i - 1], a[i]
        count *= binom(i - ai - 1, nxt - ai - 1) * (i + 1) + binom(i - ai - 1, nxt - ai)
    return count


def full_sequences(n: int):
    """Every admissible complete uncover sequence of length ``n``."""
    if n == 1:
        yield (0,)
        return
    for middle in admissible_values(n, list(range(2, n))):
        yield (0,) + middle + (n - 1,)


# -- clusters --------------------------------------------------------------------


def count_trees_with_clusters(n: int, k: int, rs) -> int:
    """Trees in which fixed disjoint label sets of sizes ``rs`` inside ``[k]`` are components.

    At ``k = n`` the closed form degenerates (``0**-1``); the count there is
    ``n**(n-2)`` for a single set covering everything and 0 otherwise.
    """
    rs = [int(r) for r in rs]
    _check_range(n, k)
    if not rs or any(r < 1 for r in rs):
        raise ValueError(f"cluster sizes must be positive, got {rs}")
    r = sum(rs)
    if r > k:
        raise ValueError(f"sizes {rs} sum to more than k={k}")
    if k == n:
        return n ** (n - 2) if len(rs) == 1 and r == n else 0
    value = power(n, n - k - 1) * power(n - r, k - r - 1) * (n - k) ** len(rs)
    for ri in rs:
        value *= ri ** (ri - 1)
    return as_count(value)


def root_cluster_pmf(n: int, k: int, m: int) -> Fraction:
    """P(root cluster has size ``m``) after ``k`` uncover steps of a random rooted tree."""
    _check_range(n, k)
    if not 0 <= m <= k:
        raise ValueError(f"need 0 <= m <= k, got m={m}, k={k}")
    if m == 0:
        return Fraction(n - k, n)
    if k == n:
        return Fraction(1 if m == n else 0)
    return Fraction(m**m * (n - k) * binom(k, m)) * power(n - m, k - m - 1) / n**k


def count_rooted_trees_root_cluster(n: int, k: int, m: int) -> int:
    """Rooted trees with a marked set of ``k`` uncovered vertices and root cluster of size ``m``."""
    _check_range(n, k)
    if not 0 <= m <= k:
        raise ValueError(f"need 0 <= m <= k, got m={m}, k={k}")
    if m == 0:
        return binom(n - 1, k) * n ** (n - 1)
    value = (
        binom(n, m) * binom(n - m - 1, k - m) * power(n, n - k - 1) * m**m * (n - m) ** (k - m)
    )
    return as_count(value)


def root_cluster_expectation(n: int, k: int) -> Fraction:
    """Sum of ``j k^(j falling) / n^j`` over ``j = 1..k``, over the common denominator ``n^k``."""
    _check_range(n, k)
    acc, fall = 0, 1
    for j in range(1, k + 1):
        fall *= k - j + 1
        acc = acc * n + j * fall
    return Fraction(acc, n**k)


def root_cluster_expectation_integral(n: int, k: int, rtol: float = 1e-11) -> float:
    """Mean root cluster size as ``int_0^inf (x-1) e^{-x} (1+x/n)^k dx``.

    The weight ``e^{-x}(1+x/n)^k`` is decreasing on ``[0, inf)``. The range is
    cut once ``x`` times the weight falls below 1e-18; past the cut the weight
    decays at least like ``exp(-lam (x - cut))`` with ``lam = 1 - k/(n+cut)``,
    which bounds the discarded tail.
    """
    _check_range(n, k)

    def log_weight(x):
        return -x + k * np.log1p(x / n)

    def f(x):
        return (x - 1.0) * np.exp(log_weight(x))

    cut = 32.0
    while math.log(cut) + log_weight(cut) > math.log(1e-18):
        cut *= 2.0
    pieces = np.concatenate(([0.0], np.geomspace(1.0, cut, 32)))
    total = err = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        val, e = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        total += val
        err += e
    lam = 1.0 - k / (n + cut)
    err += math.exp(log_weight(cut)) * (cut / lam + 1.0 / lam**2)
    if err > max(rtol * abs(total), 1e-13):
        raise QuadratureError(f"integral for n={n}, k={k} reached only {err:.3g}")
    return total


def uncovered_vertex_cluster_pmf(n: int, k: int, m: int) -> Fraction:
    """Law of the cluster size of the ``k``-th uncovered vertex."""
    if m < 1:
        raise ValueError("the cluster of an uncovered vertex has size >= 1")
    if k < 1:
        raise ValueError("need k >= 1")
    return Fraction(n, k) * root_cluster_pmf(n, k, m)


def expected_components(n: int, k: int, r: int) -> Fraction:
    """Expected number of components of size ``r`` among the first ``k`` vertices."""
    _check_range(n, k)
    if r == 0:
        raise ValueError("r = 0 is meaningless here (the count is trivially 0)")
    if not 1 <= r <= k:
        raise ValueError(f"need 1 <= r <= k, got r={r}, k={k}")
    if k == n:
        # the formula is 0/0 at r = k = n; the whole tree is one component
        return Fraction(1 if r == n else 0)
    return (
        binom(k, r)
        * Fraction(r, n) ** (r - 1)
        * Fraction(n - k, n)
        * Fraction(n - r, n) ** (k - r - 1)
    )


def abel_identity_check(n: int, k: int) -> bool:
    """Exact check that vertices in ``[k]`` summed over component sizes give ``k n^{n-2}``."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    lhs = sum(
        binom(k, r) * r**r * power(n, n - k - 1) * power(n - r, k - r - 1) * (n - k)
        for r in range(1, k + 1)
    )
    return lhs == k * n ** (n - 2)


def exact_str(value) -> str:
    """``p/q`` for fractions, plain digits for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


__all__ = [
    "ExactValue",
    "NonIntegralCountError",
    "QuadratureError",
    "abel_identity_check",
    "admissible_values",
    "binom",
    "count_rooted_trees_root_cluster",
    "count_trees_full_sequence",
    "count_trees_partial_sequence",
    "count_trees_with_clusters",
    "exact_str",
    "expected_components",
    "expected_edges",
    "full_sequences",
    "root_cluster_expectation",
    "root_cluster_expectation_integral",
    "root_cluster_pmf",
    "uncover_gf_coefficients",
    "uncovered_vertex_cluster_pmf",
    "variance_edges",
]
