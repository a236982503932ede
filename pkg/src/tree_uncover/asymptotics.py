"""Limit laws of the uncover process.

Covers the Gaussian limit of the rescaled edge-count process, the limit
distributions of the root cluster in each growth regime of ``k``, the
critical constant ``kappa(c)`` and the limiting tail of the largest
component at criticality.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from tree_uncover.trees import as_generator

SQRT_2PI = math.sqrt(2.0 * math.pi)


class QuadratureWarning(RuntimeWarning):
    pass


# -- Gaussian limit process ------------------------------------------------------


def limit_covariance(s: float, t: float) -> float:
    """Cov(Z(s), Z(t)) = s^2 (1 - t) for ``0 <= s <= t <= 1``."""
    if not 0.0 <= s <= t <= 1.0:
        raise ValueError(f"need 0 <= s <= t <= 1, got s={s}, t={t}")
    return s * s * (1.0 - t)


def limit_covariance_matrix(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    lo = np.minimum.outer(grid, grid)
    hi = np.maximum.outer(grid, grid)
    return lo**2 * (1.0 - hi)


@dataclass(frozen=True)
class LimitProcessPath:
    grid: np.ndarray
    values: np.ndarray


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1:
        raise ValueError("grid must be one-dimensional")
    if np.any((grid < 0) | (grid > 1)) or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing within [0, 1]")
    return grid


def sample_limit_process(grid, rng, size: int | None = None, jitter: float = 1e-12):
    """Draw the limit process on ``grid`` from its covariance via Cholesky.

    Grid points at 0 or 1 carry zero variance and are pinned to 0. If the
    interior covariance is numerically not positive definite, ``jitter`` is
    added to the diagonal and a warning is issued.
    """
    grid = _check_grid(grid)
    gen = as_generator(rng)
    m = 1 if size is None else size
    values = np.zeros((m, grid.size))
    inner = (grid > 0) & (grid < 1)
    if inner.any():
        cov = limit_covariance_matrix(grid[inner])
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            warnings.warn(f"covariance regularised with jitter {jitter:g}", RuntimeWarning)
            chol = np.linalg.cholesky(cov + jitter * np.eye(cov.shape[0]))
        values[:, inner] = gen.standard_normal((m, chol.shape[0])) @ chol.T
    if size is None:
        return LimitProcessPath(grid, values[0])
    return values


def sample_limit_process_wiener(grid, rng, size: int = 1) -> np.ndarray:
    """Same law built as ``(1 - t) W(t^2 / (1 - t))`` from Wiener increments."""
    grid = _check_grid(grid)
    gen = as_generator(rng)
    values = np.zeros((size, grid.size))
    inner = (grid > 0) & (grid < 1)
    times = grid[inner] ** 2 / (1.0 - grid[inner])
    steps = np.diff(np.concatenate(([0.0], times)))
    w = np.cumsum(gen.standard_normal((size, times.size)) * np.sqrt(steps), axis=1)
    values[:, inner] = (1.0 - grid[inner]) * w
    return values


# -- special functions -------------------------------------------------------------

_ERF_SERIES_CUTOFF = 2.0


def erfcx(x: float) -> float:
    """Scaled complementary error function ``exp(x^2) erfc(x)`` for ``x >= 0``.

    Small arguments use the Maclaurin series of erf (alternating terms, summed
    to machine precision); from ``x = 2`` on, the Laplace continued fraction
    ``erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))``
    evaluated by modified Lentz. Both branches are accurate to a few ulp
    times the condition number, below 1e-13 relative on ``[0, inf)``.
    """
    if x < 0:
        raise ValueError("erfcx implemented for x >= 0 only")
    if x < _ERF_SERIES_CUTOFF:
        # erf(x) = 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1))
        term = x
        total = x
        n = 0
        x2 = x * x
        while True:
            n += 1
            term *= -x2 / n
            delta = term / (2 * n + 1)
            total += delta
            if abs(delta) <= 1e-17 * abs(total):
                break
        erf = 2.0 / math.sqrt(math.pi) * total
        return math.exp(x2) * (1.0 - erf)
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    i = 1
    while True:
        a = i / 2.0
        d = x + a * d
        d = tiny if d == 0 else d
        c = x + a / c
        c = tiny if c == 0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        i += 1
    return 1.0 / (math.sqrt(math.pi) * f)


def gaussian_tail_scaled(c: float) -> float:
    """``exp(c^2/2) * int_c^inf exp(-t^2/2) dt`` (the Mills ratio)."""
    return math.sqrt(math.pi / 2.0) * erfcx(c / math.sqrt(2.0))


def kappa(c: float) -> float:
    """Limit of E(R)/n when ``n - k ~ c sqrt(n)``."""
    if c <= 0:
        raise ValueError("kappa needs c > 0")
    return 1.0 - c * gaussian_tail_scaled(c)


def tree_function(x: float) -> float:
    """Cayley tree function: the root ``T`` in ``[0, 1]`` of ``T = x e^T``.

    Newton on ``T e^{-T} = x`` run to a vanishing step (the residual ends
    far below 1e-12), safeguarded by bisection since the derivative vanishes
    at the branch point ``x = 1/e``. Near that point the start comes from
    the branch expansion in ``p = sqrt(2 (1 - e x))``.
    """
    if x < 0 or x > math.exp(-1.0) * (1 + 1e-15):
        raise ValueError(f"tree function needs 0 <= x <= 1/e, got {x}")
    if x == 0:
        return 0.0
    p2 = 2.0 * (1.0 - math.e * x)
    if p2 <= 0:
        return 1.0
    p = math.sqrt(p2)
    if p < 0.3:
        t = 1.0 - p + p2 / 3.0 - 11.0 * p * p2 / 72.0 + 43.0 * p2 * p2 / 540.0
    else:
        t = x * math.exp(x * math.e)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        g = t * math.exp(-t) - x
        if g > 0:
            hi = t
        elif g < 0:
            lo = t
        else:
            return t
        dg = (1.0 - t) * math.exp(-t)
        cand = t - g / dg if dg > 0 else -1.0
        if not lo <= cand <= hi:
            cand = 0.5 * (lo + hi)
        if abs(cand - t) <= 4e-16 * t:
            return cand
        t = cand
    return t


# -- root cluster limit laws -------------------------------------------------------


def central_limit_pmf(alpha: float, m: int) -> float:
    """Limit p.m.f. of the root cluster for ``k ~ alpha n``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if m < 0:
        return 0.0
    if m == 0:
        return 1.0 - alpha
    return math.exp(central_log_pmf(alpha, m))


def borel_type_pmf(d: int, j: int) -> float:
    """Limit p.m.f. of ``n - d - R`` for fixed ``d = n - k``, in log space."""
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    if j < 0:
        return 0.0
    return math.exp(borel_type_log_pmf(d, j))


def _log_stirling_gap(x: float) -> float:
    """``x log x - x - lgamma(x + 1)`` without cancellation for large ``x``."""
    if x < 20.0:
        return (x * math.log(x) if x > 0 else 0.0) - x - math.lgamma(x + 1.0)
    inv = 1.0 / x
    inv2 = inv * inv
    corr = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
    return -0.5 * math.log(2.0 * math.pi * x) - corr


def central_log_pmf(alpha: float, m: float) -> float:
    """Log of :func:`central_limit_pmf`, continued to real ``m > 0``."""
    return _log_stirling_gap(m) + m * (1.0 + math.log(alpha) - alpha) + math.log1p(-alpha)


def borel_type_log_pmf(d: int, j: float) -> float:
    """Log of :func:`borel_type_pmf`, continued to real ``j > 0``."""
    if j == 0:
        return -d
    # (j-1) log(d+j) - lgamma(j+1) - j  =  gap(j) - log j + (j-1) log1p(d/j)
    return -d + math.log(d) + _log_stirling_gap(j) - math.log(j) + (j - 1) * math.log1p(d / j)


def summed_mass(log_pmf, first_terms, cutoff: int) -> float:
    """Total mass of a p.m.f. from its first terms plus an Euler-Maclaurin tail.

    ``log_pmf`` must continue smoothly to reals near and beyond ``cutoff``.
    The tail over ``j > cutoff`` is ``int f - f/2 - f'/12 + f'''/720`` at the
    cutoff; the integral uses ``x = cutoff / u^2`` so power-law tails such as
    ``j^{-3/2}`` become a bounded integrand on ``(0, 1]``.
    """
    f = lambda x: math.exp(log_pmf(x))
    J = float(cutoff)

    def g(u):
        if u <= 0.0:
            return 0.0
        return f(J / (u * u)) * 2.0 * J / u**3

    integral, _ = integrate.quad(g, 0.0, 1.0, epsabs=1e-15, epsrel=1e-12, limit=400)
    h = max(1.0, J * 1e-3)
    d1 = (f(J + h) - f(J - h)) / (2 * h)
    d3 = (f(J + 2 * h) - 2 * f(J + h) + 2 * f(J - h) - f(J - 2 * h)) / (2 * h**3)
    tail = integral - f(J) / 2.0 - d1 / 12.0 + d3 / 720.0
    return math.fsum(first_terms) + tail


def gamma_half_density(x: float) -> float:
    if x <= 0:
        return 0.0
    return math.exp(-x / 2.0) / math.sqrt(2.0 * math.pi * x)


def critical_density(c: float, x: float) -> float:
    if not 0.0 < x < 1.0:
        return 0.0
    return c / SQRT_2PI * math.exp(-c * c * x / (2.0 * (1.0 - x)) - 0.5 * math.log(x) - 1.5 * math.log1p(-x))


def levy_density(x: float) -> float:
    if x <= 0:
        return 0.0
    return math.exp(-1.0 / (2.0 * x)) / (SQRT_2PI * x**1.5)


class Regime(enum.Enum):
    CENTRAL = "central"
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"
    SUPERCRITICAL_FIXED = "supercritical-fixed"


@dataclass(frozen=True)
class LimitLaw:
    """A root-cluster limit law together with the scaling it applies to.

    ``central`` and ``supercritical-fixed`` are discrete (use :meth:`pmf`);
    the others are continuous (use :meth:`density`). Scalings:

    * central: ``R``
    * subcritical: ``(d/n)^2 R``
    * critical: ``R / n``
    * supercritical: ``(n - R) / d^2``
    * supercritical-fixed: ``n - d - R``
    """

    regime: Regime
    alpha: float | None = None
    c: float | None = None
    d: int | None = None

    def __post_init__(self):
        regime = Regime(self.regime)
        object.__setattr__(self, "regime", regime)
        if regime is Regime.CENTRAL and not (self.alpha is not None and 0 < self.alpha < 1):
            raise ValueError("central law needs alpha in (0, 1)")
        if regime is Regime.CRITICAL and not (self.c is not None and self.c > 0):
            raise ValueError("critical law needs c > 0")
        if regime is Regime.SUPERCRITICAL_FIXED and not (self.d is not None and int(self.d) >= 1):
            raise ValueError("fixed-difference law needs integer d >= 1")

    @property
    def discrete(self) -> bool:
        return self.regime in (Regime.CENTRAL, Regime.SUPERCRITICAL_FIXED)

    def pmf(self, m: int) -> float:
        if self.regime is Regime.CENTRAL:
            return central_limit_pmf(self.alpha, m)
        if self.regime is Regime.SUPERCRITICAL_FIXED:
            return borel_type_pmf(int(self.d), m)
        raise TypeError(f"{self.regime.value} law is continuous")

    def density(self, x: float) -> float:
        if self.regime is Regime.SUBCRITICAL:
            return gamma_half_density(x)
        if self.regime is Regime.CRITICAL:
            return critical_density(self.c, x)
        if self.regime is Regime.SUPERCRITICAL:
            return levy_density(x)
        raise TypeError(f"{self.regime.value} law is discrete")

    def total_mass(self, cutoff: int = 500) -> float:
        """Integral of the density, or the p.m.f. summed to ``cutoff`` plus its tail."""
        if not self.discrete:
            return law_moment(self, 0)
        if self.regime is Regime.CENTRAL:
            log_pmf = lambda m: central_log_pmf(self.alpha, m)
        else:
            log_pmf = lambda j: borel_type_log_pmf(int(self.d), j)
        return summed_mass(log_pmf, [self.pmf(m) for m in range(cutoff + 1)], cutoff)


def limit_density(law: LimitLaw, x: float) -> float:
    return law.density(x)


def law_moment(law: LimitLaw, order: int) -> float:
    """``int x^order f(x) dx`` for a continuous law, with singularities substituted away."""
    if law.regime is Regime.CRITICAL:
        return integrate_unit_interval(lambda x: x**order * law.density(x))
    if law.regime is Regime.SUBCRITICAL:
        # x = u^2 removes the x^{-1/2} singularity
        g = lambda u: 2.0 * u * (u * u) ** order * gamma_half_density(u * u)
        return integrate_half_line(g, scale=2.0)
    if law.regime is Regime.SUPERCRITICAL:
        if order != 0:
            return math.inf
        # x = 1/u^2 turns the heavy tail into a Gaussian-type integrand on (0, inf)
        g = lambda u: 2.0 * u**-3 * levy_density(u**-2) if u > 0 else 0.0
        return integrate_half_line(g, scale=2.0)
    raise TypeError("moments of discrete laws are plain sums")


def integrate_unit_interval(f, tol: float = 1e-12) -> float:
    """``int_0^1 f`` with ``x = u^2`` near 0 and ``1 - x = v^2`` near 1."""
    left = integrate.quad(lambda u: 2.0 * u * f(u * u), 0.0, math.sqrt(0.5),
                          epsabs=tol, epsrel=tol, limit=200)
    right = integrate.quad(lambda v: 2.0 * v * f(1.0 - v * v), 0.0, math.sqrt(0.5),
                           epsabs=tol, epsrel=tol, limit=200)
    _report(left[1] + right[1], tol * 100, "unit interval")
    return left[0] + right[0]


def integrate_half_line(f, scale: float = 1.0, tol: float = 1e-12) -> float:
    """``int_0^inf f``; truncated where ``f`` drops below 1e-16, with the tail bounded.

    ``f`` must decay at least exponentially beyond ``scale``.
    """
    cut = scale
    while abs(f(cut)) > 1e-16 or abs(f(2 * cut)) > 1e-16:
        cut *= 2.0
    pieces = np.concatenate(([0.0], np.geomspace(scale / 64, cut, 16)))
    total = err = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        val, e = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=200)
        total += val
        err += e
    # exponential decay: the tail is at most about f(cut) times the decay length
    ratio = abs(f(2 * cut)) / max(abs(f(cut)), 1e-300)
    rate = -math.log(ratio) / cut if 0 < ratio < 1 else 1.0 / cut
    err += abs(f(cut)) / rate
    _report(err, tol * 100, "half line")
    return total


def _report(err: float, limit: float, where: str) -> None:
    if err > limit:
        warnings.warn(f"quadrature on {where} reached only {err:.2g}", QuadratureWarning)


def critical_mean(c: float) -> float:
    return law_moment(LimitLaw(Regime.CRITICAL, c=c), 1)


# -- largest component at criticality -----------------------------------------


def _tail_weight(c: float, tau: np.ndarray | float):
    one_minus = 1.0 - tau
    return np.exp(-c * c * tau / (2.0 * one_minus)) * one_minus**-1.5


def _tail_term_1(c: float, alpha: float) -> float:
    # 1 - t = v^2 tames the endpoint; exp(-c^2/(2 v^2)) kills it anyway
    def g(v):
        t = 1.0 - v * v
        if v == 0.0:
            return 0.0
        return 2.0 * v * t**-1.5 * _tail_weight(c, t)

    val, err = integrate.quad(g, 0.0, math.sqrt(1.0 - alpha), epsabs=1e-9, epsrel=1e-10, limit=400)
    _report(err, 1e-7, "j=1 term")
    return val


def _tail_term_2(c: float, alpha: float) -> float:
    # alpha <= t1 < t2, t1 + t2 < 1: t2 innermost over (t1, 1 - t1)
    def inner(t1):
        upper = 1.0 - t1
        if upper <= t1:
            return 0.0

        def g(t2):
            tau = t1 + t2
            if tau >= 1.0:
                return 0.0
            return t2**-1.5 * _tail_weight(c, tau)

        val, _ = integrate.quad(g, t1, upper, epsabs=1e-11, epsrel=1e-10, limit=400)
        return t1**-1.5 * val

    val, err = integrate.quad(inner, alpha, 0.5, epsabs=1e-9, epsrel=1e-9, limit=400)
    _report(err, 1e-7, "j=2 term")
    return val


def _tail_term_qmc(c: float, alpha: float, j: int, points: int, seed: int) -> float:
    """j-fold term by scrambled Sobol points on the ordered simplex.

    Ordered variables are written ``t_i = alpha + s_1 + ... + s_i`` with gaps
    ``s_i >= 0``; then ``tau = j alpha + sum (j - i + 1) s_i``. With
    ``w_i = (j - i + 1) s_i`` the domain is the standard simplex
    ``w >= 0, sum w <= L`` (``L = 1 - j alpha``) and ``ds = dw / j!``.
    """
    span = 1.0 - j * alpha
    # j + 1 normalized exponentials, last one dropped: uniform on the simplex
    sampler = qmc.Sobol(d=j + 1, scramble=True, seed=seed)
    u = sampler.random_base2(int(math.ceil(math.log2(points))))
    e = -np.log(np.clip(u, 1e-300, None))
    w = span * e[:, :j] / e.sum(axis=1, keepdims=True)
    s = w / np.arange(j, 0, -1, dtype=float)
    t = alpha + np.cumsum(s, axis=1)
    tau = t.sum(axis=1)
    vals = np.zeros(len(u))
    ok = tau < 1.0
    vals[ok] = np.prod(t[ok] ** -1.5, axis=1) * _tail_weight(c, tau[ok])
    volume = span**j / math.factorial(j)
    return volume * vals.mean() / math.factorial(j)


def largest_component_tail_limit(c: float, alpha: float, qmc_points: int = 2**20, seed: int = 0) -> float:
    """Limit of P(largest component >= alpha n) when ``n - k ~ c sqrt(n)``.

    Inclusion-exclusion over ordered component sizes; the ``j``-th term is
    empty once ``j alpha >= 1``. Terms 1 and 2 use nested adaptive quadrature,
    higher terms scrambled quasi-Monte Carlo.
    """
    if c <= 0:
        raise ValueError("need c > 0")
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    total = 0.0
    j = 1
    while j * alpha < 1.0:
        if j == 1:
            term = _tail_term_1(c, alpha)
        elif j == 2:
            term = _tail_term_2(c, alpha)
        else:
            term = _tail_term_qmc(c, alpha, j, qmc_points, seed + j)
        total += (-1) ** (j - 1) * c**j / (2.0 * math.pi) ** (j / 2.0) * term
        j += 1
    return float(total)
