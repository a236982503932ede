"""Limit laws of the root cluster in the different regimes.

With n - k = d vertices still hidden, the root cluster R behaves very
differently depending on how d compares with sqrt(n).

    python3 notebooks/03_limit_laws.py
"""
import math

from tree_uncover import asymptotics, exact

# k = alpha n: R converges in law without scaling
law = asymptotics.LimitLaw("central", alpha=0.5)
print("central alpha=0.5:  m  limit   exact at n=2000")
for m in range(5):
    print(f"{m:22d}  {law.pmf(m):.4f}  {float(exact.root_cluster_pmf(2000, 1000, m)):.4f}")

# d = c sqrt(n): R/n has a density with mean kappa(c)
for c in (0.5, 1.0, 2.0):
    n = 10_000
    d = round(c * math.sqrt(n))
    finite = float(exact.root_cluster_expectation(n, n - d)) / n
    print(f"critical c={c}: kappa={asymptotics.kappa(c):.4f}, E R/n at n={n} is {finite:.4f}")

# fixed d: the hidden part n - d - R is Borel-like with a j^(-3/2) tail
law = asymptotics.LimitLaw("supercritical-fixed", d=2)
print("\nsupercritical d=2, P(n-d-R=j):", " ".join(f"{law.pmf(j):.4f}" for j in range(6)))
print(f"total mass with tail correction: {law.total_mass():.12f}")
