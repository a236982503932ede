"""Uncover one random labeled tree and watch the edge count grow.

Vertices are revealed in the order 1, 2, ..., n. After j steps an edge is
visible when both of its endpoints are, so k_j counts edges with max endpoint
at most j. The forest of visible edges has j - k_j components.

    python3 notebooks/01_uncover_a_tree.py
"""
from tree_uncover import RngStream, cluster_report, interpolated_Z, sample_uniform_tree, uncover_path

n = 40
tree = sample_uniform_tree(n, RngStream(seed=1).generator())
path = uncover_path(tree)

print(f"a uniform tree on {n} vertices, first edges: {list(tree.edges)[:6]} ...")
print("\n  j  k_j  components")
for j in range(1, n + 1, 4):
    print(f"{j:3d} {path.at(j):4d} {j - path.at(j):11d}")

# k_j is close to j^2/n, and Z measures the fluctuation on the sqrt(n) scale
for t in (0.25, 0.5, 0.75):
    print(f"Z({t}) = {interpolated_Z(path, t):+.3f}")

# halfway through, which clusters hang together?
rep = cluster_report(tree, n // 2, root=1)
print(f"\nafter {n // 2} vertices: sizes {sorted(rep.sizes, reverse=True)}")
print(f"cluster of vertex 1 has {rep.root_cluster} vertices; largest has {rep.largest}")
