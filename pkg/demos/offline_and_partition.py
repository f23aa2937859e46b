"""Degeneracy coloring offline, then the same graph split into random blocks.

Run: python demos/offline_and_partition.py
"""

from degencolor.generators import generate_planted
from degencolor.graph import degeneracy_ordering, greedy_color, verify_proper
from degencolor.ldp import LdpParams, color_via_ldp, partition_from_seed, verify_ldp

n, kappa = 4096, 24
g = generate_planted(n, kappa, seed=1)
cert = degeneracy_ordering(g)
col = greedy_color(g, cert)
print(f"planted graph: n={g.n} m={g.m} degeneracy={cert.kappa}")
print(f"greedy in reverse degeneracy order: {col.palette_size} colors, proper={verify_proper(g, col)}")

# Force many blocks by pretending space is scarce. Each block is colored
# on its own with a disjoint palette, so the total is the sum of the
# per-block palettes.
for ell in (1, 4, 16, 64):
    part = partition_from_seed(n, ell, seed=7)
    rep = verify_ldp(g, part, LdpParams(n, kappa, 10 ** 9, ell), kappa=kappa)
    c = color_via_ldp(g, part)
    print(f"ell={ell:3d}: max block degeneracy {max(rep.per_block_kappa):3d}, "
          f"cross-block edges dropped {g.m - rep.monochromatic_edges:6d}, "
          f"palette {c.palette_size:4d}, proper={verify_proper(g, c)}")
