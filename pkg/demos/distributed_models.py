"""Query, MPC, congested clique and LOCAL runs on one planted graph.

Run: python demos/distributed_models.py
"""

from degencolor.distsim import LocalConfig, local_color, mpc_color
from degencolor.generators import generate_planted
from degencolor.graph import verify_proper
from degencolor.query import oracle_from_graph, query_color

n, kappa = 4096, 32
g = generate_planted(n, kappa, seed=5)
print(f"n={n} m={g.m} degeneracy={kappa}")

oracle = oracle_from_graph(g, seed=5)
col, rep = query_color(oracle, n, seed=5)
branch = "read everything" if rep.stage1_completed else "sample pairs inside blocks"
print(f"query: {rep.total} queries ({branch}), palette {col.palette_size}")

for variant in ("mpc", "congested-clique"):
    res = mpc_color(g, 5, variant)
    v = res.verdict
    print(f"{variant}: {v.rounds} rounds, max per-machine bits {max(v.max_sent, v.max_received)} "
          f"(cap {v.cap_bits:.0f}), conforming={v.conforming}, palette {res.coloring.palette_size}")

res = local_color(g, LocalConfig(alpha_estimate=kappa, t=n ** 0.25), 5)
print(f"LOCAL: {res.rounds} rounds, ell={res.ell}, palette {res.coloring.palette_size}, "
      f"messages only along edges={res.network.locality_holds()}, "
      f"proper={verify_proper(g, res.coloring)}")
