"""Hard instances and their certificates, then random list coloring on J_{n,t}.

Run: python demos/hard_instances.py
"""

from degencolor.gadgets import (BitMatrix, join_graph, known_kappa_instance, query_gadget,
                                rlc_bound, rlc_experiment)
from degencolor.graph import exact_degeneracy, list_coloring_solve

x = BitMatrix.random(4, seed=2)
y, z = 2, 3
g, cert = known_kappa_instance(4, 1, x, y, z)
print(f"known-degeneracy instance: n={g.n}, bit x[{y},{z}]={int(x[y, z])}, "
      f"degeneracy {exact_degeneracy(g)} (claimed {cert.expected_kappa})")
col = list_coloring_solve(g, [range(cert.expected_kappa + 1)] * g.n)
keys = col.labels()
S = cert.fields["S"]
pairs = [(a, b) for i, a in enumerate(S) for b in S[i + 1:] if keys[a] == keys[b]]
print(f"  a {cert.expected_kappa + 1}-coloring repeats a color inside S only at {pairs}, "
      f"designated pair {[p[0] for p in cert.fields['repeat_pair']]}")

for variant in ("H", (1, 3)):
    q, c = query_gadget(5, variant)
    print(f"query gadget {variant}: checks {c.check(q)}")

for n, t, r in [(15, 4, 2), (20, 6, 2)]:
    ell = t + -(-t // r)
    res = rlc_experiment(join_graph(n, t), ell, r, trials=300, seed=1)
    print(f"J_{n},{t} with palette {ell}, {r} random colors each: "
          f"success {res.success_rate:.3f} (bound {float(rlc_bound(n, t, r)):.3f})")
