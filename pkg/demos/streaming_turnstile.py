"""Color a graph from a stream of insertions and deletions.

The stream carries every edge of a planted graph plus 10% extra pairs that
are inserted and later deleted.  Only the sketches of each guess are kept.

Run: python demos/streaming_turnstile.py
"""

from degencolor.generators import generate_planted, insertion_tokens, turnstile_tokens
from degencolor.graph import verify_proper
from degencolor.streaming import StreamSource, stream_color, stream_color_insertion_only

n, kappa, eps = 4096, 16, 0.25
g = generate_planted(n, kappa, seed=3)
u, v, c = turnstile_tokens(g, seed=3)
print(f"{g.m} edges, {len(u)} stream tokens ({(c < 0).sum()} deletions)")

res = stream_color(StreamSource.from_arrays(u, v, c), n, eps, seed=3)
for run in res.runs:
    print(f"  guess k={run.k:5d}: ell={run.params.ell:3d} status={run.status:13s} bits={run.bits}")
print(f"chosen k={res.chosen_k}, palette {res.coloring.palette_size}, "
      f"proper={verify_proper(g, res.coloring)}")
led = res.ledger
print(f"space: {led.total_bits / 8e6:.1f} MB summed over guesses, "
      f"{led.resident_bits / 8e6:.1f} MB resident")

ins = stream_color_insertion_only(StreamSource.from_arrays(*insertion_tokens(g, 3)), n, eps, 3)
print(f"insertion-only path: chosen k={ins.chosen_k}, palette {ins.coloring.palette_size}")
