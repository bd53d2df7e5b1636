"""How localised are coherent, symmetric and random spin states?

Run with ``python demos/localisation_tour.py``.
"""
import math

import numpy as np

from wehrl import coherent_closed_forms, coherent_state, io, measure_report, state_from_roots
from wehrl.ensemble import expected_renyi, haar_random_state

qs = [0.5, 1.0, 2.0]

# A coherent state is the most concentrated distribution on the sphere: its
# entropies are the smallest possible and have closed forms.
for tj in (1, 4, 12):
    st = coherent_state(0.3 - 0.7j, tj)
    rep = measure_report(st, qs)
    ref = coherent_closed_forms(tj, 1.0).S[1.0]
    print(f"2j={tj:2d} coherent  S(1)={rep.S[1.0]:.12f}  closed form {ref:.12f}")

# States whose zeros sit on the vertices of a Platonic solid spread their
# Husimi function as evenly as the geometry allows.
print()
for tj, name in ((4, "tetrahedron"), (6, "octahedron"), (8, "cube"), (12, "icosahedron")):
    rep = measure_report(state_from_roots(io.platonic_roots(tj)), qs)
    coh = coherent_closed_forms(tj, 1.0).S[1.0]
    print(f"2j={tj:2d} {name:12s} S(1)={rep.S[1.0]:.4f}  coherent {coh:.4f}  log N {math.log(tj + 1):.4f}")

# Typical (Haar-random) states sit in between; the sample mean of S(1)
# approaches the ensemble average.
print()
rng = np.random.default_rng(2024)
for tj in (2, 6):
    vals = [measure_report(haar_random_state(tj, rng), [1.0]).S[1.0] for _ in range(200)]
    print(f"2j={tj} random  mean S(1)={np.mean(vals):.4f} +- {np.std(vals) / math.sqrt(200):.4f}"
          f"  ensemble {expected_renyi(tj + 1, 1.0):.4f}")
