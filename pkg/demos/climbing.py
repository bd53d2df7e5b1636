"""Raising W(2) of a random state to the coherent value.

Each step turns the sphere and strips the phases of the Bargmann
coefficients; W(2) never decreases and ends at the coherent-state value.
Run with ``python demos/climbing.py``.
"""
from wehrl.ensemble import haar_random_state
from wehrl.entropy import coherent_moment
from wehrl.maps import theorem2_driver

tj = 6
start = haar_random_state(tj, 11)
trace = theorem2_driver(start, q=2)

for step, w in enumerate(trace.values("W")):
    print(f"step {step:2d}  W(2) = {w:.12f}")
print(f"target {coherent_moment(tj, 2):.12f}  converged={trace.converged}  monotone={trace.monotone}")
