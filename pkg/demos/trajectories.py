"""Entropies along unitary trajectories.

A rotation generator only moves the Husimi function around, so every
entropy stays put.  A generic Hamiltonian reshapes it; the analytic rate
is compared with a centred finite difference.  Run with
``python demos/trajectories.py``.
"""
from wehrl.dynamics import SpinHamiltonian, time_series
from wehrl.ensemble import haar_random_state

tj = 3
psi = haar_random_state(tj, 5)

for label, h in (("rotation", SpinHamiltonian.rotation(tj, 0.4, 0.3 - 0.1j)),
                 ("random", SpinHamiltonian.random(tj, 8))):
    ts = time_series(psi, h, t_max=1.0, n_steps=4, qs=[1.0])
    print(label)
    for row in ts.rows():
        print(f"  t={row['t']:.2f}  S(1)={row['S']:.10f}  dS/dt={row['dS_dt_analytic']:+.3e}"
              f"  (finite difference {row['dS_dt_fd']:+.3e})")
