"""Randomized Kaczmarz on noisy systems: exponential convergence down to
the predicted noise floor sqrt(R) * gamma.

Run:  python3 demos/kaczmarz_noise_floor.py
"""

import numpy as np

import sparsekit as sk
from sparsekit import bench

m, n = 100, 50

A = sk.gen_matrix(sk.EnsembleSpec("gaussian", m, n, seed=31, normalize=False))
x = sk.CounterRng(32).normal(n)
e = sk.gen_noise(sk.NoiseSpec(m, 0.5, seed=33))
b = A @ x + e

R, gamma = sk.rk_theory(A, residual=e)
print(f"R = {R:.1f}, gamma = {gamma:.4f}, "
      f"predicted floor sqrt(R)*gamma = {np.sqrt(R) * gamma:.4f}\n")

run = sk.rk_solve(A, b, np.zeros(n), 3000, seed=34, log_stride=300, x_ref=x)
print("iteration   error to true solution")
for k, err in run.iterates_logged:
    print(f"{k:9d}   {err:.4f}")

# the harness repeats this over many trials and reports how often the
# final error lands under the threshold
rows = bench.run_kaczmarz_study(m, n, trials=20, iters=2000,
                                noise_fraction=0.1, seed=35)
under = np.mean([r["final_error"] <= r["threshold"] for r in rows])
print(f"\n20 fresh trials: {100 * under:.0f}% finish below their threshold")
