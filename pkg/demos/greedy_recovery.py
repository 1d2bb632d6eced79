"""Recover a planted sparse signal with each greedy pursuit.

Run:  python3 demos/greedy_recovery.py
"""

import numpy as np

import sparsekit as sk

d, m, s = 256, 100, 8

A = sk.gen_matrix(sk.EnsembleSpec("gaussian", m, d, seed=7))
x = sk.gen_signal(sk.SignalSpec(d, s, seed=8, random_signs=True))
u = A @ x
print(f"planted support: {[int(i) for i in np.flatnonzero(x)]}")
print(f"{m} measurements of a {s}-sparse signal in dimension {d}\n")

runs = {
    "omp": sk.omp(A, u, s),
    "stomp": sk.stomp(A, u, sk.StompConfig(t=2.0)),
    "romp": sk.romp(A, u, s),
    "cosamp": sk.cosamp(A, u, sk.CosampConfig(
        s, halting="sample_norm", halt_value=1e-10 * np.linalg.norm(u))),
}

print(f"{'algorithm':<8} {'error':>10} {'iters':>6}  halt")
for name, rep in runs.items():
    err = np.linalg.norm(rep.estimate - x)
    print(f"{name:<8} {err:10.2e} {rep.iterations:6d}  {rep.halt_reason}")

# the residual trace shows how quickly each pursuit locks onto the support
print("\ncosamp residual history:",
      ["%.2e" % r for r in runs["cosamp"].residual_history])
