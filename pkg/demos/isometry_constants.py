"""Restricted isometry constants: exact enumeration, sampled bounds, and
the near-isometry inequalities they imply.

Run:  python3 demos/isometry_constants.py
"""


import sparsekit as sk

# exact constants of a small Gaussian matrix, order by order
A = sk.gen_matrix(sk.EnsembleSpec("gaussian", 12, 18, seed=5))
print("exact constants (12 x 18 gaussian):")
for r in range(1, 5):
    rep = sk.ric_exact(A, r)
    print(f"  r={r}: delta={rep.delta:.4f}  witness={[int(i) for i in rep.witness]}")

# a full orthogonal operator is a perfect isometry at every order
Q = sk.gen_matrix(sk.EnsembleSpec("partial_dct", 16, 16, seed=6))
print(f"\nfull DCT delta_3 = {sk.ric_exact(Q, 3).delta:.2e}")

# sampled lower bounds converge toward the exact value as trials grow
exact = sk.ric_exact(A, 4).delta
print("\nsampled lower bounds on delta_4:")
for trials in (10, 100, 1000):
    mc = sk.ric_monte_carlo(A, 4, trials=trials, seed=7)
    print(f"  {trials:5d} trials: {mc.delta:.4f}  (exact {exact:.4f})")

# consequences: local approximation, spectral bound, near-orthogonality,
# order scaling, and the energy bound, each evaluated on a random battery
checks = sk.check_ric_consequences(A, s=2, trials=200, seed=8)
print("\nnear-isometry consequences (worst lhs/rhs over the battery):")
for name, c in checks.items():
    print(f"  {name:<22} {'ok' if c.passed else 'VIOLATED'}  {c.worst_ratio:.3f}")
