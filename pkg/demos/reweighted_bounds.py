"""The theoretical error bound of the reweighted iteration: how many
solves until the per-iteration bound reaches its limit.

Run:  python3 demos/reweighted_bounds.py
"""


from sparsekit import bench, rw_error_recursion

# one cell in detail
b = rw_error_recursion(mu=10.0, eps=0.1, delta=0.2, tol=1e-3)
print(f"delta=0.2, eps=0.1, mu=10: rho={b.rho:.4f} alpha={b.alpha:.4f}")
print(f"  bound sequence: {[round(float(v), 5) for v in b.E]}")
print(f"  limit {b.L:.5f} reached to 1e-3 in {b.iters_to_converge} solves\n")

# the full table the harness emits: iteration counts per (eps, delta)
rows = bench.run_rw_bounds(10.0, [0.01, 0.1, 0.5, 1.0],
                           [0.05, 0.1, 0.2, 0.3, 0.4])
deltas = sorted({r["delta"] for r in rows})
print("solves to reach the limit (rows: eps, cols: delta; '-' = hypothesis fails)")
print("eps\\delta " + "".join(f"{d:>7}" for d in deltas))
for eps in (0.01, 0.1, 0.5, 1.0):
    cells = [r for r in rows if r["eps"] == eps]
    line = "".join(f"{(str(r['iterations']) if r['hypothesis_ok'] else '-'):>7}"
                   for r in cells)
    print(f"{eps:<9}" + line)
