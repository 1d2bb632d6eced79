"""Monte-Carlo benchmark harness: phase transitions, recovery trends,
noise studies, iteration counts, Kaczmarz thresholds, and the reweighted
error-bound table.

Every trial draws a fresh matrix and signal from a seed derived as
``stream_seed(master, algorithm, s, m, trial)``, so adding algorithms or
reordering cells never perturbs existing results, and trials may execute
on any number of worker threads with bit-identical output (results are
reduced in trial order).
"""

import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .convex import RwConfig, bp_denoise, bp_equality, reweighted_l1, rw_error_recursion
from .ensembles import EnsembleSpec, NoiseSpec, SignalSpec, gen_matrix, gen_noise, gen_signal
from .greedy import CosampConfig, StompConfig, cosamp, omp, prune, romp, stomp
from .kaczmarz import rk_solve
from .rng import stream_seed

ALGORITHMS = ("bp", "omp", "stomp", "romp", "cosamp", "rwl1")

SUCCESS_THRESHOLD = 1e-5



@dataclass(frozen=True)
class ExperimentGrid:
    """Cross product of (s, m) cells for one algorithm at fixed d."""

    algorithm: str
    d: int
    m_values: tuple
    s_values: tuple
    trials: int = 100
    seed: int = 0
    ensemble: str = "gaussian"
    signal_kind: str = "flat"
    signal_p: float = 0.5
    random_signs: bool = False
    noise_norm: float = 0.0
    noise_fraction: float = 0.0
    noise_mode: str = "measurement"
    success_threshold: float = SUCCESS_THRESHOLD
    threads: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.noise_mode not in ("measurement", "signal"):
            raise ValueError(f"unknown noise mode {self.noise_mode!r}")
        for m in self.m_values:
            if m > self.d:
                warnings.warn(f"cell with m={m} > d={self.d}", stacklevel=2)


@dataclass
class CellResult:
    algorithm: str
    d: int
    m: int
    s: int
    trials: int
    seed: int
    success_count: int
    mean_normalized_error: float
    mean_iterations: float
    mean_runtime: float          # informational; excluded from file output

    def row(self):
        return {
            "algo": self.algorithm, "d": self.d, "m": self.m, "s": self.s,
            "trials": self.trials, "seed": self.seed,
            "success_count": self.success_count,
            "success_rate": self.success_count / self.trials,
            "mean_normalized_error": self.mean_normalized_error,
            "mean_iterations": self.mean_iterations,
        }


def trial_seed(master, algorithm, s, m, trial):
    """Per-trial stream seed; independent of cell enumeration order."""
    return stream_seed(master, algorithm, s, m, trial)


def _recovery_epsilon(e_norm, u_norm):
    return max(1.01 * e_norm, 1e-9 * max(u_norm, 1.0))


def run_algorithm(algorithm, A, u, s, e_norm=0.0, noise_sigma=0.0):
    """Dispatch one recovery; returns (estimate, iterations)."""
    m = A.shape[0]
    if s == 0:
        return np.zeros(A.shape[1]), 0
    if algorithm == "omp":
        rep = omp(A, u, min(s, m))
        return rep.estimate, rep.iterations
    if algorithm == "stomp":
        rep = stomp(A, u, StompConfig())
        return rep.estimate, rep.iterations
    if algorithm == "romp":
        rep = romp(A, u, s)
        return rep.estimate, rep.iterations
    if algorithm == "cosamp":
        eps = _recovery_epsilon(e_norm, float(np.linalg.norm(u)))
        cfg = CosampConfig(s, halting="sample_norm", halt_value=eps,
                           max_iters=max(10 * s, 60))
        rep = cosamp(A, u, cfg)
        return rep.estimate, rep.iterations
    if algorithm == "bp":
        if e_norm == 0.0:
            return bp_equality(A, u), 1
        return bp_denoise(A, u, e_norm), 1
    if algorithm == "rwl1":
        eps = 0.0
        if noise_sigma > 0.0:
            eps = float(np.sqrt(noise_sigma**2 * (m + 2 * np.sqrt(2 * m))))
        rep = reweighted_l1(A, u, RwConfig(epsilon=eps))
        return rep.estimate, rep.iterations
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _one_trial(grid, s, m, trial):
    seed = trial_seed(grid.seed, grid.algorithm, s, m, trial)
    A = gen_matrix(EnsembleSpec(grid.ensemble, m, grid.d,
                                seed=stream_seed(seed, "matrix")))
    x = gen_signal(SignalSpec(grid.d, s, grid.signal_kind, grid.signal_p,
                              seed=stream_seed(seed, "signal"),
                              random_signs=grid.random_signs))
    noise_sigma = 0.0
    e_norm = 0.0
    if grid.noise_mode == "signal" and (grid.noise_norm or grid.noise_fraction):
        target = grid.noise_norm or grid.noise_fraction * np.linalg.norm(x)
        g = gen_noise(NoiseSpec(grid.d, target, stream_seed(seed, "noise")))
        x = x + g
        u = A @ x
    else:
        u_clean = A @ x
        target = grid.noise_norm
        if grid.noise_fraction:
            target = grid.noise_fraction * float(np.linalg.norm(u_clean))
        e = gen_noise(NoiseSpec(m, target, stream_seed(seed, "noise")))
        e_norm = float(np.linalg.norm(e))
        u = u_clean + e
    if e_norm > 0:
        # entrywise scale of the rescaled Gaussian noise, for the rwl1 default
        noise_sigma = e_norm / np.sqrt(m)

    t0 = time.perf_counter()
    x_hat, iterations = run_algorithm(grid.algorithm, A, u, s, e_norm,
                                      noise_sigma)
    runtime = time.perf_counter() - t0

    err = float(np.linalg.norm(x_hat - x))
    xnorm = float(np.linalg.norm(x))
    normalized = err / xnorm if xnorm > 0 else float(np.linalg.norm(x_hat))
    return {
        "x": x, "estimate": x_hat, "error": err, "normalized": normalized,
        "iterations": iterations, "runtime": runtime, "e_norm": e_norm,
        "success": err <= grid.success_threshold,
    }


def _map_trials(grid, s, m, worker=_one_trial):
    if grid.threads > 1:
        with ThreadPoolExecutor(max_workers=grid.threads) as pool:
            futs = [pool.submit(worker, grid, s, m, t)
                    for t in range(grid.trials)]
            return [f.result() for f in futs]   # trial order, not finish order
    return [worker(grid, s, m, t) for t in range(grid.trials)]


def run_phase_transition(grid):
    """Success counts and mean errors over the (s, m) grid."""
    results = []
    for s in grid.s_values:
        for m in grid.m_values:
            trials = _map_trials(grid, s, m)
            results.append(CellResult(
                grid.algorithm, grid.d, m, s, grid.trials, grid.seed,
                success_count=sum(t["success"] for t in trials),
                mean_normalized_error=float(
                    np.mean([t["normalized"] for t in trials])),
                mean_iterations=float(
                    np.mean([t["iterations"] for t in trials])),
                mean_runtime=float(np.mean([t["runtime"] for t in trials])),
            ))
    return results


def run_trend(grid, level=0.99):
    """For each m, the largest s whose success rate reaches ``level``."""
    cells = run_phase_transition(grid)
    rows = []
    for m in grid.m_values:
        best = 0
        for c in cells:
            if c.m == m and c.success_count >= level * c.trials:
                best = max(best, c.s)
        rows.append({
            "algo": grid.algorithm, "d": grid.d, "m": m,
            "s_max_tested": max(grid.s_values), "trials": grid.trials,
            "seed": grid.seed, "level": level, "max_s": best,
        })
    return rows


def run_noise_study(grid):
    """Mean recovery-error to noise ratios per cell.

    Measurement mode normalizes by ||e||_2; signal mode measures
    ||x_hat - z_s||_2 / (||z - z_s||_1 / sqrt(s)) for the perturbed signal z.
    """
    if grid.noise_norm <= 0 and grid.noise_fraction <= 0:
        raise ValueError("noise study needs a positive noise level")
    rows = []
    for s in grid.s_values:
        for m in grid.m_values:
            trials = _map_trials(grid, s, m)
            ratios = []
            for t in trials:
                if grid.noise_mode == "measurement":
                    ratios.append(t["error"] / t["e_norm"])
                else:
                    z = t["x"]
                    zs = prune(z, s)
                    denom = float(np.linalg.norm(z - zs, 1)) / np.sqrt(s)
                    ratios.append(
                        float(np.linalg.norm(t["estimate"] - zs)) / denom)
            rows.append({
                "algo": grid.algorithm, "d": grid.d, "m": m, "s": s,
                "trials": grid.trials, "seed": grid.seed,
                "noise_mode": grid.noise_mode,
                "mean_error_ratio": float(np.mean(ratios)),
            })
    return rows


def iteration_cap(algorithm, s):
    if algorithm == "romp":
        return 2 * s
    if algorithm == "cosamp":
        return 6 * (s + 1)
    return None


def run_iteration_study(grid):
    """Mean iteration counts per sparsity; checks the per-run caps."""
    rows = []
    for s in grid.s_values:
        for m in grid.m_values:
            trials = _map_trials(grid, s, m)
            cap = iteration_cap(grid.algorithm, s)
            violations = 0
            if cap is not None:
                violations = sum(
                    1 for t in trials if t["success"] and t["iterations"] > cap)
            rows.append({
                "algo": grid.algorithm, "d": grid.d, "m": m, "s": s,
                "trials": grid.trials, "seed": grid.seed,
                "mean_iterations": float(
                    np.mean([t["iterations"] for t in trials])),
                "max_iterations": int(
                    max(t["iterations"] for t in trials)),
                "cap": cap if cap is not None else "",
                "violations": violations,
            })
    return rows


def run_kaczmarz_study(m, n, trials, iters, noise_fraction, seed,
                       curve=False, log_stride=50):
    """Final error vs the predicted threshold sqrt(R) * gamma per trial.

    Each trial solves a homogeneous Gaussian system (x = 0, b = 0) from a
    unit-norm random start, with a noise vector of norm ``noise_fraction``
    added to the right-hand side.  ``curve=True`` emits the error at every
    ``log_stride`` iterations instead of one summary row per trial.
    """
    if m < n:
        raise ValueError("need m >= n (overdetermined system)")
    rows = []
    x_true = np.zeros(n)
    for trial in range(trials):
        tseed = stream_seed(seed, "kaczmarz", trial)
        A = gen_matrix(EnsembleSpec("gaussian", m, n,
                                    seed=stream_seed(tseed, "matrix"),
                                    normalize=False))
        e = gen_noise(NoiseSpec(m, noise_fraction, stream_seed(tseed, "noise")))
        x0 = gen_noise(NoiseSpec(n, 1.0, stream_seed(tseed, "start")))
        run = rk_solve(A, e, x0, iters, seed=tseed,
                       log_stride=log_stride, x_ref=x_true, residual=e)
        threshold = float(np.sqrt(run.R) * run.gamma)
        if curve:
            for k, err in run.iterates_logged:
                rows.append({
                    "m": m, "n": n, "trial": trial, "seed": seed,
                    "iteration": k, "error": err,
                })
        else:
            rows.append({
                "m": m, "n": n, "trial": trial, "iters": iters,
                "noise_fraction": noise_fraction, "seed": seed,
                "final_error": run.iterates_logged[-1][1],
                "threshold": threshold, "R": run.R, "gamma": run.gamma,
            })
    return rows


def run_rw_bounds(mu, eps_list, delta_list, tol=1e-3):
    """Iterations until the reweighted error bound is within ``tol`` of its
    limit, per (eps, delta) cell; hypothesis-violating cells are marked."""
    rows = []
    for eps in eps_list:
        for delta in delta_list:
            row = {"mu": mu, "eps": eps, "delta": delta, "tol": tol}
            try:
                b = rw_error_recursion(mu, eps, delta, tol)
                row.update({
                    "rho": float(b.rho), "alpha": float(b.alpha),
                    "E1": float(b.E[0]), "limit": b.L,
                    "iterations": b.iters_to_converge, "hypothesis_ok": True,
                })
            except ValueError:
                row.update({
                    "rho": "", "alpha": "", "E1": "", "limit": "",
                    "iterations": "", "hypothesis_ok": False,
                })
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Serialization

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows):
    if not rows:
        return ""
    keys = list(rows[0].keys())
    lines = [",".join(keys)]
    for row in rows:
        lines.append(",".join(_fmt(row[k]) for k in keys))
    return "\n".join(lines) + "\n"


def rows_to_jsonl(rows):
    import json

    out = []
    for row in rows:
        clean = {k: (float(v) if isinstance(v, np.floating) else
                     int(v) if isinstance(v, np.integer) else v)
                 for k, v in row.items()}
        out.append(json.dumps(clean, sort_keys=True))
    return "\n".join(out) + ("\n" if out else "")
