"""Deterministic dense linear algebra kernels.

Products, column restriction, iterative least squares (Richardson and
conjugate gradient on the normal equations), extreme singular values via
cyclic Jacobi on the Gram matrix, and magnitude top-k selection.  Everything
here is a pure function of its inputs; no randomness, no shared state.
"""

from dataclasses import dataclass

import numpy as np

LS_METHODS = ("richardson", "conjugate_gradient")


class DivergenceError(RuntimeError):
    """Richardson iteration diverged (splitting norm >= 1)."""


@dataclass(frozen=True)
class LsConfig:
    """Iterative least-squares settings.

    ``max_iters=None`` means 3*|T| for a T-column system; ``tol`` is the
    relative normal-equation residual target (0 disables early stopping).
    """

    method: str = "conjugate_gradient"
    max_iters: int | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.method not in LS_METHODS:
            raise ValueError(f"unknown least-squares method {self.method!r}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")


def as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={A.ndim}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_vector(x, length=None, name="vector"):
    x = np.asarray(x, dtype=float).reshape(-1)
    if length is not None and x.size != length:
        raise ValueError(f"{name} has length {x.size}, expected {length}")
    return x


def as_index_set(indices, d):
    """Validate a strictly increasing set of column indices in [0, d)."""
    idx = np.asarray(indices, dtype=np.intp).reshape(-1)
    if idx.size:
        if idx[0] < 0 or idx[-1] >= d:
            raise IndexError(f"index out of range for {d} columns")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("index set must be strictly increasing")
    return idx


def matvec(A, x):
    """Dense product A @ x."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[1], "x")
    return A @ x


def adjoint_matvec(A, v):
    """Dense product A.T @ v."""
    A = as_matrix(A)
    v = as_vector(v, A.shape[0], "v")
    return A.T @ v


def restrict_columns(A, T):
    """The m x |T| submatrix of the columns listed in T."""
    A = as_matrix(A)
    idx = as_index_set(T, A.shape[1])
    return A[:, idx]


def least_squares(A_T, u, z0=None, cfg=None):
    """Iteratively solve min_z ||A_T z - u||_2.

    Richardson uses the splitting M = A_T' A_T - I (requires ||M|| < 1);
    conjugate gradient runs on the normal equations.  Stops when the
    relative normal-equation residual drops below ``cfg.tol`` or after
    ``cfg.max_iters`` updates.  Returns (z, iterations_used).
    """
    A_T = as_matrix(A_T)
    m, k = A_T.shape
    u = as_vector(u, m, "u")
    cfg = cfg or LsConfig()
    if k == 0:
        return np.zeros(0), 0
    z = np.zeros(k) if z0 is None else as_vector(z0, k, "z0").copy()
    max_iters = cfg.max_iters if cfg.max_iters is not None else 3 * k

    atu = A_T.T @ u
    target = cfg.tol * np.linalg.norm(atu)

    if cfg.method == "richardson":
        return _richardson(A_T, u, z, atu, target, max_iters)
    return _cgnr(A_T, u, z, atu, target, max_iters)


def _richardson(A_T, u, z, atu, target, max_iters):
    gram_z = A_T.T @ (A_T @ z)
    res0 = np.linalg.norm(gram_z - atu)
    for it in range(1, max_iters + 1):
        # z <- A'u - M z with M = A'A - I
        z = atu - (gram_z - z)
        gram_z = A_T.T @ (A_T @ z)
        res = np.linalg.norm(gram_z - atu)
        if res <= target:
            return z, it
        if res > 10.0 * max(res0, np.finfo(float).tiny):
            raise DivergenceError(
                "Richardson iteration diverged; the restricted Gram matrix "
                "is not close enough to the identity"
            )
    return z, max_iters


def _cgnr(A_T, u, z, atu, target, max_iters):
    r = u - A_T @ z
    s = A_T.T @ r
    p = s.copy()
    gamma = float(s @ s)
    tiny = np.finfo(float).tiny
    for it in range(1, max_iters + 1):
        q = A_T @ p
        qq = float(q @ q)
        if qq <= tiny:
            return z, it - 1
        alpha = gamma / qq
        z = z + alpha * p
        r = r - alpha * q
        s = A_T.T @ r
        gamma_new = float(s @ s)
        if np.sqrt(gamma_new) <= target:
            return z, it
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
    return z, max_iters


def pseudoinverse_apply(A, T, u, cfg=None, z0=None):
    """Least-squares solution on the columns T, zero elsewhere.

    ``z0`` optionally warm-starts the iterative solver with a full-length
    vector (its restriction to T is used).
    """
    A = as_matrix(A)
    m, d = A.shape
    idx = as_index_set(T, d)
    if idx.size > m:
        raise ValueError(f"support size {idx.size} exceeds row count {m}")
    x = np.zeros(d)
    if idx.size == 0:
        return x
    start = None if z0 is None else as_vector(z0, d, "z0")[idx]
    z, _ = least_squares(A[:, idx], u, start, cfg)
    x[idx] = z
    return x


def _jacobi_eigenvalues(G, tol=1e-15, max_sweeps=60):
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations."""
    G = np.array(G, dtype=float)
    k = G.shape[0]
    if k == 1:
        return G[0, :1].copy()
    scale = max(np.linalg.norm(G), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(G**2) - np.sum(np.diag(G) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = G[p, q]
                if abs(apq) <= tol * scale * 1e-3:
                    continue
                theta = (G[q, q] - G[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t = t / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * G[:, p] - s * G[:, q]
                rot_q = s * G[:, p] + c * G[:, q]
                G[:, p], G[:, q] = rot_p, rot_q
                rot_p = c * G[p, :] - s * G[q, :]
                rot_q = s * G[p, :] + c * G[q, :]
                G[p, :], G[q, :] = rot_p, rot_q
    return np.sort(np.diag(G))


def extreme_singular_values(A_T):
    """Smallest and largest singular values of a column submatrix."""
    A_T = as_matrix(A_T)
    if A_T.shape[1] == 0:
        raise ValueError("need at least one column")
    eigs = _jacobi_eigenvalues(A_T.T @ A_T)
    eigs = np.clip(eigs, 0.0, None)
    return float(np.sqrt(eigs[0])), float(np.sqrt(eigs[-1]))


def top_k(v, k):
    """Indices of the k largest-magnitude entries, ties to the smaller index.

    Returned sorted ascending.
    """
    v = as_vector(v)
    if k > v.size:
        raise ValueError(f"k={k} exceeds vector length {v.size}")
    if k < 0:
        raise ValueError("k must be >= 0")
    order = np.argsort(-np.abs(v), kind="stable")
    return np.sort(order[:k])


def support(x, tol=0.0):
    """Indices with |x_i| > tol, sorted ascending."""
    x = as_vector(x)
    return np.flatnonzero(np.abs(x) > tol)
