"""First-stage solver: low-rank factorized SDP, rounding, brute-force oracle.

The PSD variable Y with unit diagonal is represented as U @ U.T where the
rows of U live on the unit sphere.  The factor rank sits above the
Barvinok-Pataki bound, so coordinate ascent on the rows reaches the global
optimum of the relaxation in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from sdpinfer.rng import STREAM_INIT, derive_seed

BRUTE_FORCE_MAX_N = 22


@dataclass(frozen=True)
class SolverConfig:
    rank: int | None = None  # None -> ceil(sqrt(2n)) + 1
    max_sweeps: int = 500
    tol_per_node: float = 1e-10  # objective-change tolerance is tol_per_node * n
    seed: int = 0

    def resolve_rank(self, n: int) -> int:
        r = self.rank if self.rank is not None else math.ceil(math.sqrt(2 * n)) + 1
        if r < 2:
            raise ValueError(f"rank must be >= 2, got {r}")
        return r


@dataclass(frozen=True)
class SdpSolution:
    factor: np.ndarray  # (n, r), unit-norm rows; Y = factor @ factor.T
    objective: float  # <A, Y>
    iterations: int
    converged: bool
    residual: float  # objective improvement in the final sweep

    @property
    def n(self) -> int:
        return self.factor.shape[0]

    def gram(self) -> np.ndarray:
        return self.factor @ self.factor.T


def _check_square_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValueError("observation matrix must be symmetric")
    return a


def objective(a: np.ndarray, y: np.ndarray) -> float:
    """Quadratic objective <A, y y^T> = y^T A y (twice the half-sum form)."""
    a = np.asarray(a, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if a.shape != (len(y), len(y)):
        raise ValueError(f"shape mismatch: A is {a.shape}, y has length {len(y)}")
    return float(y @ a @ y)


def solve_sdp(a: np.ndarray, cfg: SolverConfig = SolverConfig()) -> SdpSolution:
    """Maximize <A, Y> over PSD Y with unit diagonal, via row coordinate ascent.

    Each row update u_i <- normalize(sum_j A_ij u_j) is individually optimal;
    a zero sum leaves the row unchanged.  The objective is nondecreasing
    sweep over sweep and convergence is declared when one full sweep
    improves it by less than the tolerance.
    """
    a = _check_square_symmetric(a)
    if np.abs(np.diag(a)).max(initial=0.0) > 1e-12:
        raise ValueError("observation matrix must have zero diagonal")
    n = a.shape[0]
    r = cfg.resolve_rank(n)
    tol = cfg.tol_per_node * n

    rng = np.random.default_rng(derive_seed(cfg.seed, STREAM_INIT))
    u = rng.standard_normal((n, r))
    u /= np.linalg.norm(u, axis=1, keepdims=True)

    obj = float(np.einsum("ij,ik,jk->", a, u, u))
    converged = False
    residual = math.inf
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        for i in range(n):
            s = a[i] @ u
            norm = np.linalg.norm(s)
            if norm > 0:
                u[i] = s / norm
        new_obj = float(np.einsum("ij,ik,jk->", a, u, u))
        residual = new_obj - obj
        assert residual >= -1e-7 * max(1.0, abs(obj)), "coordinate ascent objective decreased"
        obj = new_obj
        if residual < tol:
            converged = True
            break
    return SdpSolution(factor=u, objective=obj, iterations=sweeps, converged=converged, residual=residual)


def round_solution(sol: SdpSolution) -> np.ndarray:
    """Sign pattern of the leading eigenvector of Y = U U^T.

    sign(0) maps to +1 and the global sign is fixed so the first entry
    is +1.
    """
    # leading left singular vector of U == leading eigenvector of U U^T
    left, _, _ = np.linalg.svd(sol.factor, full_matrices=False)
    u1 = left[:, 0]
    y = np.where(u1 >= 0, 1, -1).astype(np.int64)
    if y[0] < 0:
        y = -y
    return y


def _signs_from_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Sign rows with y_1 = +1; code bit order makes enumeration lexicographic
    with +1 before -1 in every coordinate."""
    signs = np.ones((len(codes), n))
    for k in range(1, n):
        signs[:, k] = 1.0 - 2.0 * ((codes >> (n - 1 - k)) & 1)
    return signs


def _enumerate_objectives(a: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """y^T A y for every y with y_1 = +1, in lexicographic order."""
    n = a.shape[0]
    total = 1 << (n - 1)
    vals = np.empty(total)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        signs = _signs_from_codes(codes, n)
        vals[start:start + len(codes)] = np.einsum("ci,ij,cj->c", signs, a, signs)
    return vals


def brute_force_max(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact maximizer of y^T A y over y in {+-1}^n with y_1 = +1.

    Ties break toward the lexicographically smallest y (with +1 < -1 in
    each coordinate, i.e. the candidate enumerated first).
    """
    a = _check_square_symmetric(a)
    n = a.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force capped at n={BRUTE_FORCE_MAX_N}, got n={n}")
    vals = _enumerate_objectives(a)
    best = int(np.argmax(vals))  # argmax returns the first (lexicographic) tie
    y = _signs_from_codes(np.array([best], dtype=np.int64), n)[0]
    return y.astype(np.int64), float(vals[best])


def brute_force_maximizers(a: np.ndarray, atol: float = 1e-9) -> tuple[np.ndarray, float]:
    """All maximizers with y_1 = +1 (within atol of the max) and the max value."""
    a = _check_square_symmetric(a)
    n = a.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force capped at n={BRUTE_FORCE_MAX_N}, got n={n}")
    vals = _enumerate_objectives(a)
    best = float(vals.max())
    codes = np.flatnonzero(vals >= best - atol).astype(np.int64)
    return _signs_from_codes(codes, n).astype(np.int64), best
