"""Dual certificate for the first-stage SDP.

The candidate labeling yhat induces the dual pair V = Diag(v(yhat)),
B = V - A, which is the signed Laplacian L(yhat).  Since L(yhat) @ yhat = 0
identically, positivity of the smallest eigenvalue on the orthogonal
complement of yhat certifies that yhat is the unique combinatorial optimum
up to global sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sdpinfer.graphs import Graph

DENSE_EIG_MAX_N = 500


class EigensolverError(RuntimeError):
    """Power iteration failed to converge; carries diagnostics in args."""


@dataclass(frozen=True)
class SignedLaplacian:
    matrix: np.ndarray  # Diag(v(y)) - A
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CertificateReport:
    lambda2: float
    kkt_stationarity: bool
    kkt_primal: bool
    kkt_dual_psd: bool
    kkt_slackness: bool
    certified: bool
    tol: float

    def as_record(self) -> dict[str, str]:
        """Flat key-value form for text/CSV serialization."""
        return {
            "lambda2": repr(self.lambda2),
            "kkt_stationarity": str(self.kkt_stationarity).lower(),
            "kkt_primal": str(self.kkt_primal).lower(),
            "kkt_dual_psd": str(self.kkt_dual_psd).lower(),
            "kkt_slackness": str(self.kkt_slackness).lower(),
            "certified": str(self.certified).lower(),
            "tol": repr(self.tol),
        }


def _check_pair(a: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != len(y):
        raise ValueError(f"shape mismatch: A is {a.shape}, y has length {len(y)}")
    return a, y


def signed_degree(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """v_i(y) = y_i * sum_j A_ij y_j, the diagonal of A y y^T."""
    a, y = _check_pair(a, y)
    return y * (a @ y)


def signed_laplacian(a: np.ndarray, y: np.ndarray) -> SignedLaplacian:
    a, y = _check_pair(a, y)
    lap = np.diag(signed_degree(a, y)) - a
    kernel_residual = np.abs(lap @ y).max(initial=0.0)
    assert kernel_residual <= 1e-9 * max(1.0, np.abs(lap).max(initial=0.0)), (
        f"L(y) @ y residual {kernel_residual} exceeds tolerance"
    )
    return SignedLaplacian(matrix=lap, y=y)


def lambda2(lap: SignedLaplacian, method: str | None = None) -> float:
    """min of x^T L x over unit x orthogonal to y (y spans the known kernel).

    Dense eigendecomposition for n <= 500 (or method='dense'); deflated
    power iteration on sigma*I - L otherwise, with a Gershgorin shift.
    """
    if method is None:
        method = "dense" if lap.n <= DENSE_EIG_MAX_N else "power"
    lam = lap.matrix
    y_unit = lap.y / np.linalg.norm(lap.y)
    if method == "dense":
        # push the known zero eigenvalue on y above everything else
        shift = float(np.abs(lam).sum(axis=1).max()) + 1.0
        deflated = lam + shift * np.outer(y_unit, y_unit)
        return float(np.linalg.eigvalsh(deflated)[0])
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    return _lambda2_power(lam, y_unit)


def _lambda2_power(lam: np.ndarray, y_unit: np.ndarray, max_iters: int = 20000, rtol: float = 1e-9) -> float:
    """Largest eigenvalue of sigma*I - L on the complement of y, shifted back."""
    n = lam.shape[0]
    sigma = float(np.abs(lam).sum(axis=1).max()) + 1.0  # Gershgorin upper bound
    x = np.cos(np.arange(1, n + 1, dtype=np.float64))  # deterministic start
    x -= y_unit * (y_unit @ x)
    x /= np.linalg.norm(x)
    prev = np.inf
    for it in range(max_iters):
        z = sigma * x - lam @ x
        z -= y_unit * (y_unit @ z)
        norm = np.linalg.norm(z)
        if norm == 0.0:
            return sigma  # L acts as zero on the complement
        x = z / norm
        est = float(x @ (lam @ x))
        if abs(est - prev) <= rtol * max(1.0, abs(est)):
            return est
        prev = est
    raise EigensolverError("power iteration did not converge", {"iterations": max_iters, "last_estimate": prev})


def kkt_check(a: np.ndarray, y_hat: np.ndarray, tol: float | None = None) -> CertificateReport:
    """Check the four KKT conditions for Y = yhat yhat^T with dual B = L(yhat).

    Certified means all four hold and the complement eigenvalue lambda2
    is strictly above tol.  Default tol scales as 1e-7 * max |v_i|.
    """
    a, y_hat = _check_pair(a, y_hat)
    lap = signed_laplacian(a, y_hat)
    b = lap.matrix
    v = signed_degree(a, y_hat)
    if tol is None:
        tol = 1e-7 * max(1.0, float(np.abs(v).max(initial=0.0)))
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    n = len(y_hat)
    yy = np.outer(y_hat, y_hat)
    stationarity = bool(np.abs(np.diag(v) - a - b).max(initial=0.0) == 0.0)
    primal = bool(np.abs(np.diag(yy) - 1.0).max() <= tol)  # rank-1 by construction, so PSD
    eigs = np.linalg.eigvalsh(b)
    dual_psd = bool(eigs[0] >= -tol)
    slackness = bool(abs(float(np.sum(b * yy))) <= tol * n)
    lam2 = lambda2(lap)
    certified = stationarity and primal and dual_psd and slackness and lam2 > tol
    return CertificateReport(
        lambda2=lam2,
        kkt_stationarity=stationarity,
        kkt_primal=primal,
        kkt_dual_psd=dual_psd,
        kkt_slackness=slackness,
        certified=certified,
        tol=tol,
    )


def expected_signed_laplacian(g: Graph, y_star: np.ndarray, p: float) -> np.ndarray:
    """E[Diag(v(y*)) - A]: shrinks the noiseless signed Laplacian by (1-2p)."""
    if not (0.0 <= p < 0.5):
        raise ValueError(f"p must lie in [0, 0.5), got {p}")
    y = np.asarray(y_star, dtype=np.float64)
    if y.shape != (g.n,):
        raise ValueError(f"label vector length {y.shape} does not match n={g.n}")
    ea = (1.0 - 2.0 * p) * g.adjacency_matrix() * np.outer(y, y)
    ev = (1.0 - 2.0 * p) * g.degrees().astype(np.float64)
    return np.diag(ev) - ea
