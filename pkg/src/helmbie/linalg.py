"""Dense complex direct solver and a restart-free GMRES."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "SingularMatrixError",
    "GmresError",
    "GmresResult",
    "lu_solve",
    "gmres",
]


class SingularMatrixError(np.linalg.LinAlgError):
    """Pivot collapsed to working precision during factorization."""

    def __init__(self, pivot_index: int, message: str):
        super().__init__(message)
        self.pivot_index = pivot_index


class GmresError(RuntimeError):
    """GMRES failed to reach the tolerance; carries the residual history."""

    def __init__(self, message: str, history):
        super().__init__(message)
        self.history = np.asarray(history)


def lu_solve(matrix, rhs):
    """Solve a dense complex system by partial-pivot LU with a pivot guard."""
    a = np.asarray(matrix, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite entries in the linear system")
    with warnings.catch_warnings():
        # the pivot guard below is the error path for singular input
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    diag = np.abs(np.diag(lu))
    scale = max(np.max(diag), 1.0)
    worst = int(np.argmin(diag))
    if diag[worst] <= 1e-14 * scale:
        raise SingularMatrixError(
            worst, f"matrix singular to working precision at pivot {worst}"
        )
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


@dataclass
class GmresResult:
    x: np.ndarray
    iterations: int
    residuals: np.ndarray  # relative residual after each iteration, [0] = 1

    @property
    def residual(self) -> float:
        return float(self.residuals[-1])


def gmres(operator, b, tol: float = 1e-10, maxit: int | None = None) -> GmresResult:
    """Restart-free GMRES with modified Gram-Schmidt Arnoldi, zero initial guess.

    ``operator`` is a square matrix or a callable v -> A v.  Returns the first
    iterate whose relative residual meets ``tol``; raises GmresError with the
    residual history otherwise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if callable(operator):
        apply_op = operator
    else:
        mat = np.asarray(operator, dtype=complex)
        apply_op = lambda v: mat @ v
    b = np.asarray(b, dtype=complex)
    n = b.size
    if maxit is None:
        maxit = n
    maxit = min(maxit, n)

    beta = np.linalg.norm(b)
    if beta == 0.0:
        return GmresResult(np.zeros(n, dtype=complex), 0, np.array([0.0]))

    basis = [b / beta]
    hess = np.zeros((maxit + 1, maxit), dtype=complex)
    cs = np.zeros(maxit, dtype=complex)
    sn = np.zeros(maxit, dtype=complex)
    g = np.zeros(maxit + 1, dtype=complex)
    g[0] = beta
    history = [1.0]

    for j in range(maxit):
        w = apply_op(basis[j])
        for i in range(j + 1):
            hess[i, j] = np.vdot(basis[i], w)
            w = w - hess[i, j] * basis[i]
        hess[j + 1, j] = np.linalg.norm(w)

        for i in range(j):
            hi, hj = hess[i, j], hess[i + 1, j]
            hess[i, j] = np.conj(cs[i]) * hi + np.conj(sn[i]) * hj
            hess[i + 1, j] = -sn[i] * hi + cs[i] * hj
        denom = np.hypot(abs(hess[j, j]), abs(hess[j + 1, j]))
        if denom == 0.0:
            cs[j], sn[j] = 1.0, 0.0
        else:
            cs[j] = hess[j, j] / denom
            sn[j] = hess[j + 1, j] / denom
        hess[j, j] = np.conj(cs[j]) * hess[j, j] + np.conj(sn[j]) * hess[j + 1, j]
        hess[j + 1, j] = 0.0
        g[j + 1] = -sn[j] * g[j]
        g[j] = np.conj(cs[j]) * g[j]

        rel = abs(g[j + 1]) / beta
        history.append(min(rel, history[-1]))  # |sn| <= 1 keeps this monotone

        if rel <= tol:
            y = scipy.linalg.solve_triangular(
                hess[: j + 1, : j + 1], g[: j + 1], check_finite=False
            )
            x = np.zeros(n, dtype=complex)
            for i in range(j + 1):
                x += y[i] * basis[i]
            return GmresResult(x, j + 1, np.asarray(history))

        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            break  # invariant subspace without convergence
        basis.append(w / norm_w)

    raise GmresError(
        f"GMRES did not reach tol={tol:g} in {maxit} iterations "
        f"(last relative residual {history[-1]:.3e})",
        history,
    )
