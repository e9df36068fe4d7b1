"""
Saddle-point systems ``A = [[Phi, P], [P^T, 0]]`` and their dense solves.

``Phi[i, j] = phi(eps_j * |x_i - x_j|)``: column j belongs to the kernel
centred at ``x_j``. With a single shape parameter ``A`` is symmetric; with
per-center shapes it is not, and quantities that are linear functionals of the
interpolant (cubature weights, cardinal functions) solve with ``A^T``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.spatial.distance import cdist

from .kernels import Kernel, kernel_eval
from .pointsets import PointSet, unisolvency_check
from .polybasis import NotUnisolventError

SVD_SIZE_CAP = 3000


class SingularSystemError(np.linalg.LinAlgError):
    """The LU factorisation hit a zero pivot."""

    def __init__(self, pivot: int, msg: str | None = None):
        super().__init__(msg or f"saddle matrix is singular (zero pivot at index {pivot})")
        self.pivot = pivot


@dataclass(eq=False)
class SaddleSystem:
    A: np.ndarray
    n: int
    k: int
    kernel: Kernel
    shapes: np.ndarray
    points: np.ndarray
    basis: object = None

    @property
    def Phi(self) -> np.ndarray:
        return self.A[: self.n, : self.n]

    @property
    def P(self) -> np.ndarray:
        return self.A[: self.n, self.n:]

    def rows(self, x) -> np.ndarray:
        """Right-hand sides ``[phi_1(x), ..., phi_N(x), p_1(x), ..., p_K(x)]``
        for a batch of evaluation points; shape (M, N + K)."""
        x = np.asarray(x, dtype=float).reshape(-1, self.points.shape[1])
        r = cdist(x, self.points)
        out = np.empty((len(x), self.n + self.k))
        out[:, : self.n] = kernel_eval(self.kernel, r * self._eps)
        if self.k:
            out[:, self.n:] = self.basis(x)
        return out

    @property
    def _eps(self):
        return self.shapes if len(self.shapes) else 1.0


def assemble(kernel: Kernel, shapes, ps: PointSet, basis=None) -> SaddleSystem:
    """Build the saddle matrix for ``kernel`` centred at ``ps``.

    ``basis`` is a monomial or DOP basis, or ``None`` for the pure RBF system.
    """
    pts = ps.points
    N = len(pts)
    shapes = np.asarray(shapes, dtype=float).ravel()
    if kernel.is_phs:
        shapes = np.zeros(0)
    elif len(shapes) != N or np.any(shapes <= 0):
        raise ValueError("need one positive shape parameter per point")
    r = cdist(pts, pts)
    off = r + np.diag(np.full(N, np.inf))
    if N > 1 and off.min() == 0.0:
        raise ValueError("data points must be pairwise distinct")
    K = basis.K if basis is not None else 0
    if K and not unisolvency_check(ps, basis.d):
        raise NotUnisolventError(f"points are not unisolvent for degree {basis.d}")
    A = np.zeros((N + K, N + K))
    A[:N, :N] = kernel_eval(kernel, r * (shapes[None, :] if len(shapes) else 1.0))
    if K:
        P = basis(pts)
        A[:N, N:] = P
        A[N:, :N] = P.T
    return SaddleSystem(A, N, K, kernel, shapes, pts, basis)


class Factorization:
    """Partial-pivoting LU of a saddle matrix, reusable for many solves."""

    def __init__(self, A: np.ndarray):
        self.A = np.asarray(A, dtype=float)
        if self.A.size == 0:
            raise ValueError("empty system")
        with warnings.catch_warnings():
            # zero pivots are reported below as SingularSystemError
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            self.lu, self.piv = sla.lu_factor(self.A, check_finite=True)
        diag = np.abs(np.diag(self.lu))
        bad = np.flatnonzero(diag == 0.0)
        if len(bad):
            raise SingularSystemError(int(bad[0]))
        self.pivots = diag
        self.rank_estimate = int(np.sum(diag > diag.max() * len(diag) * np.finfo(float).eps))

    def solve(self, rhs, trans: bool = False, refine: bool = True):
        """Solve ``A x = rhs`` (or ``A^T x = rhs``) with one refinement step.

        Returns ``(x, residual)`` where ``residual`` is the max-norm residual.
        """
        rhs = np.asarray(rhs, dtype=float)
        t = 1 if trans else 0
        M = self.A.T if trans else self.A
        x = sla.lu_solve((self.lu, self.piv), rhs, trans=t, check_finite=False)
        if refine:
            x = x + sla.lu_solve((self.lu, self.piv), rhs - M @ x, trans=t, check_finite=False)
        res = float(np.max(np.abs(M @ x - rhs))) if rhs.size else 0.0
        return x, res


def solve(sys, rhs, trans: bool = False):
    """Solve a saddle system (or plain matrix); returns ``(x, residual)``."""
    A = sys.A if isinstance(sys, SaddleSystem) else sys
    return Factorization(A).solve(rhs, trans=trans)


def condition_2norm(sys, cap: int = SVD_SIZE_CAP) -> float:
    """``sigma_max / sigma_min`` from a full SVD."""
    A = sys.A if isinstance(sys, SaddleSystem) else np.asarray(sys, dtype=float)
    if A.shape[0] > cap:
        raise ValueError(f"matrix size {A.shape[0]} exceeds the dense SVD cap {cap}; "
                         "condition estimation for larger systems is not provided")
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
