"""
Polynomial spaces P_d on rectangles.

Two bases are provided: graded-lexicographic monomials and discrete
orthonormal polynomials (DOPs) with respect to

    [u, v] = |Omega| / N * sum_n u(x_n) v(x_n).

Both span the same space, so cubature weights do not depend on the choice;
DOPs are mainly useful for the explicit cardinal-function representation of
compactly supported kernels.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NotUnisolventError(ValueError):
    """Raised when a point set does not determine polynomials of degree d."""


def monomial_exponents(d: int, dim: int) -> list[tuple[int, ...]]:
    """Multi-indices with total degree <= d, graded lexicographic order."""
    if dim == 1:
        return [(j,) for j in range(d + 1)]
    out = []
    for total in range(d + 1):
        for i in range(total, -1, -1):
            out.append((i, total - i))
    return out


@dataclass(frozen=True)
class MonomialBasis:
    d: int
    dim: int
    exponents: tuple = field(init=False)

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree must be >= 0")
        object.__setattr__(self, "exponents", tuple(monomial_exponents(self.d, self.dim)))

    @property
    def K(self) -> int:
        return len(self.exponents)

    def __call__(self, x) -> np.ndarray:
        """Evaluate all K monomials; returns shape (M, K) for M points."""
        x = np.asarray(x, dtype=float).reshape(-1, self.dim)
        E = np.array(self.exponents)
        return np.prod(x[:, None, :] ** E[None, :, :], axis=2)


@dataclass(frozen=True, eq=False)
class DopBasis:
    """Discrete orthonormal polynomials, ``p_k = sum_j coeffs[k, j] m_j``.

    ``coeffs`` is lower triangular in the monomial order, with a positive
    diagonal.
    """

    coeffs: np.ndarray
    monomials: MonomialBasis
    points: np.ndarray
    volume: float
    gram_tol: float

    @property
    def d(self) -> int:
        return self.monomials.d

    @property
    def dim(self) -> int:
        return self.monomials.dim

    @property
    def K(self) -> int:
        return self.monomials.K

    def __call__(self, x) -> np.ndarray:
        return self.monomials(x) @ self.coeffs.T

    def gram(self) -> np.ndarray:
        V = self(self.points)
        return self.volume / len(self.points) * (V.T @ V)


def discrete_inner_product(u, v, volume: float) -> float:
    """``volume / N * sum(u * v)``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or len(u) == 0:
        raise ValueError("inner product needs two vectors of equal positive length")
    if volume <= 0:
        raise ValueError("volume must be positive")
    return float(volume / len(u) * np.dot(u, v))


def build_dops(points, d: int, volume: float) -> DopBasis:
    """Gram-Schmidt (two passes) on the monomials sampled at ``points``."""
    from .pointsets import PointSet

    if isinstance(points, PointSet):
        pts = points.points
    else:
        pts = np.asarray(points, dtype=float)
        pts = pts.reshape(len(pts), -1)
    N, dim = pts.shape
    mono = MonomialBasis(d, dim)
    K = mono.K
    gram_tol = 1e3 * N * np.finfo(float).eps

    V = mono(pts)
    Q = np.zeros((N, K))
    C = np.zeros((K, K))
    for k in range(K):
        v = V[:, k].copy()
        c = np.zeros(K)
        c[k] = 1.0
        v0 = np.sqrt(discrete_inner_product(v, v, volume))
        for _ in range(2):
            for j in range(k):
                r = discrete_inner_product(Q[:, j], v, volume)
                v -= r * Q[:, j]
                c -= r * C[j]
        nrm = np.sqrt(discrete_inner_product(v, v, volume))
        if nrm <= gram_tol * v0:
            raise NotUnisolventError(
                f"points are not unisolvent for degree {d} (pivot {k} vanished)"
            )
        Q[:, k] = v / nrm
        C[k] = c / nrm
    return DopBasis(C, mono, pts.copy(), float(volume), gram_tol)


def eval_poly_basis(basis, x) -> np.ndarray:
    """Values of all basis elements at ``x``; shape (K,) for one point."""
    x = np.asarray(x, dtype=float)
    out = basis(x)
    return out[0] if x.ndim <= 1 and out.shape[0] == 1 else out
