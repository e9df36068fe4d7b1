"""
RBF cubature rules: weights, cardinal functions and stability diagnostics.

For data points x_n, kernel translates phi_n and a polynomial basis p_k, the
weights solve

    A^T [w; v] = [I[phi_1], ..., I[phi_N], I[p_1], ..., I[p_K]]

with ``A`` the saddle matrix of :mod:`rbfcubature.linsolve`. ``w_n`` is the
integral of the n-th cardinal function, so ``sum(|w|)`` is the operator norm
of the rule and the rule is called stable when every weight is nonnegative.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .kernels import Kernel, kernel_eval, min_poly_degree
from .linsolve import (
    Factorization,
    SaddleSystem,
    SingularSystemError,
    assemble,
    condition_2norm,
)
from .moments import MomentVector, poly_moments, rbf_moments
from .pointsets import PointSet, separation
from .polybasis import DopBasis, MonomialBasis, build_dops

STABILITY_RTOL = 1e-12


def make_basis(ps: PointSet, d: int, kind: str = "monomial"):
    """Polynomial basis of degree ``d`` (``None`` for d = -1)."""
    if d < 0:
        return None
    if kind == "monomial":
        return MonomialBasis(d, ps.dim)
    if kind == "dop":
        return build_dops(ps, d, ps.rect.volume)
    raise ValueError(f"unknown basis kind {kind!r}")


class RBFSpace:
    """An interpolation space S_{N,d} with its factorised saddle matrix.

    Bundles the pieces every operation below needs so that a single LU
    factorisation serves weights, cardinal functions and Lebesgue estimates.
    """

    def __init__(self, kernel: Kernel, shapes, ps: PointSet, d: int, basis="monomial"):
        self.kernel = kernel
        self.ps = ps
        self.d = d
        self.basis = make_basis(ps, d, basis) if isinstance(basis, str) else basis
        self.system: SaddleSystem = assemble(kernel, shapes, ps, self.basis)
        self.shapes = self.system.shapes
        self._fact = None

    @property
    def N(self) -> int:
        return self.system.n

    @property
    def K(self) -> int:
        return self.system.k

    @property
    def fact(self) -> Factorization:
        if self._fact is None:
            self._fact = Factorization(self.system.A)
        return self._fact

    def moments(self, tol: float = 1e-12) -> MomentVector:
        return rbf_moments(self.kernel, self.shapes, self.ps, self.basis, tol)

    def weights(self, moments: MomentVector | None = None) -> "CubatureRule":
        m = self.moments() if moments is None else moments
        if len(m.rbf) != self.N or len(m.poly) != self.K:
            raise ValueError("moment vector does not match the space")
        rhs = np.concatenate([m.rbf, m.poly])
        sol, res = self.fact.solve(rhs, trans=True)
        return CubatureRule(self.ps, sol[: self.N], sol[self.N:], self.kernel, self.d,
                            self.shapes.copy(), residual=res)

    def cardinals(self, x, chunk: int = 4096) -> np.ndarray:
        """Cardinal functions at points ``x``; shape (M, N)."""
        x = np.asarray(x, dtype=float).reshape(-1, self.ps.dim)
        out = np.empty((len(x), self.N))
        for s in range(0, len(x), chunk):
            R = self.system.rows(x[s: s + chunk])
            C, _ = self.fact.solve(R.T, trans=True)
            out[s: s + chunk] = C[: self.N].T
        return out

    def lebesgue_grid(self, density: int | None = None) -> np.ndarray:
        rect = self.ps.rect
        if rect.dim == 1:
            n = density or 10 * self.N
            g = np.linspace(rect.lo[0], rect.hi[0], n)[:, None]
        else:
            n = density or 200
            gx = np.linspace(rect.lo[0], rect.hi[0], n)
            gy = np.linspace(rect.lo[1], rect.hi[1], n)
            X, Y = np.meshgrid(gx, gy, indexing="ij")
            g = np.column_stack([X.ravel(), Y.ravel()])
        return np.vstack([g, self.ps.points])

    def lebesgue(self, density: int | None = None) -> float:
        """Grid lower bound of sup_x sum_n |c_n(x)|."""
        x = self.lebesgue_grid(density)
        best = 0.0
        for s in range(0, len(x), 2048):
            best = max(best, float(np.abs(self.cardinals(x[s: s + 2048])).sum(axis=1).max()))
        return best

    def cond(self) -> float:
        return condition_2norm(self.system)


@dataclass
class CubatureRule:
    ps: PointSet
    weights: np.ndarray
    aux: np.ndarray
    kernel: Kernel
    degree: int
    shapes: np.ndarray = field(default_factory=lambda: np.zeros(0))
    residual: float = 0.0

    @property
    def domain(self):
        return self.ps.rect

    def __call__(self, values) -> float:
        """Apply the rule to function values at the data points."""
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))

    def integrate(self, f) -> float:
        return self(f(self.ps.points))

    def to_dict(self) -> dict:
        return {
            "points": self.ps.points.tolist(),
            "weights": self.weights.tolist(),
            "aux": self.aux.tolist(),
            "kernel": self.kernel.token(),
            "degree": int(self.degree),
            "domain": self.ps.rect.to_list(),
        }


@dataclass
class StabilityReport:
    sum_abs_weights: float
    cn_one: float
    i_norm: float
    min_weight: float
    lebesgue_estimate: float
    cond_a: float
    is_stable: bool
    lebesgue_bound_ok: bool = True
    lebesgue_audit_advisory: bool = False

    def to_dict(self) -> dict:
        return {
            "sum_abs_weights": self.sum_abs_weights,
            "cn_one": self.cn_one,
            "i_norm": self.i_norm,
            "min_weight": self.min_weight,
            "lebesgue_estimate": self.lebesgue_estimate,
            "cond_a": self.cond_a,
            "is_stable": self.is_stable,
        }


def is_stable_weights(w, rtol: float = STABILITY_RTOL) -> bool:
    """All weights >= -rtol * sum|w|."""
    w = np.asarray(w)
    return bool(w.min() >= -rtol * np.abs(w).sum())


# ------------------------------------------------------------------ functional API
def compute_weights(kernel: Kernel, shapes, ps: PointSet, d: int,
                    moments: MomentVector | None = None, basis="monomial") -> CubatureRule:
    """Cubature weights of the RBF interpolant augmented with P_d."""
    return RBFSpace(kernel, shapes, ps, d, basis).weights(moments)


def eval_cardinals(kernel: Kernel, shapes, ps: PointSet, d: int, x) -> np.ndarray:
    """Cardinal functions c_1..c_N at ``x``; shape (N,) for a single point."""
    out = RBFSpace(kernel, shapes, ps, d).cardinals(x)
    return out[0] if np.ndim(x) <= (1 if ps.dim == 2 else 0) else out


def lebesgue_estimate(kernel: Kernel, shapes, ps: PointSet, d: int, eval_grid_density=None) -> float:
    """Max of sum_n |c_n| over the default grid plus the data points.

    The grid has ``10 N`` points in 1-D and ``200 x 200`` in 2-D unless
    ``eval_grid_density`` overrides it; the result is a lower bound.
    """
    return RBFSpace(kernel, shapes, ps, d).lebesgue(eval_grid_density)


def stability_report(rule: CubatureRule, lebesgue: float = float("nan"),
                     cond_a: float = float("nan"), stability_tol: float | None = None) -> StabilityReport:
    w = rule.weights
    sum_abs = float(np.abs(w).sum())
    cn_one = float(w.sum())
    i_norm = rule.ps.rect.volume
    tol = STABILITY_RTOL * sum_abs if stability_tol is None else stability_tol
    bound_ok = True
    if np.isfinite(lebesgue):
        bound_ok = sum_abs <= i_norm * lebesgue * (1 + 1e-8)
    return StabilityReport(
        sum_abs_weights=sum_abs,
        cn_one=cn_one,
        i_norm=i_norm,
        min_weight=float(w.min()),
        lebesgue_estimate=float(lebesgue),
        cond_a=float(cond_a),
        is_stable=bool(w.min() >= -tol),
        lebesgue_bound_ok=bool(bound_ok),
        lebesgue_audit_advisory=bool(not np.isfinite(cond_a) or cond_a > 1e12),
    )


def report_json(rule: CubatureRule, report: StabilityReport) -> str:
    return json.dumps({**rule.to_dict(), **report.to_dict()}, indent=2)


# ------------------------------------------------------------------ compact support
class NonoverlapError(ValueError):
    """Some center lies inside the support of another translate."""

    def __init__(self, n: int, excess: float):
        super().__init__(f"supports overlap other centers: worst n={n}, 1/eps_n - h_n = {excess:.3e}")
        self.n = n
        self.excess = excess


def check_nonoverlap(ps: PointSet, shapes) -> None:
    """Raise unless 1/eps_n <= h_n for every center."""
    excess = 1.0 / np.asarray(shapes, dtype=float) - separation(ps)
    n = int(np.argmax(excess))
    # relative slack for the equidistant case eps = 1/h computed in floating point
    if excess[n] > 1e-12 * separation(ps)[n]:
        raise NonoverlapError(n, float(excess[n]))


def cardinal_explicit_compact(ps: PointSet, d: int, kernel: Kernel, shapes,
                              dops: DopBasis | None, m_index: int):
    """Coefficients of c_m when kernel translates vanish at the other centers.

    Returns ``(alpha, beta)`` with

        alpha_n = delta_mn - |Omega|/N * sum_k p_k(x_m) p_k(x_n),
        beta_k  = |Omega|/N * p_k(x_m),

    so that ``c_m = sum_n alpha_n phi_n + sum_k beta_k p_k`` in the DOP basis.
    """
    if not kernel.is_compact:
        raise ValueError("explicit cardinals need a compactly supported kernel")
    shapes = np.asarray(shapes, dtype=float)
    check_nonoverlap(ps, shapes)
    N = len(ps)
    alpha = np.zeros(N)
    alpha[m_index] = 1.0
    if d < 0:
        return alpha, np.zeros(0)
    if dops is None:
        dops = build_dops(ps, d, ps.rect.volume)
    scale = ps.rect.volume / N
    Pv = dops(ps.points)  # (N, K)
    beta = scale * Pv[m_index]
    alpha -= Pv @ beta
    return alpha, beta


def eval_expansion(kernel: Kernel, shapes, ps: PointSet, basis, alpha, beta, x) -> np.ndarray:
    """Evaluate ``sum_n alpha_n phi_n(x) + sum_k beta_k p_k(x)``."""
    from scipy.spatial.distance import cdist

    x = np.asarray(x, dtype=float).reshape(-1, ps.dim)
    eps = np.asarray(shapes, dtype=float) if len(shapes) else 1.0
    out = kernel_eval(kernel, cdist(x, ps.points) * eps) @ alpha
    if len(beta):
        out = out + basis(x) @ beta
    return out


@dataclass
class TheoremCheck:
    min_weight: float
    sum_abs_weights: float
    all_nonnegative: bool
    equal_moment_residual: float
    equal_moments: bool
    nonoverlap: bool


def theorem_check(ps: PointSet, d: int, kernel: Kernel, shapes,
                  moments: MomentVector | None = None) -> TheoremCheck:
    """Nonnegativity of the weights for a compactly supported configuration.

    Hypothesis violations (overlap, unequal moments) are reported, not raised.
    """
    space = RBFSpace(kernel, shapes, ps, d)
    m = space.moments() if moments is None else moments
    rule = space.weights(m)
    w = rule.weights
    mean = float(np.mean(m.rbf))
    resid = float(np.max(np.abs(m.rbf - mean)) / abs(mean))
    try:
        check_nonoverlap(ps, space.shapes)
        nonoverlap = True
    except NonoverlapError:
        nonoverlap = False
    return TheoremCheck(
        min_weight=float(w.min()),
        sum_abs_weights=float(np.abs(w).sum()),
        all_nonnegative=is_stable_weights(w),
        equal_moment_residual=resid,
        equal_moments=resid <= 1e-10,
        nonoverlap=nonoverlap,
    )


# ------------------------------------------------------------------ polynomial decomposition
class RankDeficientError(np.linalg.LinAlgError):
    pass


def bayona_decompose(kernel: Kernel, shapes, ps: PointSet, d: int,
                     moments: MomentVector | None = None, basis="monomial"):
    """Split augmented weights into pure-RBF weights and a polynomial correction.

    Returns ``(w_pure, correction, w_aug)`` with ``w_aug = w_pure - correction``
    and ``correction = B I[tau]``, ``B = Phi^-T P (P^T Phi^-T P)^-1``,
    ``I[tau] = P^T w_pure - I[p]``.
    """
    if kernel.is_phs and kernel.order > d + 1:
        raise RankDeficientError(
            f"{kernel} has min_poly_degree {min_poly_degree(kernel)}; "
            f"d = {d} leaves Phi possibly singular")
    b = make_basis(ps, d, basis) if isinstance(basis, str) else basis
    sys = assemble(kernel, shapes, ps, b)
    m = rbf_moments(kernel, sys.shapes, ps, b) if moments is None else moments
    try:
        fphi = Factorization(sys.Phi)
    except SingularSystemError as err:
        raise RankDeficientError(f"Phi is singular (pivot {err.pivot})") from None
    w_pure, _ = fphi.solve(m.rbf, trans=True)
    if sys.k == 0:
        return w_pure, np.zeros_like(w_pure), w_pure.copy()
    P = sys.P
    PhiInvP, _ = fphi.solve(P, trans=True)
    S = P.T @ PhiInvP
    try:
        fS = Factorization(S)
    except SingularSystemError as err:
        raise RankDeficientError(f"P^T Phi^-1 P is singular (pivot {err.pivot})") from None
    tau = P.T @ w_pure - m.poly
    coef, _ = fS.solve(tau)
    correction = PhiInvP @ coef
    return w_pure, correction, w_pure - correction
