"""
Radial kernels used to build RBF interpolants and cubature rules.

Every kernel here is evaluated on a *pre-scaled* radius: the caller passes
``eps * ||x - x_n||`` and shape handling lives in :mod:`rbfcubature.linsolve`
and :mod:`rbfcubature.moments`.

====================  ==========================================  =====
family                phi(r)                                      order
====================  ==========================================  =====
gauss                 exp(-r**2)                                  0
wendland:D:k          Wendland phi_{D,k}, support [0, 1]          0
phs:2k-1              r**(2k-1)                                   k
tps:2k                r**(2k) log r                               k+1
====================  ==========================================  =====

Wendland functions for D in {2, 3} share the D = 3 construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import xlogy

GAUSS = "gauss"
WENDLAND = "wendland"
PHS_ODD = "phs"
PHS_EVENLOG = "tps"

# Exact coefficient tables, (1 - r)^e * q(r) with q given lowest order first.
_WENDLAND_TABLE = {
    (1, 0): (1, (Fraction(1),)),
    (1, 1): (3, (Fraction(1), Fraction(3))),
    (1, 2): (5, (Fraction(1), Fraction(5), Fraction(8))),
    (3, 0): (2, (Fraction(1),)),
    (3, 1): (4, (Fraction(1), Fraction(4))),
    (3, 2): (6, (Fraction(1), Fraction(6), Fraction(35, 3))),
}


def wendland_coefficients(D: int, k: int) -> list[Fraction]:
    """Exact monomial coefficients (lowest order first) of phi_{D,k} on [0, 1].

    The polynomial is normalised so that phi(0) = 1.
    """
    key = (1 if D == 1 else 3, k)
    if D not in (1, 2, 3) or key not in _WENDLAND_TABLE:
        raise ValueError(f"Wendland function phi_{{{D},{k}}} is not available")
    e, q = _WENDLAND_TABLE[key]
    # expand (1 - r)^e
    base = [Fraction(math.comb(e, j) * (-1) ** j) for j in range(e + 1)]
    out = [Fraction(0)] * (len(base) + len(q) - 1)
    for i, bi in enumerate(base):
        for j, qj in enumerate(q):
            out[i + j] += bi * qj
    scale = out[0]
    return [c / scale for c in out]


def _wendland_factored(D: int, k: int):
    """``(e, q)`` with phi = (1 - r)^e q(r), q normalised so phi(0) = 1."""
    e, q = _WENDLAND_TABLE[(1 if D == 1 else 3, k)]
    return e, Polynomial([float(c / q[0]) for c in q])


@dataclass(frozen=True)
class Kernel:
    """A radial kernel family.

    Parameters
    ----------
    family : str
        One of ``"gauss"``, ``"wendland"``, ``"phs"`` (odd power r^(2k-1)) or
        ``"tps"`` (even power with logarithm, r^(2k) log r).
    k : int
        Smoothness index (Wendland) or power index (PHS). Ignored for gauss.
    D : int
        Space dimension parameter of the Wendland construction.
    """

    family: str
    k: int = 0
    D: int = 1

    def __post_init__(self):
        if self.family == WENDLAND:
            wendland_coefficients(self.D, self.k)
        elif self.family in (PHS_ODD, PHS_EVENLOG):
            if self.k < 1:
                raise ValueError("polyharmonic splines need k >= 1")
        elif self.family != GAUSS:
            raise ValueError(f"unknown kernel family {self.family!r}")

    # constructors -------------------------------------------------------
    @classmethod
    def gauss(cls) -> "Kernel":
        return cls(GAUSS)

    @classmethod
    def wendland(cls, D: int, k: int) -> "Kernel":
        return cls(WENDLAND, k=k, D=D)

    @classmethod
    def phs(cls, exponent: int) -> "Kernel":
        """Polyharmonic spline r**exponent (odd) or r**exponent log r (even)."""
        if exponent < 1:
            raise ValueError("PHS exponent must be positive")
        if exponent % 2:
            return cls(PHS_ODD, k=(exponent + 1) // 2)
        return cls(PHS_EVENLOG, k=exponent // 2)

    # properties ---------------------------------------------------------
    @property
    def is_phs(self) -> bool:
        return self.family in (PHS_ODD, PHS_EVENLOG)

    @property
    def exponent(self) -> int:
        """Power of r for PHS kernels."""
        if self.family == PHS_ODD:
            return 2 * self.k - 1
        if self.family == PHS_EVENLOG:
            return 2 * self.k
        raise AttributeError("only PHS kernels have an exponent")

    @property
    def order(self) -> int:
        """Order of conditional positive definiteness."""
        if self.family == PHS_ODD:
            return self.k
        if self.family == PHS_EVENLOG:
            return self.k + 1
        return 0

    @property
    def is_compact(self) -> bool:
        return self.family == WENDLAND

    def token(self) -> str:
        if self.family == GAUSS:
            return "gauss"
        if self.family == WENDLAND:
            return f"wendland:{self.D}:{self.k}"
        return f"{self.family}:{self.exponent}"

    def __str__(self):
        return self.token()

    # evaluation ---------------------------------------------------------
    def poly(self) -> Polynomial:
        """Wendland kernel as a float polynomial on [0, 1]."""
        if self.family != WENDLAND:
            raise AttributeError("only Wendland kernels are piecewise polynomial")
        return Polynomial([float(c) for c in wendland_coefficients(self.D, self.k)])

    def __call__(self, r):
        return kernel_eval(self, r)

    def radial_antiderivative(self, rho):
        """Return G(rho) = int_0^rho phi(r) r dr.

        Used by the polar reduction of two-dimensional moments.
        """
        rho = np.asarray(rho, dtype=float)
        if self.family == GAUSS:
            return -0.5 * np.expm1(-rho * rho)
        if self.family == WENDLAND:
            P = (self.poly() * Polynomial([0.0, 1.0])).integ()
            return P(np.minimum(rho, 1.0))
        p = self.exponent
        if self.family == PHS_ODD:
            return rho ** (p + 2) / (p + 2)
        # int r^(p+1) log r dr = rho^(p+2) (log rho/(p+2) - 1/(p+2)^2)
        return rho ** (p + 1) * xlogy(rho, rho) / (p + 2) - rho ** (p + 2) / (p + 2) ** 2


def kernel_eval(kernel: Kernel, r):
    """Evaluate ``phi(r)`` for a scalar or array of nonnegative radii."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("kernel radius must be nonnegative")
    fam = kernel.family
    if fam == GAUSS:
        out = np.exp(-r * r)
    elif fam == WENDLAND:
        # factored form avoids the cancellation of the expanded polynomial near r = 1
        e, q = _wendland_factored(kernel.D, kernel.k)
        t = np.clip(r, 0.0, 1.0)
        out = np.where(r < 1.0, (1.0 - t) ** e * q(t), 0.0)
    elif fam == PHS_ODD:
        out = r ** kernel.exponent
    else:
        # r^(2k-1) * log(r^r); log(r^r) is taken as xlogy(r, r) so that it
        # stays finite for large r and is exactly 0 at r = 0
        out = r ** (kernel.exponent - 1) * xlogy(r, r)
    return out if out.ndim else float(out)


def support_radius(kernel: Kernel, eps: float = 1.0) -> float:
    """Radius of ``supp phi(eps * r)``; infinite for global kernels."""
    if kernel.family == WENDLAND:
        if eps <= 0:
            raise ValueError("shape parameter must be positive")
        return 1.0 / eps
    return math.inf


def min_poly_degree(kernel: Kernel) -> int:
    """Smallest polynomial degree that makes the saddle system well posed."""
    return kernel.order - 1


def parse_kernel(token: str) -> Kernel:
    """Parse ``gauss``, ``wendland:D:k``, ``phs:<odd>`` or ``tps:<even>``."""
    parts = token.strip().lower().split(":")
    try:
        if parts[0] in ("gauss", "gaussian") and len(parts) == 1:
            return Kernel.gauss()
        if parts[0] == "wendland" and len(parts) == 3:
            return Kernel.wendland(int(parts[1]), int(parts[2]))
        if parts[0] == "phs" and len(parts) == 2:
            e = int(parts[1])
            if e % 2 == 1:
                return Kernel.phs(e)
        if parts[0] == "tps" and len(parts) == 2:
            e = int(parts[1])
            if e % 2 == 0 and e > 0:
                return Kernel.phs(e)
    except ValueError as err:
        raise ValueError(f"bad kernel token {token!r}: {err}") from None
    raise ValueError(f"unknown kernel token {token!r}")
