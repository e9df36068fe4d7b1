"""
Integrands with known integrals: Genz families 1-4, a Runge-type bump, and
seeded uniform noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf


@dataclass(frozen=True)
class GenzFunction:
    family: int
    a: tuple
    b: tuple

    def __post_init__(self):
        if self.family not in (1, 2, 3, 4):
            raise ValueError("Genz family must be 1, 2, 3 or 4")
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        if len(a) != len(b):
            raise ValueError("a and b must have the same length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def q(self) -> int:
        return len(self.a)

    @classmethod
    def random(cls, family: int, rng: np.random.Generator, q: int = 2) -> "GenzFunction":
        """Draw ``a`` and ``b`` i.i.d. uniform on [0, 1]^q."""
        a = rng.random(q)
        b = rng.random(q)
        return cls(family, tuple(a), tuple(b))

    def __call__(self, x):
        return genz_eval(self, x)

    def exact(self) -> float:
        return genz_exact(self)


def genz_eval(g: GenzFunction, x):
    """Evaluate ``g`` at one point (shape (q,)) or many (shape (M, q))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = x.reshape(-1, g.q)
    a = np.array(g.a)
    b = np.array(g.b)
    if g.family == 1:
        out = np.cos(2 * np.pi * b[0] + x @ a)
    elif g.family == 2:
        with np.errstate(divide="ignore"):
            inv_a2 = 1.0 / a**2
        out = np.prod(1.0 / (inv_a2 + (x - b) ** 2), axis=1)
    elif g.family == 3:
        out = (1.0 + x @ a) ** (-(g.q + 1))
    else:
        out = np.exp(-np.sum(a**2 * (x - b) ** 2, axis=1))
    return float(out[0]) if single else out


def _oscillatory_factor(a: float) -> complex:
    # int_0^1 exp(i a t) dt, finite at a = 0
    return np.exp(0.5j * a) * np.sinc(a / (2 * np.pi))


def _gauss_factor(a: float, b: float) -> float:
    # int_0^1 exp(-a^2 (t - b)^2) dt
    if a == 0:
        return 1.0
    return math.sqrt(math.pi) / (2 * a) * (erf(a * (1 - b)) + erf(a * b))


def genz_exact(g: GenzFunction) -> float:
    """Exact integral over the unit square (q = 2)."""
    if g.q != 2:
        raise ValueError("closed forms are implemented for q = 2")
    (a1, a2), (b1, b2) = g.a, g.b
    if g.family == 1:
        z = np.exp(2j * np.pi * b1) * _oscillatory_factor(a1) * _oscillatory_factor(a2)
        return float(z.real)
    if g.family == 2:
        return float(np.prod([a * (math.atan(a * (1 - b)) + math.atan(a * b))
                              for a, b in zip(g.a, g.b)]))
    if g.family == 3:
        # (1 + a1 x + a2 y)^-3 integrates to this without any division by a_i
        return (2 + a1 + a2) / (2 * (1 + a1) * (1 + a2) * (1 + a1 + a2))
    return _gauss_factor(a1, b1) * _gauss_factor(a2, b2)


RUNGE_C = 1.0 / (math.atan(0.75) + math.atan(0.25))


def runge_normalized(x):
    """``c / (1 + (x - 0.25)^2)`` with ``c`` chosen so the integral over [0, 1] is 1."""
    x = np.asarray(x, dtype=float)
    out = RUNGE_C / (1.0 + (x - 0.25) ** 2)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class NoiseSpec:
    amplitude: float = 0.0
    seed: int = 0


def add_noise(values, spec: NoiseSpec):
    """Add i.i.d. uniform noise on [-amplitude, amplitude]."""
    values = np.asarray(values, dtype=float)
    if spec.amplitude < 0:
        raise ValueError("noise amplitude must be nonnegative")
    if spec.amplitude == 0:
        return values.copy()
    rng = np.random.default_rng(spec.seed)
    return values + rng.uniform(-spec.amplitude, spec.amplitude, size=values.shape)


def make_function(token: str, rng: np.random.Generator | None = None, q: int = 2):
    """Resolve ``genz1``..``genz4`` (random parameters) or ``runge``.

    Returns ``(callable, exact_integral)``.
    """
    token = token.lower()
    if token == "runge":
        return runge_normalized, 1.0
    if token.startswith("genz") and token[4:] in ("1", "2", "3", "4"):
        g = GenzFunction.random(int(token[4:]), rng or np.random.default_rng(0), q)
        return g, g.exact()
    raise ValueError(f"unknown test function {token!r}")
