"""Cubature weights on [0, 1] and what makes a rule stable.

A linear polyharmonic spline without polynomial terms reproduces the
trapezoidal rule exactly. Swapping in a Gaussian kernel and sweeping its
shape parameter shows weights turning negative in an intermediate band.
"""
import numpy as np

from rbfcubature import Kernel, RBFSpace, stability_report
from rbfcubature.pointsets import Rectangle, equidistant

ps = equidistant(Rectangle.unit(1), 11)

space = RBFSpace(Kernel.phs(1), [], ps, d=-1)
rule = space.weights()
print("linear PHS weights:", np.round(rule.weights, 12))
print(stability_report(rule, space.lebesgue(), space.cond()))

print("\nGaussian, N=11, d=0")
print(f"{'eps':>8} {'sum|w|':>10} {'min w':>11} stable")
for eps in (0.5, 2.0, 5.0, 10.0, 40.0):
    space = RBFSpace(Kernel.gauss(), np.full(len(ps), eps), ps, d=0)
    w = space.weights().weights
    print(f"{eps:8.1f} {np.abs(w).sum():10.4f} {w.min():11.3e} {bool(w.min() >= -1e-12 * np.abs(w).sum())}")
