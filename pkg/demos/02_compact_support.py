"""Compactly supported kernels at and beyond the 1/h threshold.

Once every translate vanishes at the other centers the cardinal functions
have an explicit form and the weights are nonnegative, with or without
low-degree polynomial terms.
"""
import numpy as np

from rbfcubature import Kernel, RBFSpace, shape_parameters
from rbfcubature.cubature import cardinal_explicit_compact, eval_expansion, theorem_check
from rbfcubature.pointsets import Rectangle, equidistant
from rbfcubature.polybasis import build_dops

kern = Kernel.wendland(1, 1)
ps = equidistant(Rectangle.unit(1), 100)
h = 1 / 99

for strategy in ("constant", "boundary-halved"):
    shapes = shape_parameters(ps, 1 / h, strategy, kern)
    for d in (-1, 0, 1):
        chk = theorem_check(ps, d, kern, shapes)
        print(f"{strategy:>15} d={d:2d}: min weight {chk.min_weight:.3e}, nonoverlap={chk.nonoverlap}")

# explicit cardinal vs the linear solve, constant shapes
shapes = np.full(100, 1 / h)
dops = build_dops(ps, 1, 1.0)
x = np.linspace(0, 1, 1000)
C = RBFSpace(kern, shapes, ps, 1, basis=dops).cardinals(x)
alpha, beta = cardinal_explicit_compact(ps, 1, kern, shapes, dops, 40)
diff = np.max(np.abs(eval_expansion(kern, shapes, ps, dops, alpha, beta, x) - C[:, 40]))
print(f"\nexplicit vs solved cardinal c_40: max difference {diff:.2e}")
