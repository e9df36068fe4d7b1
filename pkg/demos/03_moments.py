"""Kernel moments: closed forms against adaptive quadrature."""
from rbfcubature import Kernel
from rbfcubature.moments import moment_closed_form, moment_quadrature
from rbfcubature.pointsets import Rectangle

cases = [
    (Kernel.gauss(), 3.0, [0.2], Rectangle.unit(1)),
    (Kernel.phs(3), 1.0, [0.7], Rectangle.unit(1)),
    (Kernel.phs(2), 1.0, [0.5], Rectangle.unit(1)),
    (Kernel.gauss(), 2.0, [0.3, 0.6], Rectangle.unit(2)),
    (Kernel.phs(2), 1.0, [0.3, 0.6], Rectangle.unit(2)),
    (Kernel.phs(7), 1.0, [0.9, 0.1], Rectangle.unit(2)),
    (Kernel.wendland(2, 1), 4.0, [0.1, 0.5], Rectangle.unit(2)),
]
for kern, eps, xn, rect in cases:
    closed = moment_closed_form(kern, eps, xn, rect)
    quad = moment_quadrature(kern, eps, xn, rect)
    shown = "n/a" if closed is None else f"{closed:.15f}"
    print(f"{kern.token():>10} {rect.dim}-D xn={xn}: closed {shown:>18}  quadrature {quad:.15f}")
