"""Polyharmonic splines need no shape parameter and converge as N grows."""
from rbfcubature.experiments import SweepConfig, convergence

for kernel in ("phs:3", "tps:2", "phs:5"):
    cfg = SweepConfig(kernel=kernel, degree=1, domain="0,1,0,1", trials=10, function="genz4",
                      n_list=[25, 100, 225, 400])
    print(kernel)
    for row in convergence(cfg):
        print(f"  N={row['N']:4d} median error {row['abs_error']:.2e} "
              f"sum|w|/C_N[1] {row['sum_abs_weights'] / row['cn_one']:.4f}")
