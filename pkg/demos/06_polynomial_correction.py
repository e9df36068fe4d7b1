"""Augmented weights as pure-kernel weights minus a polynomial correction."""
from rbfcubature.experiments import SweepConfig, bayona_sweep

for cfg in (SweepConfig(kernel="gauss", degree=1, eps_min=40.0, n_list=[25, 50, 100]),
            SweepConfig(kernel="phs:3", degree=1, n_list=[25, 50, 100, 200, 400])):
    print(cfg.kernel)
    for row in bayona_sweep(cfg):
        print(f"  N={row['N']:4d} |correction|_1={row['l1_norm_correction']:.3e} "
              f"identity residual={row['identity_residual']:.1e} {row['status']}")
