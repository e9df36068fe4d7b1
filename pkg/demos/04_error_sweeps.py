"""Error against shape parameter for Genz test integrands, with and without noise.

The noiseless optimum of a Gaussian rule usually sits where weights are
negative; with noisy data a larger, stable shape parameter wins.
"""
from rbfcubature.experiments import SweepConfig, best_row, error_sweep

cfg = SweepConfig(kernel="gauss", degree=0, n=225, domain="0,1,0,1", eps_min=0.5, eps_max=50,
                  eps_num=30, trials=10, function="genz1", noise=1e-4)
_, agg = error_sweep(cfg)
clean = best_row(agg, "median_abs_error")
noisy = best_row(agg, "median_noisy_abs_error")
print(f"noiseless best: eps={clean['epsilon']:.3g} error={clean['median_abs_error']:.2e} "
      f"sum|w|={clean['sum_abs_weights']:.3g} stable={clean['is_stable']}")
print(f"noisy best:     eps={noisy['epsilon']:.3g} error={noisy['median_noisy_abs_error']:.2e} "
      f"sum|w|={noisy['sum_abs_weights']:.3g} stable={noisy['is_stable']}")
