"""
Parameter sweeps over shape parameters and point counts.

Each sweep returns plain row dictionaries in a deterministic order; the CLI
writes them as CSV. Trial ``t`` of a run with seed ``s`` draws its test
function parameters (and noise) from ``default_rng([s, t])``, so a trial sees
the same integrand at every shape parameter.
"""
from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cubature import RBFSpace, is_stable_weights
from .kernels import Kernel, parse_kernel
from .linsolve import SVD_SIZE_CAP
from .moments import shape_parameters
from .pointsets import PointSet, Rectangle, make_pointset, separation
from .testfns import NoiseSpec, add_noise, make_function

log = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_SINGULAR = "singular"
STATUS_RANK = "rank_deficient"


@dataclass
class SweepConfig:
    kernel: str = "gauss"
    k: int | None = None
    degree: int = 0
    points: str = "equidistant"
    n: int = 20
    seed: int = 0
    domain: str = "0,1"
    eps_min: float = 1e-2
    eps_max: float = 1e2
    eps_num: int = 100
    shape_strategy: str = "constant"
    trials: int = 1
    noise: float = 0.0
    function: str = "genz1"
    n_list: list = field(default_factory=list)
    lebesgue: bool = True
    lebesgue_density: int | None = None
    jobs: int = 1
    out: str | None = None

    def validate(self) -> "SweepConfig":
        if self.eps_min <= 0 or self.eps_max <= 0:
            raise ValueError("shape parameters must be positive")
        if self.eps_num >= 2 and not self.eps_min < self.eps_max:
            raise ValueError("need eps_min < eps_max")
        if self.eps_num < 1 or self.trials < 1 or self.n < 1 or self.jobs < 1:
            raise ValueError("counts must be positive")
        if self.degree < -1:
            raise ValueError("degree must be >= -1")
        if self.noise < 0:
            raise ValueError("noise amplitude must be nonnegative")
        self.rect()
        self.resolve_kernel()
        return self

    def rect(self) -> Rectangle:
        return Rectangle.parse(self.domain) if isinstance(self.domain, str) else Rectangle.parse(
            ",".join(str(v) for v in self.domain))

    def resolve_kernel(self) -> Kernel:
        tok = self.kernel.lower()
        if tok == "wendland":
            return Kernel.wendland(self.rect().dim, 1 if self.k is None else self.k)
        if self.k is not None:
            if tok in ("phs", "tps"):
                return Kernel.phs(self.k)
        return parse_kernel(tok)

    def pointset(self, n: int | None = None) -> PointSet:
        return make_pointset(self.points, self.rect(), self.n if n is None else n, self.seed)

    def eps_grid(self) -> np.ndarray:
        if self.eps_num == 1:
            return np.array([float(self.eps_min)])
        return np.logspace(np.log10(self.eps_min), np.log10(self.eps_max), self.eps_num)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _pmap(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _space(cfg: SweepConfig, kernel: Kernel, ps: PointSet, eps: float) -> RBFSpace:
    shapes = shape_parameters(ps, eps, cfg.shape_strategy, kernel)
    return RBFSpace(kernel, shapes, ps, cfg.degree)


# ------------------------------------------------------------------ stability
STABILITY_COLUMNS = ["epsilon", "sum_abs_weights", "cn_one", "lebesgue_estimate", "cond_a",
                     "min_weight", "is_stable", "h_inv", "status"]


def _stability_row(args):
    cfg, eps = args
    kernel = cfg.resolve_kernel()
    ps = cfg.pointset()
    h_inv = 1.0 / float(separation(ps).max()) if kernel.is_compact and len(ps) > 1 else float("nan")
    row = dict(epsilon=float(eps), h_inv=h_inv)
    try:
        space = _space(cfg, kernel, ps, eps)
        rule = space.weights()
        w = rule.weights
        row.update(
            sum_abs_weights=float(np.abs(w).sum()),
            cn_one=float(w.sum()),
            lebesgue_estimate=space.lebesgue(cfg.lebesgue_density) if cfg.lebesgue else float("nan"),
            cond_a=space.cond() if space.N + space.K <= SVD_SIZE_CAP else float("nan"),
            min_weight=float(w.min()),
            is_stable=is_stable_weights(w),
            status=STATUS_OK,
        )
    except np.linalg.LinAlgError as err:
        log.info("eps=%g: %s", eps, err)
        row.update(sum_abs_weights=float("nan"), cn_one=float("nan"), lebesgue_estimate=float("nan"),
                   cond_a=float("inf"), min_weight=float("nan"), is_stable=False, status=STATUS_SINGULAR)
    return {c: row[c] for c in STABILITY_COLUMNS}


def stability_sweep(cfg: SweepConfig) -> list[dict]:
    """Stability measures over a log-spaced shape-parameter grid."""
    cfg.validate()
    return _pmap(_stability_row, [(cfg, e) for e in cfg.eps_grid()], cfg.jobs)


# ------------------------------------------------------------------ errors
def trial_functions(cfg: SweepConfig, dim: int):
    """Per-trial ``(f, exact, noise_spec)``, identical for every eps and N."""
    out = []
    for t in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, t])
        f, exact = make_function(cfg.function, rng, q=dim)
        noise_seed = int(rng.integers(2**63))
        out.append((f, exact, NoiseSpec(cfg.noise, noise_seed)))
    return out


def _errors_for_rule(rule, trials):
    pts = rule.ps.points
    clean, noisy = [], []
    for f, exact, noise in trials:
        vals = f(pts if pts.shape[1] > 1 else pts[:, 0])
        clean.append(abs(rule(vals) - exact))
        noisy.append(abs(rule(add_noise(vals, noise)) - exact))
    return clean, noisy


def _error_rows(args):
    cfg, eps = args
    kernel = cfg.resolve_kernel()
    ps = cfg.pointset()
    trials = trial_functions(cfg, ps.dim)
    try:
        rule = _space(cfg, kernel, ps, eps).weights()
    except np.linalg.LinAlgError:
        return [dict(epsilon=float(eps), trial=t, abs_error=float("nan"), noisy_abs_error=float("nan"),
                     sum_abs_weights=float("nan"), is_stable=False, status=STATUS_SINGULAR)
                for t in range(cfg.trials)]
    clean, noisy = _errors_for_rule(rule, trials)
    sabs = float(np.abs(rule.weights).sum())
    stable = is_stable_weights(rule.weights)
    return [dict(epsilon=float(eps), trial=t, abs_error=float(clean[t]), noisy_abs_error=float(noisy[t]),
                 sum_abs_weights=sabs, is_stable=stable, status=STATUS_OK) for t in range(cfg.trials)]


def error_sweep(cfg: SweepConfig):
    """Per-trial errors over the eps grid and per-eps medians.

    Returns ``(rows, aggregate)``; the noisy-error columns only carry
    information when ``cfg.noise > 0``.
    """
    cfg.validate()
    chunks = _pmap(_error_rows, [(cfg, e) for e in cfg.eps_grid()], cfg.jobs)
    rows = [r for chunk in chunks for r in chunk]
    agg = []
    for chunk in chunks:
        head = chunk[0]
        agg.append(dict(
            epsilon=head["epsilon"],
            median_abs_error=float(np.median([r["abs_error"] for r in chunk])),
            median_noisy_abs_error=float(np.median([r["noisy_abs_error"] for r in chunk])),
            sum_abs_weights=head["sum_abs_weights"],
            is_stable=head["is_stable"],
            status=head["status"],
        ))
    return rows, agg


def best_row(agg: list[dict], column: str = "median_abs_error") -> dict:
    """Aggregate row with the smallest finite value of ``column``."""
    ok = [r for r in agg if np.isfinite(r[column])]
    return min(ok, key=lambda r: r[column])


# ------------------------------------------------------------------ PHS convergence
def default_n_list(dim: int) -> list[int]:
    if dim == 1:
        return [5, 10, 20, 40, 80]
    return [m * m for m in (5, 10, 15, 20, 25)]


def _convergence_row(args):
    cfg, n = args
    kernel = cfg.resolve_kernel()
    ps = cfg.pointset(n)
    trials = trial_functions(cfg, ps.dim)
    try:
        rule = _space(cfg, kernel, ps, 1.0).weights()
    except np.linalg.LinAlgError:
        return dict(N=n, abs_error=float("nan"), sum_abs_weights=float("nan"), cn_one=float("nan"),
                    status=STATUS_SINGULAR)
    clean, _ = _errors_for_rule(rule, trials)
    return dict(N=n, abs_error=float(np.median(clean)), sum_abs_weights=float(np.abs(rule.weights).sum()),
                cn_one=float(rule.weights.sum()), status=STATUS_OK)


def convergence(cfg: SweepConfig) -> list[dict]:
    """Median error and stability of a PHS rule as N grows."""
    cfg.validate()
    if not cfg.resolve_kernel().is_phs:
        raise ValueError("convergence runs need a polyharmonic spline kernel")
    ns = list(cfg.n_list) or default_n_list(cfg.rect().dim)
    return _pmap(_convergence_row, [(cfg, n) for n in ns], cfg.jobs)


# ------------------------------------------------------------------ decomposition
def _bayona_row(args):
    from .cubature import RankDeficientError, bayona_decompose

    cfg, n = args
    kernel = cfg.resolve_kernel()
    ps = cfg.pointset(n)
    eps = cfg.eps_min
    try:
        shapes = shape_parameters(ps, eps, cfg.shape_strategy, kernel)
        w_pure, corr, w_aug = bayona_decompose(kernel, shapes, ps, cfg.degree)
        w = RBFSpace(kernel, shapes, ps, cfg.degree).weights().weights
    except (RankDeficientError, np.linalg.LinAlgError) as err:
        log.info("N=%d: %s", n, err)
        return dict(N=n, l1_norm_correction=float("nan"), identity_residual=float("nan"),
                    status=STATUS_RANK)
    return dict(N=n, l1_norm_correction=float(np.abs(corr).sum()),
                identity_residual=float(np.max(np.abs(w - w_aug))), status=STATUS_OK)


def bayona_sweep(cfg: SweepConfig) -> list[dict]:
    """Size of the polynomial correction ``B I[tau]`` as N grows (eps = eps_min)."""
    cfg.validate()
    ns = list(cfg.n_list) or default_n_list(cfg.rect().dim)
    return _pmap(_bayona_row, [(cfg, n) for n in ns], cfg.jobs)
