"""Benchmark experiments: compressed sensing, deblurring, sweeps, penalty ratios.

Every experiment is driven by an :class:`ExperimentConfig` and returns a
:class:`BenchResult` holding tidy result rows (one per method and trial),
aggregate summaries, and any reconstructed images.  Regularization weights
are tuned by oracle grid search: the grid point minimizing the error against
the known ground truth wins.  Trials derive their randomness from
``SeedSequence([seed, point_index, trial])``, so serial and parallel runs
produce identical numbers.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import dwt, grouping, linop, penalty, solver
from ..errors import ConfigError, DimensionError
from .config import ExperimentConfig
from .pgm import read_pgm, write_pgm
from .signals import gen_piecewise_constant, gen_toy_image

logger = logging.getLogger("wavelasso.bench")

CSV_COLUMNS = (
    "experiment",
    "method",
    "sigma2",
    "m",
    "trial",
    "lambda",
    "tau",
    "err_coeff",
    "mse_image",
    "iters",
    "seconds",
)


@dataclass
class BenchResult:
    """Rows for results.csv, aggregate summary, and image outputs."""

    experiment: str
    rows: list
    summary: dict
    images: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)


def lambda_grid(lam_max, points, min_frac):
    """Descending log-spaced grid from ``lam_max`` down to ``lam_max*min_frac``."""
    return lam_max * min_frac ** np.linspace(0.0, 1.0, points)


def tau_values(op_norm, points):
    """Coupling-weight grid: ``tau^2 = 10**(k/2) * op_norm^2``.

    A single point uses k=4 (``tau^2`` a hundred times the spectral
    estimate); seven points span k = 0..6; other counts spread evenly.
    """
    if points == 1:
        ks = np.array([4.0])
    elif points >= 7:
        ks = np.arange(points, dtype=np.float64)
    else:
        ks = np.round(np.linspace(0.0, 6.0, points))
    return op_norm * 10.0 ** (0.25 * ks)


def _solver_config(cfg):
    return solver.SolverConfig(max_iters=cfg.max_iters, rel_obj_tol=cfg.rel_obj_tol)


def _make_problem(method, A, y, repmap, lam, tau):
    if method == "L":
        return solver.lasso_problem(A, y, lam)
    if method == "OGLR":
        return solver.oglr_problem(A, y, lam, repmap)
    if method == "OGL":
        return solver.ogl_problem(A, y, lam, tau, repmap)
    raise ConfigError(f"unknown method {method!r}")


def fit_method(method, A, y, repmap, lam_grid_values, taus, scfg, score_fn):
    """Oracle-tuned reconstruction: best (lambda, tau) over the grids.

    The lambda grid is swept in descending order with warm starts; the tau
    grid (ascending, OGL only) additionally warm-starts each solve from the
    previous tau's solution at the same lambda -- continuation keeps the
    strongly coupled solves cheap.  Returns a dict with the winning
    parameters, collapsed solution, score, and the iteration count of the
    winning solve.
    """
    tau_list = sorted(taus) if method == "OGL" else [0.0]
    best = None
    prev_solutions = None
    for tau in tau_list:
        prob = _make_problem(method, A, y, repmap, lam_grid_values[0], tau)
        x0 = None
        solutions = []
        for li, lam in enumerate(lam_grid_values):
            prob.penalty.weight = lam
            if prev_solutions is not None:
                x0 = prev_solutions[li]
            report = solver.solve(prob, scfg, x0=x0)
            x0 = report.solution
            solutions.append(report.solution)
            theta_hat = report.collapsed
            score = score_fn(theta_hat)
            if best is None or score < best["score"]:
                best = {
                    "score": score,
                    "lambda": float(lam),
                    "tau": float(tau),
                    "lam_index": li,
                    "theta": theta_hat,
                    "iters": report.iterations,
                }
        prev_solutions = solutions
    if len(lam_grid_values) > 1 and best["lam_index"] in (0, len(lam_grid_values) - 1):
        logger.warning(
            "%s: selected lambda sits at grid boundary (index %d of %d)",
            method,
            best["lam_index"],
            len(lam_grid_values),
        )
    return best


def _levels_or_full(cfg, size_pow2):
    return cfg.levels if cfg.levels else size_pow2.bit_length() - 1


def _structures_1d(cfg):
    layout = dwt.Layout1D(cfg.n, _levels_or_full(cfg, cfg.n))
    scheme = grouping.scheme_for(layout, cfg.grouping)
    gs = grouping.make_groups(grouping.build_binary_tree(layout), scheme, layout)
    return layout, grouping.make_replication_map(gs)

def _structures_2d(cfg, rows, cols):
    layout = dwt.Layout2D(rows, cols, _levels_or_full(cfg, min(rows, cols)))
    scheme = grouping.scheme_for(layout, cfg.grouping)
    gs = grouping.make_groups(grouping.build_quadtree(layout), scheme, layout)
    return layout, grouping.make_replication_map(gs)


def _sweep_trial(cfg, point_index, trial):
    """One (grid point, trial) cell of a sweep; returns one row per method."""
    is_noise = cfg.experiment.startswith("noise_sweep")
    is_2d = cfg.experiment.endswith("2d")
    if is_noise:
        sigma2 = cfg.sigma2[point_index]
        m = cfg.m[0]
    else:
        sigma2 = cfg.sigma2[0]
        m = cfg.m[point_index]

    seed_seq = np.random.SeedSequence([cfg.seed, point_index, trial])
    sig_ss, mat_ss, noise_ss = seed_seq.spawn(3)
    if is_2d:
        layout, repmap = _structures_2d(cfg, cfg.rows, cfg.cols)
        x = gen_toy_image((cfg.rows, cfg.cols), sig_ss)
    else:
        layout, repmap = _structures_1d(cfg)
        x = gen_piecewise_constant(cfg.n, cfg.max_jumps, sig_ss)
    theta_star = dwt.analyze(x, layout)

    sensing = linop.gaussian_sensing(m, layout.size, mat_ss)
    A = linop.compose_with_synthesis(sensing, layout)
    y = sensing.apply(np.ravel(x))
    if sigma2 > 0:
        y = y + np.sqrt(sigma2) * np.random.default_rng(noise_ss).standard_normal(m)

    lam_max = float(np.max(np.abs(A.adjoint(y))))
    lams = lambda_grid(lam_max, cfg.lambda_points, cfg.lambda_min_frac)
    taus = ()
    if "OGL" in cfg.methods:
        taus = tau_values(linop.spectral_norm_estimate(A, 20, seed=0), cfg.tau_points)
    scfg = _solver_config(cfg)

    def score_fn(theta_hat):
        d = theta_star - theta_hat
        return float(np.dot(d, d))

    rows = []
    for method in cfg.methods:
        t0 = time.perf_counter()
        best = fit_method(method, A, y, repmap, lams, taus, scfg, score_fn)
        elapsed = time.perf_counter() - t0
        mse_image = None
        if is_2d:
            diff = dwt.synthesize(best["theta"], layout) - x
            mse_image = float(np.mean(diff**2))
        rows.append(
            {
                "experiment": cfg.experiment,
                "method": method,
                "sigma2": sigma2,
                "m": m,
                "trial": trial,
                "lambda": best["lambda"],
                "tau": best["tau"] if method == "OGL" else None,
                "err_coeff": best["score"],
                "mse_image": mse_image,
                "iters": best["iters"],
                "seconds": elapsed,
            }
        )
    return rows


def _run_sweep(cfg):
    points = cfg.sigma2 if cfg.experiment.startswith("noise_sweep") else cfg.m
    jobs = [(pi, t) for pi in range(len(points)) for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(
                pool.map(_sweep_trial, [cfg] * len(jobs), *zip(*jobs), chunksize=4)
            )
    else:
        chunks = [_sweep_trial(cfg, pi, t) for pi, t in jobs]

    rows = [row for chunk in chunks for row in chunk]
    summary = {}
    for pi, point in enumerate(points):
        for method in cfg.methods:
            errs = [
                r["err_coeff"]
                for r in rows
                if r["method"] == method
                and r[("sigma2" if cfg.experiment.startswith("noise_sweep") else "m")]
                == point
            ]
            summary[(point, method)] = float(np.mean(errs))
    lines = [f"{cfg.experiment}: mean err_coeff over {cfg.trials} trials"]
    for point in points:
        cells = "  ".join(
            f"{method}={summary[(point, method)]:.6g}" for method in cfg.methods
        )
        label = "sigma2" if cfg.experiment.startswith("noise_sweep") else "m"
        lines.append(f"  {label}={point}: {cells}")
    return BenchResult(cfg.experiment, rows, summary, lines=lines)


def run_noise_sweep_1d(cfg):
    return _run_sweep(cfg)


def run_noise_sweep_2d(cfg):
    return _run_sweep(cfg)


def run_measurement_sweep_1d(cfg):
    return _run_sweep(cfg)


def _load_image(cfg):
    if not cfg.image:
        raise ConfigError(f"experiment {cfg.experiment} needs an image path (image=...)")
    return read_pgm(cfg.image)


def run_cs_image(cfg):
    """Tile-wise compressed sensing of an image, one Gaussian matrix per tile."""
    img = _load_image(cfg)
    tile = cfg.tile
    if img.shape[0] % tile or img.shape[1] % tile:
        raise DimensionError(f"image shape {img.shape} not divisible by tile {tile}")
    layout, repmap = _structures_2d(cfg, tile, tile)
    scfg = _solver_config(cfg)
    tiles_r = img.shape[0] // tile
    tiles_c = img.shape[1] // tile

    recon = {method: np.zeros_like(img) for method in cfg.methods}
    rows = []
    for ti in range(tiles_r * tiles_c):
        tr, tc = divmod(ti, tiles_c)
        x_tile = img[tr * tile : (tr + 1) * tile, tc * tile : (tc + 1) * tile]
        theta_star = dwt.analyze(x_tile, layout)
        mat_ss, noise_ss = np.random.SeedSequence([cfg.seed, ti]).spawn(2)
        sensing = linop.gaussian_sensing(cfg.samples_per_tile, layout.size, mat_ss)
        A = linop.compose_with_synthesis(sensing, layout)
        y = sensing.apply(x_tile.ravel())
        if cfg.image_sigma2 > 0:
            y = y + np.sqrt(cfg.image_sigma2) * np.random.default_rng(
                noise_ss
            ).standard_normal(cfg.samples_per_tile)

        lam_max = float(np.max(np.abs(A.adjoint(y))))
        lams = lambda_grid(lam_max, cfg.lambda_points, cfg.lambda_min_frac)
        taus = ()
        if "OGL" in cfg.methods:
            taus = tau_values(linop.spectral_norm_estimate(A, 20, seed=0), cfg.tau_points)

        def score_fn(theta_hat):
            diff = dwt.synthesize(theta_hat, layout) - x_tile
            return float(np.mean(diff**2))

        for method in cfg.methods:
            t0 = time.perf_counter()
            best = fit_method(method, A, y, repmap, lams, taus, scfg, score_fn)
            elapsed = time.perf_counter() - t0
            patch = dwt.synthesize(best["theta"], layout)
            recon[method][tr * tile : (tr + 1) * tile, tc * tile : (tc + 1) * tile] = patch
            d = theta_star - best["theta"]
            rows.append(
                {
                    "experiment": cfg.experiment,
                    "method": method,
                    "sigma2": cfg.image_sigma2,
                    "m": cfg.samples_per_tile,
                    "trial": ti,
                    "lambda": best["lambda"],
                    "tau": best["tau"] if method == "OGL" else None,
                    "err_coeff": float(np.dot(d, d)),
                    "mse_image": best["score"],
                    "iters": best["iters"],
                    "seconds": elapsed,
                }
            )

    summary = {
        method: float(np.mean((recon[method] - img) ** 2)) for method in cfg.methods
    }
    images = {"original": img}
    images.update({f"recon_{method}": recon[method] for method in cfg.methods})
    lines = [f"cs_image: {cfg.samples_per_tile} samples per {tile}x{tile} tile"]
    lines += [f"  {method}: MSE={summary[method]:.6g}" for method in cfg.methods]
    return BenchResult(cfg.experiment, rows, summary, images=images, lines=lines)


def run_deblur_image(cfg):
    """Deconvolution of a blurred full image with wavelet-domain penalties."""
    img = _load_image(cfg)
    layout, repmap = _structures_2d(cfg, img.shape[0], img.shape[1])
    scfg = _solver_config(cfg)
    theta_star = dwt.analyze(img, layout)

    blur = linop.gaussian_blur(img.shape, cfg.blur_variance)
    A = linop.compose_with_synthesis(blur, layout)
    y = blur.apply(img.ravel())
    if cfg.image_sigma2 > 0:
        (noise_ss,) = np.random.SeedSequence([cfg.seed, 0]).spawn(1)
        y = y + np.sqrt(cfg.image_sigma2) * np.random.default_rng(
            noise_ss
        ).standard_normal(y.shape[0])

    lam_max = float(np.max(np.abs(A.adjoint(y))))
    lams = lambda_grid(lam_max, cfg.lambda_points, cfg.lambda_min_frac)
    taus = ()
    if "OGL" in cfg.methods:
        taus = tau_values(linop.spectral_norm_estimate(A, 20, seed=0), cfg.tau_points)

    def score_fn(theta_hat):
        diff = dwt.synthesize(theta_hat, layout) - img
        return float(np.mean(diff**2))

    rows = []
    summary = {}
    images = {"original": img, "blurred": y.reshape(img.shape)}
    for method in cfg.methods:
        t0 = time.perf_counter()
        best = fit_method(method, A, y, repmap, lams, taus, scfg, score_fn)
        elapsed = time.perf_counter() - t0
        images[f"recon_{method}"] = dwt.synthesize(best["theta"], layout)
        d = theta_star - best["theta"]
        summary[method] = best["score"]
        rows.append(
            {
                "experiment": cfg.experiment,
                "method": method,
                "sigma2": cfg.image_sigma2,
                "m": layout.size,
                "trial": 0,
                "lambda": best["lambda"],
                "tau": best["tau"] if method == "OGL" else None,
                "err_coeff": float(np.dot(d, d)),
                "mse_image": best["score"],
                "iters": best["iters"],
                "seconds": elapsed,
            }
        )
    lines = [f"deblur_image: blur variance {cfg.blur_variance}"]
    lines += [f"  {method}: MSE={summary[method]:.6g}" for method in cfg.methods]
    return BenchResult(cfg.experiment, rows, summary, images=images, lines=lines)


def run_penalty_ratio(cfg):
    """Structured-vs-scrambled penalty ratios of an image's coefficients."""
    img = _load_image(cfg)
    levels = _levels_or_full(cfg, min(img.shape))
    theta = dwt.forward2d(img, levels)
    scrambled = penalty.scramble_details(theta, cfg.seed)

    summary = {}
    table_rows = []
    lines = []
    for scheme in ("pc4", "pc2"):
        gs = grouping.make_groups(grouping.build_quadtree(theta.layout), scheme, theta.layout)
        repmap = grouping.make_replication_map(gs)
        ratios = penalty.penalty_ratio(theta.data, scrambled.data, gs, repmap)
        summary[scheme] = ratios
        for name, value in zip(("lasso", "group", "replication"), ratios):
            table_rows.append({"scheme": scheme, "penalty": name, "ratio": value})
        lines.append(
            f"penalty ratios ({scheme}): lasso {ratios.l1:.2f}; "
            f"group lasso {ratios.group:.2f}; "
            f"group lasso with replication {ratios.replication:.2f}"
        )
    tables = {"ratios.csv": (("scheme", "penalty", "ratio"), table_rows)}
    return BenchResult(cfg.experiment, [], summary, tables=tables, lines=lines)


RUNNERS = {
    "cs_image": run_cs_image,
    "deblur_image": run_deblur_image,
    "noise_sweep_1d": run_noise_sweep_1d,
    "noise_sweep_2d": run_noise_sweep_2d,
    "measurement_sweep_1d": run_measurement_sweep_1d,
    "penalty_ratio": run_penalty_ratio,
}


def run_experiment(cfg: ExperimentConfig) -> BenchResult:
    return RUNNERS[cfg.experiment](cfg)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_outputs(result: BenchResult, cfg: ExperimentConfig):
    """Write results.csv, timings.csv, extra tables and PGM images.

    results.csv is byte-reproducible for a fixed config and seed: the
    ``seconds`` column is zeroed unless ``timing = true``.  Measured wall
    times always go to timings.csv, which is exempt from that guarantee.
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if result.rows:
        path = out / "results.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for row in result.rows:
                values = dict(row)
                if not cfg.timing:
                    values["seconds"] = 0.0
                fh.write(",".join(_fmt(values[c]) for c in CSV_COLUMNS) + "\n")
        written.append(path)

        tpath = out / "timings.csv"
        with open(tpath, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("experiment,method,sigma2,m,trial,seconds\n")
            for row in result.rows:
                fh.write(
                    ",".join(
                        _fmt(row[c])
                        for c in ("experiment", "method", "sigma2", "m", "trial", "seconds")
                    )
                    + "\n"
                )
        written.append(tpath)

    for name, (header, rows) in result.tables.items():
        path = out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row[c]) for c in header) + "\n")
        written.append(path)

    for name, img in result.images.items():
        path = out / f"{name}.pgm"
        write_pgm(path, img)
        written.append(path)
    return written
