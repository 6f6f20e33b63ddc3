"""Reproducible experiment driver.

Subcommands::

    tessellate      sample one tessellation; JSON tree dump + leaf statistics
    kernel          empirical-vs-limit kernel sweep and limit-kernel contour grids
    kernel-converge the sweep half of ``kernel``
    kernel-grid     the contour half of ``kernel``
    project-verify  direct vs lifted simulator equivalence report
    density         forest density fits with kernel overlays and error trends
    regress         forest regression fits and error trends
    density-fit     alias of ``density``
    regress-fit     alias of ``regress``
    acceptance      the full seeded acceptance suite

Common flags: ``--config PATH`` (JSON overrides merged over the command's
defaults), ``--seed INT`` (mandatory for every command except acceptance,
which pins its own seeds), ``--out DIR``, ``--quick``, ``--no-figures``.

Every artifact is a pure function of (config, seed): CSV floats use
round-trip ``repr``, JSON field order is fixed, and timings go to stdout
plus a ``timing.log`` sidecar that is excluded from determinism checks.
Exit codes: 0 success, 1 validation error, 2 criterion failure, 3 I/O
error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import plotting
from .acceptance import (
    CRITERIA,
    EXAMPLE_DIRECTIONS,
    kernel_convergence_sweep,
    projection_equivalence,
    run_criteria,
)
from .data import (
    density_generator,
    load_points_csv,
    sine_regression_sample,
    sine_truth,
)
from .errors import ConfigError, DataFormatError, StitKitError
from .forests import (
    DensityForest,
    RegressionForest,
    infinite_forest_density,
    l1_error,
    l2_error,
    laplace_kde,
)
from .geometry import Polytope
from .kernels import FixedLifetime, KernelSpec, hoeffding_envelope
from .measures import from_directions, isotropic, measure_from_spec, mondrian
from .reporting import RunReport, write_csv, write_json
from .stats import binomial_se
from .tessellation import sample_stit

_EXAMPLE_VECTORS = EXAMPLE_DIRECTIONS.tolist()

DEFAULTS: dict[str, dict] = {
    "tessellate": {
        "measure": {"kind": "directions", "vectors": _EXAMPLE_VECTORS},
        "window": [[-0.5, 0.5], [-0.5, 0.5]],
        "lifetime": 9.0,
    },
    "kernel": {
        "measure": {"kind": "mondrian", "d": 2},
        "window": [[0.0, 1.0], [0.0, 1.0]],
        "lifetime": 1.0,
        "m_values": [10, 100, 1000],
        "builds": 20,
        "grid_resolution": 10,
        "panel_window": [[-1.0, 1.0], [-1.0, 1.0]],
        "panel_resolution": 41,
        "panel_lifetime": 2.0,
    },
    "project-verify": {
        "directions": _EXAMPLE_VECTORS,
        "lifetime": 2.0,
        "window": [[-0.5, 0.5], [-0.5, 0.5]],
        "trees": 20000,
        "pair_grid": 5,
        "pair_extent": 0.8,
        "family_level": 0.01,
    },
    "density": {
        "measure": {"kind": "mondrian", "d": 1},
        "window": [[-6.0, 6.0]],
        "generator": "gaussian",
        "data": None,
        "n_values": [10, 1000],
        "trees": 50,
        "bandwidth_inverse": "n_cuberoot",
        "grid": [-4.0, 4.0, 161],
        "seeds_per_n": 3,
    },
    "regress": {
        "measure": {"kind": "mondrian", "d": 1},
        "window": [[0.0, 1.0]],
        "generator": "sine-regression",
        "data": None,
        "noise": 0.1,
        "n_values": [100, 1000],
        "trees": 50,
        "bandwidth_inverse": "n_cuberoot",
        "grid": [0.0, 1.0, 201],
        "seeds_per_n": 3,
    },
    "acceptance": {
        "criteria": list(CRITERIA),
    },
}

_QUICK_OVERRIDES: dict[str, dict] = {
    "kernel": {"m_values": [10, 100], "builds": 5, "panel_resolution": 21},
    "project-verify": {"trees": 2000},
    "density": {"trees": 20, "seeds_per_n": 2},
    "regress": {"trees": 20, "seeds_per_n": 2},
}


# ----------------------------------------------------------------------
# config plumbing


def _load_config(command: str, args) -> dict:
    cfg = copy.deepcopy(DEFAULTS[command])
    if getattr(args, "quick", False):
        cfg.update(copy.deepcopy(_QUICK_OVERRIDES.get(command, {})))
    if args.config is not None:
        try:
            raw = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        try:
            user = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(user) - set(cfg) - {"seed", "quick"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(user)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if command != "acceptance" and "seed" not in cfg:
        raise ConfigError("a seed is mandatory: pass --seed or put 'seed' in the config")
    if "seed" in cfg and not isinstance(cfg["seed"], int):
        raise ConfigError("seed must be an integer")
    cfg["quick"] = bool(getattr(args, "quick", False))
    return cfg


def _positive(cfg: dict, key: str) -> float:
    value = cfg.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"'{key}' must be a positive number, got {value!r}")
    return float(value)


def _positive_int(cfg: dict, key: str) -> int:
    value = cfg.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"'{key}' must be a positive integer, got {value!r}")
    return value


def _window_from(cfg: dict, key: str = "window") -> Polytope:
    bounds = cfg.get(key)
    if (
        not isinstance(bounds, list)
        or not bounds
        or any(
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
            or pair[0] >= pair[1]
            for pair in bounds
        )
    ):
        raise ConfigError(f"'{key}' must be a list of [low, high] pairs with low < high")
    lo = [float(p[0]) for p in bounds]
    hi = [float(p[1]) for p in bounds]
    return Polytope.box(lo, hi)


def _grid_from(cfg: dict) -> np.ndarray:
    g = cfg.get("grid")
    if (
        not isinstance(g, list)
        or len(g) != 3
        or not all(isinstance(v, (int, float)) for v in g)
        or g[0] >= g[1]
        or int(g[2]) < 2
    ):
        raise ConfigError("'grid' must be [low, high, points] with low < high")
    return np.linspace(float(g[0]), float(g[1]), int(g[2]))


def _bandwidth_inverse(cfg: dict, n: int) -> float:
    rule = cfg.get("bandwidth_inverse")
    if rule == "n_cuberoot":
        return float(n) ** (1.0 / 3.0)
    if isinstance(rule, (int, float)) and not isinstance(rule, bool) and rule > 0:
        return float(rule)
    raise ConfigError("'bandwidth_inverse' must be positive or 'n_cuberoot'")


def _out_dir(args) -> Path:
    if args.out is None:
        raise ConfigError("an output directory is mandatory: pass --out DIR")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _echo_config(cfg: dict, out: Path, report: RunReport) -> None:
    report.add_artifact(write_json(out / "config.json", cfg))


# ----------------------------------------------------------------------
# commands


def cmd_tessellate(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("tessellate", args)
    out = _out_dir(args)
    window = _window_from(cfg)
    measure = measure_from_spec(cfg["measure"])
    if measure.dim != window.dim:
        raise ConfigError("measure dimension does not match the window")
    lifetime = cfg["lifetime"]
    if not isinstance(lifetime, (int, float)) or lifetime < 0:
        raise ConfigError("'lifetime' must be a nonnegative number")

    tree = sample_stit(measure, float(lifetime), window, cfg["seed"])

    report = RunReport("tessellate", cfg)
    _echo_config(cfg, out, report)
    dump = {
        "measure": cfg["measure"],
        "window": cfg["window"],
        "lifetime": float(lifetime),
        "seed": cfg["seed"],
        "leaf_count": tree.leaf_count,
        "tree": tree.to_json_obj(),
    }
    report.add_artifact(write_json(out / "tessellation.json", dump))
    rows = [
        (leaf.index, leaf.body.volume, len(leaf.body.vertices), leaf.birth)
        for leaf in tree.leaves
    ]
    rows.sort(key=lambda r: r[0])
    report.add_artifact(
        write_csv(
            out / "leaf_stats.csv",
            ["leaf_id", "volume", "vertex_count", "birth_time"],
            rows,
        )
    )
    if not args.no_figures:
        report.add_artifact(plotting.tessellation_figure(tree, out / "tessellation.png"))
    total_volume = float(sum(r[1] for r in rows))
    report.add_metric("leaf_count", tree.leaf_count, 0.0, 1)
    report.add_metric("leaf_volume_sum", total_volume, 0.0, tree.leaf_count)
    report.wall_time_s = time.perf_counter() - t0
    report.print()
    report.write_timing(out)
    return 0


_PANEL_SEED_SLOT = 4


def _kernel_panels(cfg: dict):
    """The four reference measures whose limit kernels are plotted."""
    rng = np.random.default_rng((cfg["seed"], _PANEL_SEED_SLOT))
    gauss = rng.standard_normal((10, 2))
    gauss /= np.linalg.norm(gauss, axis=1)[:, None]
    return [
        ("axis-aligned", mondrian(2)),
        ("isotropic", isotropic(2)),
        ("three-direction", from_directions(EXAMPLE_DIRECTIONS)),
        ("gaussian-directions", from_directions(gauss)),
    ]


def _run_kernel_converge(cfg: dict, out: Path, report: RunReport, figures: bool):
    window = _window_from(cfg)
    measure = measure_from_spec(cfg["measure"])
    if measure.dim != window.dim:
        raise ConfigError("measure dimension does not match the window")
    spec = KernelSpec(measure, FixedLifetime(_positive(cfg, "lifetime")))
    res = _positive_int(cfg, "grid_resolution")
    axes = [np.linspace(lo, hi, res) for lo, hi in zip(window.lo, window.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])
    m_values = cfg.get("m_values")
    if not isinstance(m_values, list) or not all(
        isinstance(m, int) and m > 0 for m in m_values
    ):
        raise ConfigError("'m_values' must be a list of positive integers")
    builds = _positive_int(cfg, "builds")

    m_arr, sups = kernel_convergence_sweep(
        spec, window, pts, m_values, builds, (cfg["seed"], 1)
    )
    medians = np.median(sups, axis=0)

    conv_rows = []
    for b in range(builds):
        for k, m in enumerate(m_arr):
            conv_rows.append(
                (int(m), b, sups[b, k], pts.shape[0] * (pts.shape[0] - 1) // 2,
                 int(m), hoeffding_envelope(int(m), 0.05))
            )
    report.add_artifact(
        write_csv(
            out / "kernel_convergence.csv",
            ["M", "build", "sup_error", "n_pairs", "n_trees", "hoeffding_95"],
            conv_rows,
        )
    )

    # per-pair table from the first build at the largest budget
    from .kernels import RandomFeatureSet

    feats = RandomFeatureSet.build(spec, int(m_arr[-1]), window, (cfg["seed"], 1, 0))
    emp = feats.gram(pts)
    exact = spec.gram(pts)
    pair_rows = []
    pair_id = 0
    m_big = int(m_arr[-1])
    for i in range(pts.shape[0]):
        for j in range(i + 1, pts.shape[0]):
            pair_rows.append(
                (
                    m_big,
                    pair_id,
                    emp[i, j],
                    exact[i, j],
                    abs(emp[i, j] - exact[i, j]),
                    m_big,
                    binomial_se(exact[i, j], m_big),
                )
            )
            pair_id += 1
    report.add_artifact(
        write_csv(
            out / "kernel_pairs.csv",
            ["M", "grid_pair_id", "km", "kinf", "abs_err", "n_trees", "km_se"],
            pair_rows,
        )
    )
    summary = {
        "m_values": [int(m) for m in m_arr],
        "builds": builds,
        "median_sup_error": medians.tolist(),
        "sup_error_nonincreasing": bool(np.all(np.diff(medians) <= 0.0)),
        "grid_points": int(pts.shape[0]),
    }
    report.add_artifact(write_json(out / "kernel_summary.json", summary))
    if figures:
        report.add_artifact(
            plotting.convergence_figure(m_arr, medians, out / "kernel_convergence.png")
        )
    for k, m in enumerate(m_arr):
        report.add_metric(f"median_sup_error_M{int(m)}", float(medians[k]), 0.0, builds)


def _run_kernel_grid(cfg: dict, out: Path, report: RunReport, figures: bool):
    window = _window_from(cfg, "panel_window")
    res = _positive_int(cfg, "panel_resolution")
    lam = _positive(cfg, "panel_lifetime")
    xs = np.linspace(window.lo[0], window.hi[0], res)
    ys = np.linspace(window.lo[1], window.hi[1], res)
    mesh = np.meshgrid(xs, ys, indexing="xy")
    pts = np.column_stack([m.ravel() for m in mesh])
    origin = np.zeros(2)
    rows = []
    panels = []
    for name, measure in _kernel_panels(cfg):
        spec = KernelSpec(measure, FixedLifetime(lam))
        values = spec.gram(origin[None, :], pts)[0]
        panels.append((name, xs, ys, values.reshape(res, res)))
        rows.extend(
            (name, pts[k, 0], pts[k, 1], values[k]) for k in range(pts.shape[0])
        )
    report.add_artifact(
        write_csv(out / "kernel_grid.csv", ["preset", "x1", "x2", "value"], rows)
    )
    if figures:
        report.add_artifact(plotting.kernel_grid_figure(panels, out / "kernel_grid.png"))


def cmd_kernel(args, parts=("converge", "grid")) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("kernel", args)
    out = _out_dir(args)
    report = RunReport("kernel", cfg)
    _echo_config(cfg, out, report)
    if "converge" in parts:
        _run_kernel_converge(cfg, out, report, not args.no_figures)
    if "grid" in parts:
        _run_kernel_grid(cfg, out, report, not args.no_figures)
    report.wall_time_s = time.perf_counter() - t0
    report.print()
    report.write_timing(out)
    return 0


def cmd_project_verify(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("project-verify", args)
    out = _out_dir(args)
    window = _window_from(cfg)
    directions = np.asarray(cfg.get("directions"), dtype=float)
    if directions.ndim != 2 or directions.shape[0] < window.dim:
        raise ConfigError("'directions' must be an (n, d) matrix with n >= d")
    if directions.shape[1] != window.dim:
        raise ConfigError("direction rows do not match the window dimension")
    level = cfg.get("family_level")
    if not isinstance(level, (int, float)) or not 0.0 < level < 1.0:
        raise ConfigError("'family_level' must lie strictly between 0 and 1")

    result = projection_equivalence(
        directions,
        lifetime=_positive(cfg, "lifetime"),
        window=window,
        trees=_positive_int(cfg, "trees"),
        pair_grid=_positive_int(cfg, "pair_grid"),
        pair_extent=_positive(cfg, "pair_extent"),
        family_level=float(level),
        seed=cfg["seed"],
    )
    report = RunReport("project-verify", cfg)
    _echo_config(cfg, out, report)
    trees = result["trees"]
    rows = []
    for k in range(result["pairs"].shape[0]):
        x, y = result["pairs"][k]
        rows.append(
            (
                k,
                *x,
                *y,
                result["exact"][k],
                result["direct"][k],
                binomial_se(result["direct"][k], trees),
                result["lifted"][k],
                binomial_se(result["lifted"][k], trees),
                trees,
                trees,
                result["z"][k],
                result["z_critical"],
                bool(abs(result["z"][k]) <= result["z_critical"]),
            )
        )
    d = result["pairs"].shape[2]
    header = (
        ["pair_id"]
        + [f"x{j+1}" for j in range(d)]
        + [f"y{j+1}" for j in range(d)]
        + [
            "exact",
            "direct_p",
            "direct_se",
            "lifted_p",
            "lifted_se",
            "n_trees_direct",
            "n_trees_lifted",
            "z",
            "z_critical",
            "accept",
        ]
    )
    report.add_artifact(write_csv(out / "projection_pairs.csv", header, rows))
    verdict = {
        "pass": bool(result["passed"]),
        "two_sample_ok": result["two_sample_ok"],
        "closed_form_ok": result["closed_form_ok"],
        "max_abs_difference": result["max_abs_difference"],
        "z_critical": result["z_critical"],
        "family_level": float(level),
        "trees_per_simulator": trees,
        "pairs": int(result["pairs"].shape[0]),
    }
    report.add_artifact(write_json(out / "projection_report.json", verdict))
    if not args.no_figures:
        report.add_artifact(
            plotting.projection_figure(
                np.arange(result["pairs"].shape[0]),
                result["direct"],
                result["lifted"],
                result["exact"],
                out / "projection.png",
            )
        )
    report.add_metric(
        "max_abs_difference",
        result["max_abs_difference"],
        math.sqrt(2.0) * binomial_se(0.5, trees),
        trees,
    )
    report.wall_time_s = time.perf_counter() - t0
    report.print()
    report.write_timing(out)
    if not result["passed"]:
        print("project-verify: FAIL", file=sys.stderr)
        return 2
    return 0


def _density_inputs(cfg: dict, window: Polytope, n: int, rep: int):
    """(points, truth_pdf or None) for one repetition."""
    if cfg.get("data"):
        pts = load_points_csv(cfg["data"], window.dim)
        return pts, None
    sampler, pdf = density_generator(cfg["generator"])
    rng = np.random.default_rng((cfg["seed"], n, rep))
    return sampler(n, window.dim, rng), pdf


def cmd_density(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("density", args)
    out = _out_dir(args)
    window = _window_from(cfg)
    measure = measure_from_spec(cfg["measure"])
    if measure.dim != window.dim:
        raise ConfigError("measure dimension does not match the window")
    if window.dim != 1:
        raise ConfigError("density overlays require a one-dimensional window")
    grid = _grid_from(cfg)
    trees = _positive_int(cfg, "trees")
    reps = _positive_int(cfg, "seeds_per_n")
    n_values = cfg.get("n_values")
    if cfg.get("data"):
        n_values = [None]
    elif not isinstance(n_values, list) or not all(
        isinstance(n, int) and n > 0 for n in n_values
    ):
        raise ConfigError("'n_values' must be a list of positive integers")

    report = RunReport("density", cfg)
    _echo_config(cfg, out, report)
    is_mondrian = (
        measure.kind == "discrete"
        and measure.directions.shape == (1, 1)
    )
    gridc = grid[:, None]
    trend_rows = []
    trend_l1 = []
    for n in n_values:
        data, pdf = _density_inputs(cfg, window, n or 0, 0)
        n_eff = data.shape[0]
        lam = _bandwidth_inverse(cfg, n_eff)
        forest = DensityForest.build(measure, lam, window, data, trees, (cfg["seed"], n_eff, 0))
        forest_vals = forest.density(gridc)
        forest_se = forest.density_se(gridc)
        ratio_vals = forest.ratio_density(gridc)
        lap_vals = laplace_kde(data, lam, gridc)
        ideal_vals = (
            infinite_forest_density(data, lam, gridc)
            if is_mondrian
            else np.full(grid.shape, np.nan)
        )
        truth_vals = pdf(gridc) if pdf else np.full(grid.shape, np.nan)
        rows = [
            (
                grid[i],
                truth_vals[i],
                forest_vals[i],
                forest_se[i],
                ideal_vals[i],
                lap_vals[i],
                ratio_vals[i],
                n_eff,
                trees,
            )
            for i in range(grid.size)
        ]
        tag = f"n{n_eff}"
        report.add_artifact(
            write_csv(
                out / f"density_overlay_{tag}.csv",
                ["x", "truth", "forest", "forest_se", "ideal", "laplace", "ratio",
                 "n_data", "n_trees"],
                rows,
            )
        )
        if not args.no_figures:
            report.add_artifact(
                plotting.density_overlay_figure(
                    grid,
                    {
                        "truth": truth_vals,
                        "forest": forest_vals,
                        "ideal": ideal_vals,
                        "laplace": lap_vals,
                        "ratio": ratio_vals,
                    },
                    data[:, 0],
                    out / f"density_overlay_{tag}.png",
                    title=f"density estimates, n={n_eff}",
                )
            )
        if pdf is not None:
            l1_forest = []
            l1_laplace = []
            for rep in range(reps):
                data_r, _ = _density_inputs(cfg, window, n_eff, rep)
                forest_r = DensityForest.build(
                    measure, lam, window, data_r, trees, (cfg["seed"], n_eff, rep)
                )
                truth_r = pdf(gridc)
                l1_forest.append(l1_error(forest_r.density(gridc), truth_r, grid))
                l1_laplace.append(l1_error(laplace_kde(data_r, lam, gridc), truth_r, grid))
            mean_f = float(np.mean(l1_forest))
            se_f = float(np.std(l1_forest, ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
            mean_l = float(np.mean(l1_laplace))
            se_l = float(np.std(l1_laplace, ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
            trend_rows.append((n_eff, lam, mean_f, se_f, mean_l, se_l, reps, trees))
            trend_l1.append(mean_f)
            report.add_metric(f"l1_forest_n{n_eff}", mean_f, se_f, reps)
    if trend_rows:
        report.add_artifact(
            write_csv(
                out / "density_trend.csv",
                ["n", "bandwidth_inverse", "l1_forest_mean", "l1_forest_se",
                 "l1_laplace_mean", "l1_laplace_se", "seeds", "n_trees"],
                trend_rows,
            )
        )
        if not args.no_figures and len(trend_rows) > 1:
            report.add_artifact(
                plotting.trend_figure(
                    [r[0] for r in trend_rows],
                    trend_l1,
                    "L1 error",
                    out / "density_trend.png",
                    title="density consistency trend",
                )
            )
    summary = {
        "n_values": [r[0] for r in trend_rows],
        "l1_forest": trend_l1,
        "trees": trees,
        "seeds_per_n": reps,
    }
    report.add_artifact(write_json(out / "density_summary.json", summary))
    report.wall_time_s = time.perf_counter() - t0
    report.print()
    report.write_timing(out)
    return 0


def cmd_regress(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("regress", args)
    out = _out_dir(args)
    window = _window_from(cfg)
    measure = measure_from_spec(cfg["measure"])
    if measure.dim != window.dim:
        raise ConfigError("measure dimension does not match the window")
    if window.dim != 1:
        raise ConfigError("regression overlays require a one-dimensional window")
    grid = _grid_from(cfg)
    trees = _positive_int(cfg, "trees")
    reps = _positive_int(cfg, "seeds_per_n")
    noise = cfg.get("noise")
    if not isinstance(noise, (int, float)) or noise < 0:
        raise ConfigError("'noise' must be a nonnegative number")

    report = RunReport("regress", cfg)
    _echo_config(cfg, out, report)
    gridc = grid[:, None]
    truth = sine_truth(grid)

    def draw(n, rep):
        if cfg.get("data"):
            raw = load_points_csv(cfg["data"])
            if raw.shape[1] < 2:
                raise DataFormatError("regression data needs covariate and response columns")
            return raw[:, :-1], raw[:, -1], False
        X, y = sine_regression_sample(n, np.random.default_rng((cfg["seed"], n, rep)), noise)
        return X, y, True

    n_values = [None] if cfg.get("data") else cfg.get("n_values")
    if n_values != [None] and (
        not isinstance(n_values, list)
        or not all(isinstance(n, int) and n > 0 for n in n_values)
    ):
        raise ConfigError("'n_values' must be a list of positive integers")

    trend_rows = []
    trend_l2 = []
    for n in n_values:
        X, y, synthetic = draw(n or 0, 0)
        n_eff = X.shape[0]
        lam = _bandwidth_inverse(cfg, n_eff)
        forest = RegressionForest.build(measure, lam, window, X, y, trees, (cfg["seed"], n_eff, 0))
        pred = forest.predict(gridc)
        tag = f"n{n_eff}"
        rows = [(grid[i], truth[i], pred[i], n_eff, trees) for i in range(grid.size)]
        report.add_artifact(
            write_csv(
                out / f"regress_overlay_{tag}.csv",
                ["x", "truth", "forest", "n_data", "n_trees"],
                rows,
            )
        )
        if not args.no_figures:
            report.add_artifact(
                plotting.regression_overlay_figure(
                    grid, truth, pred, X[:, 0], y,
                    out / f"regress_overlay_{tag}.png",
                    title=f"forest regression, n={n_eff}",
                )
            )
        if synthetic:
            l2s = []
            for rep in range(reps):
                X_r, y_r, _ = draw(n_eff, rep)
                forest_r = RegressionForest.build(
                    measure, lam, window, X_r, y_r, trees, (cfg["seed"], n_eff, rep)
                )
                l2s.append(l2_error(forest_r.predict(gridc), truth, grid))
            mean_l2 = float(np.mean(l2s))
            se_l2 = float(np.std(l2s, ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
            trend_rows.append((n_eff, lam, mean_l2, se_l2, reps, trees))
            trend_l2.append(mean_l2)
            report.add_metric(f"l2_n{n_eff}", mean_l2, se_l2, reps)
    if trend_rows:
        report.add_artifact(
            write_csv(
                out / "regress_trend.csv",
                ["n", "bandwidth_inverse", "l2_mean", "l2_se", "seeds", "n_trees"],
                trend_rows,
            )
        )
        if not args.no_figures and len(trend_rows) > 1:
            report.add_artifact(
                plotting.trend_figure(
                    [r[0] for r in trend_rows],
                    trend_l2,
                    "L2 error",
                    out / "regress_trend.png",
                    title="regression consistency trend",
                )
            )
    summary = {
        "n_values": [r[0] for r in trend_rows],
        "l2": trend_l2,
        "trees": trees,
        "seeds_per_n": reps,
    }
    report.add_artifact(write_json(out / "regress_summary.json", summary))
    report.wall_time_s = time.perf_counter() - t0
    report.print()
    report.write_timing(out)
    return 0


def cmd_acceptance(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_config("acceptance", args)
    names = cfg.get("criteria")
    if args.criteria:
        names = [c.strip() for c in args.criteria.split(",") if c.strip()]
    unknown = [n for n in names or [] if n not in CRITERIA]
    if unknown:
        raise ConfigError(f"unknown criteria: {unknown}")
    results = run_criteria(names, quick=cfg["quick"], report=print)
    all_pass = all(r.passed for r in results)
    if args.out is not None:
        out = _out_dir(args)
        verdict = {
            "quick": cfg["quick"],
            "all_passed": bool(all_pass),
            "criteria": [r.to_json_obj() for r in results],
        }
        write_json(out / "acceptance_report.json", verdict)
        report = RunReport("acceptance", cfg)
        report.wall_time_s = time.perf_counter() - t0
        report.write_timing(out)
        print(f"wrote {out / 'acceptance_report.json'}")
    print(
        f"acceptance: {'PASS' if all_pass else 'FAIL'} "
        f"({sum(r.passed for r in results)}/{len(results)} criteria, "
        f"{time.perf_counter() - t0:.1f}s)"
    )
    return 0 if all_pass else 2


# ----------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors to exit code 1
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stitkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", help="JSON config merged over the defaults")
        p.add_argument("--seed", type=int, help="root random seed (mandatory)")
        p.add_argument("--out", help="output directory for artifacts")
        p.add_argument("--quick", action="store_true", help="reduced sample sizes")
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
        p.set_defaults(func=func)
        return p

    add("tessellate", cmd_tessellate, help="sample one tessellation and dump it")
    add("kernel", cmd_kernel, help="kernel convergence sweep and contour grids")
    add(
        "kernel-converge",
        lambda a: cmd_kernel(a, parts=("converge",)),
        help="kernel convergence sweep only",
    )
    add(
        "kernel-grid",
        lambda a: cmd_kernel(a, parts=("grid",)),
        help="limit-kernel contour grids only",
    )
    add("project-verify", cmd_project_verify, help="direct vs lifted equivalence test")
    add("density", cmd_density, help="forest density fits and trends")
    add("density-fit", cmd_density, help="alias of density")
    add("regress", cmd_regress, help="forest regression fits and trends")
    add("regress-fit", cmd_regress, help="alias of regress")
    p_acc = add("acceptance", cmd_acceptance, help="run the seeded acceptance suite")
    p_acc.add_argument("--criteria", help="comma-separated subset, e.g. A1,A5")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StitKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
