"""Synthetic data generators and point-cloud CSV loading for experiments."""

from __future__ import annotations

import csv
import math

import numpy as np

from .errors import ConfigError, DataFormatError

# two-component location mixture used by the "mixture" generator
_MIX_MEANS = (-2.0, 2.0)
_MIX_STD = 0.5
_SINE_NOISE = 0.1


def gaussian_sample(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """n standard-normal points in d dimensions."""
    return rng.standard_normal((n, d))


def gaussian_pdf(x) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    return np.exp(-0.5 * (pts**2).sum(axis=1)) / (2.0 * math.pi) ** (pts.shape[1] / 2.0)


def mixture_sample(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Balanced two-component normal mixture (means +-2 on axis 0, sd 0.5)."""
    pts = _MIX_STD * rng.standard_normal((n, d))
    which = rng.random(n) < 0.5
    pts[:, 0] += np.where(which, _MIX_MEANS[0], _MIX_MEANS[1])
    return pts


def mixture_pdf(x) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    d = pts.shape[1]
    norm = (2.0 * math.pi * _MIX_STD**2) ** (d / 2.0)
    out = np.zeros(pts.shape[0])
    for mu in _MIX_MEANS:
        shifted = pts.copy()
        shifted[:, 0] -= mu
        out += 0.5 * np.exp(-0.5 * (shifted**2).sum(axis=1) / _MIX_STD**2) / norm
    return out


def sine_regression_sample(
    n: int, rng: np.random.Generator, noise: float = _SINE_NOISE
) -> tuple[np.ndarray, np.ndarray]:
    """Covariates uniform on [0, 1] with responses sin(2 pi x) + noise."""
    x = rng.random((n, 1))
    y = sine_truth(x[:, 0]) + noise * rng.standard_normal(n)
    return x, y


def sine_truth(x) -> np.ndarray:
    return np.sin(2.0 * math.pi * np.asarray(x, dtype=float))


DENSITY_GENERATORS = {
    "gaussian": (gaussian_sample, gaussian_pdf),
    "mixture": (mixture_sample, mixture_pdf),
}


def density_generator(name: str):
    try:
        return DENSITY_GENERATORS[name]
    except KeyError:
        raise ConfigError(
            f"unknown generator {name!r}; expected one of "
            f"{sorted(DENSITY_GENERATORS)} or 'sine-regression'"
        ) from None


def load_points_csv(path, dim: int | None = None) -> np.ndarray:
    """Read one point per row; raises with the offending row number."""
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if lineno == 1 and any(_not_number(c) for c in row):
                continue  # header line
            try:
                values = [float(c) for c in row]
            except ValueError as exc:
                raise DataFormatError(f"row {lineno}: {exc}") from None
            if rows and len(values) != len(rows[0]):
                raise DataFormatError(
                    f"row {lineno}: expected {len(rows[0])} columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise DataFormatError("no data rows found")
    pts = np.asarray(rows, dtype=float)
    if dim is not None and pts.shape[1] != dim:
        raise DataFormatError(
            f"data has {pts.shape[1]} columns but the window has dimension {dim}"
        )
    return pts


def _not_number(cell: str) -> bool:
    try:
        float(cell)
        return False
    except ValueError:
        return True
