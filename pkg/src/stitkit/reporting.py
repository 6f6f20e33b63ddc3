"""Deterministic artifact writers and run reports.

Output bytes must be a pure function of (config, seed), so floats are
rendered with shortest round-trip ``repr``, JSON keys keep insertion order,
and wall-clock timings never enter the data artifacts; they are echoed on
stdout and in a ``timing.log`` sidecar that determinism checks skip.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

TIMING_FILENAME = "timing.log"


def format_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(float(x))  # plain-float repr even for numpy scalars
    if x is None:
        return ""
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return str(int(x))
        if isinstance(x, np.floating):
            return repr(float(x))
    except ImportError:  # pragma: no cover
        pass
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2) + "\n")
    return path


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunReport:
    """Console summary of a command run.

    Every statistic in ``metrics`` is stored as (value, standard error,
    sample size); deterministic quantities use a zero standard error.
    """

    command: str
    config: dict
    metrics: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def add_metric(self, name: str, value: float, se: float, n: int) -> None:
        self.metrics[name] = {"value": value, "se": se, "n": n}

    def add_artifact(self, path) -> None:
        self.artifacts.append(str(path))

    def print(self, out=None) -> None:
        import sys

        out = out or sys.stdout
        print(f"[{self.command}] completed in {self.wall_time_s:.2f}s", file=out)
        for name, m in self.metrics.items():
            print(
                f"  {name} = {format_value(m['value'])}"
                f" +- {format_value(m['se'])} (n={m['n']})",
                file=out,
            )
        for a in self.artifacts:
            print(f"  wrote {a}", file=out)

    def write_timing(self, out_dir) -> None:
        path = Path(out_dir) / TIMING_FILENAME
        path.write_text(f"{self.command}: {self.wall_time_s:.3f}s\n")
