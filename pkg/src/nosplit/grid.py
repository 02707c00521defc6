"""Parameter grids over angle pairs and the columnar report they produce."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Sequence

import numpy as np

from nosplit import __version__

MAX_POINTS = 10**7


class GridTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SweepGrid:
    """Uniform (theta1, phi1, theta2, phi2) grid.

    Points sit at cell centers unless ``include_poles`` is set, in which case
    theta runs over the cell edges 0..pi inclusive and phi over 0..2pi
    exclusive. Explicit axis values override the step counts for that axis.
    """

    theta_steps: int = 36
    phi_steps: int = 24
    include_poles: bool = False
    theta_values: tuple[float, ...] | None = None
    phi_values: tuple[float, ...] | None = None
    extra_points: tuple[tuple[float, float, float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.theta_steps < 1 or self.phi_steps < 1:
            raise ValueError("step counts must be positive")
        for name in ("theta_values", "phi_values"):
            vals = getattr(self, name)
            if vals is not None:
                if len(vals) == 0:
                    raise ValueError(f"{name} must not be empty")
                object.__setattr__(self, name, tuple(float(v) for v in vals))
        if self.theta_values is not None and any(not 0.0 <= t <= math.pi for t in self.theta_values):
            raise ValueError("theta values must lie in [0, pi]")
        object.__setattr__(self, "extra_points", tuple(tuple(map(float, p)) for p in self.extra_points))
        if self.size > MAX_POINTS:
            raise GridTooLarge(f"grid has {self.size} points, limit is {MAX_POINTS}")

    def thetas(self) -> np.ndarray:
        if self.theta_values is not None:
            return np.array(self.theta_values)
        n = self.theta_steps
        if self.include_poles:
            return np.arange(n + 1) * (math.pi / n)
        return (np.arange(n) + 0.5) * (math.pi / n)

    def phis(self) -> np.ndarray:
        if self.phi_values is not None:
            return np.mod(np.array(self.phi_values), 2 * math.pi)
        m = self.phi_steps
        offset = 0.0 if self.include_poles else 0.5
        return (np.arange(m) + offset) * (2 * math.pi / m)

    @property
    def size(self) -> int:
        nt = len(self.theta_values) if self.theta_values is not None else self.theta_steps + bool(self.include_poles)
        npf = len(self.phi_values) if self.phi_values is not None else self.phi_steps
        return nt * nt * npf * npf + len(self.extra_points)

    def points(self) -> np.ndarray:
        """(N, 4) array of (theta1, phi1, theta2, phi2), theta1 slowest."""
        t, p = self.thetas(), self.phis()
        t1, p1, t2, p2 = np.meshgrid(t, p, t, p, indexing="ij")
        pts = np.stack([t1.ravel(), p1.ravel(), t2.ravel(), p2.ravel()], axis=1)
        if self.extra_points:
            extra = np.array(self.extra_points, dtype=float)
            extra[:, [1, 3]] = np.mod(extra[:, [1, 3]], 2 * math.pi)
            pts = np.concatenate([pts, extra])
        return pts

    def describe(self) -> dict[str, Any]:
        return {
            "theta_steps": self.theta_steps,
            "phi_steps": self.phi_steps,
            "include_poles": self.include_poles,
            "theta_values": list(self.theta_values) if self.theta_values is not None else None,
            "phi_values": list(self.phi_values) if self.phi_values is not None else None,
            "extra_points": len(self.extra_points),
            "size": self.size,
        }


def as_points(grid: SweepGrid | np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    pts = grid.points() if isinstance(grid, SweepGrid) else np.asarray(grid, dtype=float).reshape(-1, 4)
    if len(pts) == 0:
        raise ValueError("grid is empty")
    if len(pts) > MAX_POINTS:
        raise GridTooLarge(f"grid has {len(pts)} points, limit is {MAX_POINTS}")
    return pts


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal; locale independent."""
    return repr(float(x))


def _cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def _format_column(col: np.ndarray) -> list[str]:
    if col.dtype == np.bool_:
        return ["1" if v else "0" for v in col.tolist()]
    if np.issubdtype(col.dtype, np.integer):
        return [str(v) for v in col.tolist()]
    if np.issubdtype(col.dtype, np.floating):
        return [repr(v) for v in col.astype(float).tolist()]
    return [_cell(v) for v in col.tolist()]


def to_jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {k: to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [to_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def dump_json(obj: Any, path: Path | None = None) -> str:
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


@dataclass
class ViolationReport:
    """Per-point records stored column-wise, plus a summary block."""

    kind: str
    settings: dict[str, Any]
    columns: dict[str, np.ndarray]
    summary: dict[str, Any]
    version: str = __version__
    extra: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(next(iter(self.columns.values())))

    def records(self) -> Iterator[dict[str, Any]]:
        names = list(self.columns)
        cols = [self.columns[n].tolist() for n in names]
        for row in zip(*cols):
            yield dict(zip(names, row))

    def header(self) -> dict[str, Any]:
        return {"version": self.version, "kind": self.kind, "settings": self.settings, "summary": self.summary, **self.extra}

    def write_csv(self, path: Path) -> None:
        names = list(self.columns)
        cols = [_format_column(self.columns[n]) for n in names]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(",".join(names) + "\n")
            for chunk in range(0, len(self), 65536):
                rows = zip(*(c[chunk:chunk + 65536] for c in cols))
                fh.write("".join(",".join(r) + "\n" for r in rows))

    def write_json(self, path: Path, include_records: bool = False) -> None:
        obj = self.header()
        if include_records:
            obj["records"] = list(self.records())
        dump_json(obj, path)


def read_csv_columns(path: Path) -> dict[str, list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    names = rows[0]
    return {n: [r[i] for r in rows[1:]] for i, n in enumerate(names)}
