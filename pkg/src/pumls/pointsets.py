"""Node sets in R^n: uniform grids, Halton points, fill and separation distances."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "PointSet",
    "DomainBox",
    "unit_box",
    "uniform_grid",
    "eval_grid",
    "halton_points",
    "radical_inverse",
    "first_primes",
    "fill_distance",
    "separation_distance",
    "quasi_uniformity_ratio",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True)
class DomainBox:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("box bounds must be 1-d arrays of equal length")
        if np.any(upper <= lower):
            raise ValueError("box requires upper > lower in every coordinate")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower


def unit_box(dim: int = 2) -> DomainBox:
    return DomainBox(np.zeros(dim), np.ones(dim))


@dataclass(frozen=True)
class PointSet:
    """Immutable node set with optional sampled values.

    ``nodes`` has shape (N, dim). Nodes must be pairwise distinct; exact
    coordinate comparison is used.
    """

    nodes: np.ndarray
    values: Optional[np.ndarray] = None
    _tree: Optional[cKDTree] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        if nodes.ndim != 2 or nodes.shape[1] < 1:
            raise ValueError("nodes must have shape (N, dim)")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("nodes must be finite")
        if len(nodes) > 1 and len(np.unique(nodes, axis=0)) != len(nodes):
            raise ValueError("duplicate nodes in point set")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        if self.values is not None:
            values = np.asarray(self.values, dtype=float).ravel()
            if values.shape[0] != nodes.shape[0]:
                raise ValueError(
                    f"got {values.shape[0]} values for {nodes.shape[0]} nodes"
                )
            values.setflags(write=False)
            object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            object.__setattr__(self, "_tree", cKDTree(self.nodes))
        return self._tree

    def with_values(self, values) -> "PointSet":
        """Return a copy sharing the nodes but carrying ``values``.

        ``values`` may be an array or a callable applied row-wise to the
        coordinate columns, e.g. ``f(x, y)``.
        """
        if callable(values):
            values = values(*self.nodes.T)
        return PointSet(self.nodes, values, _tree=self._tree)


def uniform_grid(level: int, dim: int = 2) -> PointSet:
    """Tensor grid with spacing 2**-level on [0, 1]^dim, lexicographic order."""
    if level < 1 or dim < 1:
        raise ValueError("level and dim must be positive")
    ticks = np.arange(2**level + 1) / 2**level
    mesh = np.meshgrid(*([ticks] * dim), indexing="ij")
    return PointSet(np.stack([m.ravel() for m in mesh], axis=1))


def eval_grid(resolution: int = 120, dim: int = 2) -> np.ndarray:
    """Uniform evaluation grid of resolution**dim points covering [0, 1]^dim.

    Row-major with the last coordinate varying fastest.
    """
    ticks = np.linspace(0.0, 1.0, resolution)
    mesh = np.meshgrid(*([ticks] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def radical_inverse(indices, base: int) -> np.ndarray:
    """Van der Corput radical inverse of non-negative integers in ``base``."""
    idx = np.array(indices, dtype=np.int64, copy=True)
    out = np.zeros(idx.shape, dtype=float)
    scale = 1.0 / base
    while np.any(idx > 0):
        out += (idx % base) * scale
        idx //= base
        scale /= base
    return out


def halton_points(count: int, dim: int = 2) -> PointSet:
    """First ``count`` Halton points, starting at index 1 (the origin is skipped)."""
    if count < 1 or dim < 1:
        raise ValueError("count and dim must be positive")
    idx = np.arange(1, count + 1)
    cols = [radical_inverse(idx, b) for b in first_primes(dim)]
    return PointSet(np.stack(cols, axis=1))


def _probe_grid(box: DomainBox, resolution: int) -> np.ndarray:
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def fill_distance(points: PointSet, box: DomainBox, probe_resolution: int = 200) -> float:
    """Probe-grid estimate of sup_{x in box} min_j ||x - x_j||.

    This is a lower bound on the true fill distance; it only sees the
    probe_resolution**dim probe points.
    """
    if len(points) == 0:
        raise ValueError("empty node set")
    if probe_resolution < 2:
        raise ValueError("probe_resolution must be at least 2")
    probes = _probe_grid(box, probe_resolution)
    dist, _ = points.tree.query(probes)
    return float(dist.max())


def separation_distance(points: PointSet) -> float:
    if len(points) < 2:
        raise ValueError("undefined separation")
    dist, _ = points.tree.query(points.nodes, k=2)
    return 0.5 * float(dist[:, 1].min())


def quasi_uniformity_ratio(
    points: PointSet, box: DomainBox, probe_resolution: int = 200
) -> float:
    return fill_distance(points, box, probe_resolution) / separation_distance(points)


def write_csv(path, points: PointSet, header: bool = False) -> None:
    """One row per node: ``x_1,...,x_n[,f]``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            names = [f"x_{d + 1}" for d in range(points.dim)]
            if points.values is not None:
                names.append("f")
            writer.writerow(names)
        for i, row in enumerate(points.nodes):
            fields = [repr(float(v)) for v in row]
            if points.values is not None:
                fields.append(repr(float(points.values[i])))
            writer.writerow(fields)


def read_csv(path, dim: Optional[int] = None) -> PointSet:
    """Read a point CSV; a non-numeric first row is taken as a header.

    With ``dim`` given, any extra trailing column is read as values.
    Without it, all columns are coordinates.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows:
        try:
            [float(v) for v in rows[0]]
        except ValueError:
            rows = rows[1:]
    data = np.array([[float(v) for v in r] for r in rows], dtype=float)
    if data.ndim != 2 or data.size == 0:
        raise ValueError(f"no points in {path}")
    if dim is None or data.shape[1] == dim:
        return PointSet(data)
    if data.shape[1] == dim + 1:
        return PointSet(data[:, :dim], data[:, dim])
    raise ValueError(f"expected {dim} or {dim + 1} columns, found {data.shape[1]}")
