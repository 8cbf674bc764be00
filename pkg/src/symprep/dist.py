"""Discretize probability densities onto 2^n-point grids.

Supports analytic families (normal, Lorentzian, Student's t) and tabulated
weights, plus the left-half extraction used by the reflection-symmetry
construction. Symmetric densities on symmetric grids come out bit-exactly
mirror symmetric: the pdf is evaluated once per mirrored pair and copied.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

__all__ = [
    "DistError",
    "Grid",
    "DistSpec",
    "TargetDistribution",
    "sample_pdf",
    "left_half",
    "amplitudes",
]

_KINDS = ("normal", "lorentzian", "student_t", "table")


class DistError(ValueError):
    """Raised on invalid distribution specs, grids, or degenerate targets."""


@dataclass(frozen=True)
class Grid:
    """2^n_qubits sample points on [min, max].

    midpoint convention: x_k = min + (k + 1/2) * (max - min) / 2^n
    endpoint convention: x_k = min + k * (max - min) / (2^n - 1)

    Both satisfy x_k + x_{2^n-1-k} = min + max, so mirror pairing about the
    interval center is exact either way.
    """

    min: float
    max: float
    n_qubits: int
    convention: str = "midpoint"

    def __post_init__(self):
        if not self.min < self.max:
            raise DistError(f"grid needs min < max, got [{self.min}, {self.max}]")
        if self.n_qubits < 2:
            raise DistError(f"grid needs n_qubits >= 2, got {self.n_qubits}")
        if self.convention not in ("midpoint", "endpoint"):
            raise DistError(f"unknown grid convention {self.convention!r}")

    @property
    def size(self) -> int:
        return 2**self.n_qubits

    @property
    def center(self) -> float:
        return 0.5 * (self.min + self.max)

    def points(self) -> np.ndarray:
        k = np.arange(self.size, dtype=float)
        if self.convention == "midpoint":
            return self.min + (k + 0.5) * (self.max - self.min) / self.size
        return self.min + k * (self.max - self.min) / (self.size - 1)


@dataclass(frozen=True)
class DistSpec:
    """Density family plus parameters.

    kind: normal(mu, sigma2) | lorentzian(x0, gamma) | student_t(nu) |
    table(path or weights). assume_symmetric only affects tables; analytic
    kinds are recognized as symmetric when centered on the grid center.
    """

    kind: str
    mu: float = 0.0
    sigma2: float = 1.0
    x0: float = 0.0
    gamma: float = 1.0
    nu: float = 1.0
    path: str | None = None
    weights: tuple = field(default=())
    assume_symmetric: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DistError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "normal" and not self.sigma2 > 0:
            raise DistError(f"normal needs sigma2 > 0, got {self.sigma2}")
        if self.kind == "lorentzian" and not self.gamma > 0:
            raise DistError(f"lorentzian needs gamma > 0, got {self.gamma}")
        if self.kind == "student_t" and not self.nu > 0:
            raise DistError(f"student_t needs nu > 0, got {self.nu}")
        if self.kind == "table" and self.path is None and not self.weights:
            raise DistError("table spec needs a path or inline weights")

    def pdf(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "normal":
            return stats.norm.pdf(x, loc=self.mu, scale=math.sqrt(self.sigma2))
        if self.kind == "lorentzian":
            return stats.cauchy.pdf(x, loc=self.x0, scale=self.gamma)
        if self.kind == "student_t":
            return stats.t.pdf(x, df=self.nu)
        raise DistError("table specs have no analytic pdf")

    def symmetry_center(self) -> float | None:
        # center of even symmetry, None for tables
        if self.kind == "normal":
            return self.mu
        if self.kind == "lorentzian":
            return self.x0
        if self.kind == "student_t":
            return 0.0
        return None


@dataclass(frozen=True)
class TargetDistribution:
    """Probability vector p of length 2^n on a grid; sum(p) == 1 bit-exact."""

    grid: Grid
    p: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.grid.size,):
            raise DistError(
                f"p has shape {p.shape}, grid needs ({self.grid.size},)"
            )
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DistError("probabilities must be finite and non-negative")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise DistError(f"probabilities sum to {p.sum():.17g}, not 1")
        object.__setattr__(self, "p", p)


def _read_table(path: str) -> np.ndarray:
    if not os.path.exists(path):
        raise DistError(f"table file not found: {path}")
    vals = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            cell = row[0].strip()
            if cell.lower() == "weight":  # optional header
                continue
            try:
                vals.append(float(cell))
            except ValueError as exc:
                raise DistError(f"bad table entry {cell!r} in {path}") from exc
    return np.asarray(vals, dtype=float)


def _exact_normalize(w: np.ndarray, symmetric: bool) -> np.ndarray:
    total = float(w.sum())
    if total <= 0 or not np.isfinite(total):
        raise DistError("weights must have a positive finite sum")
    p = w / total
    n = p.size
    if symmetric:
        # Residual split over the two center elements keeps both the sum
        # and the mirror symmetry p[k] == p[n-1-k] bit-exact.
        half = n // 2
        rest = float(np.sum(np.delete(p, [half - 1, half])))
        center = 0.5 * (1.0 - rest)
        p[half - 1] = center
        p[half] = center
    else:
        p[-1] = 1.0 - float(p[:-1].sum())
        if p[-1] < 0:
            # rounding can push the adjusted element barely negative
            p[-1] = 0.0
            p /= p.sum()
            p[-1] = 1.0 - float(p[:-1].sum())
    return p


def sample_pdf(spec: DistSpec, grid: Grid) -> TargetDistribution:
    """Evaluate the spec's density on the grid and normalize to sum 1.

    Symmetric analytic specs centered on the grid center are evaluated once
    per mirrored pair and copied, so p[k] == p[2^n-1-k] holds bit-exactly.
    """
    n = grid.size
    if spec.kind == "table":
        w = np.array(spec.weights, dtype=float) if spec.weights else _read_table(spec.path)
        if w.shape != (n,):
            raise DistError(
                f"table has {w.size} weights, grid needs {n}"
            )
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DistError("table weights must be finite and non-negative")
        if not np.any(w > 0):
            raise DistError("table weights are all zero")
        sym = bool(spec.assume_symmetric)
        if sym:
            scale = float(np.max(w))
            if np.max(np.abs(w - w[::-1])) > 1e-12 * scale:
                raise DistError(
                    "assume_symmetric set but table is not mirror symmetric"
                )
            w = 0.5 * (w + w[::-1])  # make the pairing bit-exact
        return TargetDistribution(grid, _exact_normalize(w, sym), symmetric=sym)

    x = grid.points()
    c = spec.symmetry_center()
    sym = c is not None and abs(c - grid.center) <= 1e-12 * (grid.max - grid.min)
    if sym:
        half = n // 2
        f_left = spec.pdf(x[:half])
        w = np.empty(n, dtype=float)
        w[:half] = f_left
        w[half:] = f_left[::-1]
    else:
        w = spec.pdf(x)
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise DistError("density evaluated non-finite or negative on the grid")
    if not np.any(w > 0):
        raise DistError("density is zero on every grid point")
    return TargetDistribution(grid, _exact_normalize(w, sym), symmetric=sym)


def left_half(t: TargetDistribution) -> TargetDistribution:
    """First 2^{n-1} entries renormalized to sum 1, on an (n-1)-qubit grid
    covering [min, center]."""
    n = t.grid.n_qubits
    if n < 3:
        raise DistError(f"left_half needs n_qubits >= 3, got {n}")
    half = t.grid.size // 2
    w = t.p[:half].copy()
    if not np.any(w > 0):
        raise DistError("left half of the distribution is zero everywhere")
    sub = Grid(t.grid.min, t.grid.center, n - 1, t.grid.convention)
    return TargetDistribution(sub, _exact_normalize(w, False), symmetric=False)


def amplitudes(t: TargetDistribution) -> np.ndarray:
    """Real non-negative amplitude vector a with a_k = sqrt(p_k), unit norm."""
    a = np.sqrt(t.p)
    nrm = float(np.linalg.norm(a))
    return a / nrm
