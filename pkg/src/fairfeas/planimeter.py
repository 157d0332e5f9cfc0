"""Dot-planimeter area estimation over the unit square.

A regular g x g lattice of detectors covers [0, 1]^2 (corner detectors
on the axes). A detector is satisfied when a member of a curve family
passes within its radius, or, for filled estimates, when it lies on the
filled side of any curve. The satisfied fraction of the g^2 detectors
estimates the region's area.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import BadSampleStep, DomainError

FillMode = Literal["below", "above", "curve-only"]


@dataclass(frozen=True)
class DetectorGrid:
    """g x g detector lattice with spacing 1/(g-1) and radius spacing/2."""

    g: int

    def __post_init__(self):
        if self.g < 3:
            raise DomainError(f"g must be >= 3, got {self.g}")

    @property
    def spacing(self) -> float:
        return 1.0 / (self.g - 1)

    @property
    def radius(self) -> float:
        return self.spacing / 2.0

    def coordinates(self) -> np.ndarray:
        """(g^2, 2) array of detector positions."""
        axis = np.linspace(0.0, 1.0, self.g)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        return np.column_stack([xx.ravel(), yy.ravel()])


@dataclass(frozen=True)
class CurveFamily:
    """A parametrized family y = evaluator(x, theta) over a finite theta grid.

    Curve points falling outside [0, 1]^2 are ignored (never clamped).
    """

    evaluator: Callable[[np.ndarray, tuple], np.ndarray]
    thetas: Sequence[tuple]


@dataclass(frozen=True)
class PlanimeterEstimate:
    satisfied: int
    total: int

    @property
    def fraction(self) -> float:
        return self.satisfied / self.total


def required_grid_size(b: int, err: float) -> int:
    """Smallest detector-per-side count with error bound b/g <= err.

    Clamped up to the module minimum of 3 detectors per side.
    """
    if b < 1:
        raise DomainError(f"b must be >= 1, got {b}")
    if not 0.0 < err < 1.0:
        raise DomainError(f"err must lie in (0, 1), got {err}")
    return max(3, math.ceil(b / err))


def estimate_area(
    grid: DetectorGrid,
    fam: CurveFamily,
    fill: FillMode = "curve-only",
    sample_step: float | None = None,
    circle_area: bool = False,
    radius: float | None = None,
) -> tuple[PlanimeterEstimate, np.ndarray]:
    """Satisfied-detector count for the family, plus the boolean mask.

    fill="below"/"above" additionally satisfies detectors on that side
    of any curve. circle_area scales the reported count by pi/4 (the
    covered-circle variant); the default fraction-of-detectors form is
    the one consistent with estimating the fraction of the unit square.
    radius overrides the detection tolerance (defaults to the grid's);
    Returns (estimate, mask) with mask shaped (g, g), indexed [ix, iy].
    """
    r = grid.radius if radius is None else radius
    step = r / 2.0 if sample_step is None else sample_step
    if step > r:
        raise BadSampleStep(f"sample_step {step} exceeds detector radius {r}")
    det = grid.coordinates()
    satisfied = np.zeros(len(det), dtype=bool)

    xs = np.arange(0.0, 1.0 + step / 2.0, step)
    xs = np.clip(xs, 0.0, 1.0)
    det_x = det[:, 0]
    det_y = det[:, 1]
    for theta in fam.thetas:
        ys = np.asarray(fam.evaluator(xs, theta), dtype=float)
        inside = (ys >= 0.0) & (ys <= 1.0)
        if inside.any():
            pts = np.column_stack([xs[inside], ys[inside]])
            todo = ~satisfied
            if todo.any():
                tree = cKDTree(pts)
                dist, _ = tree.query(det[todo], k=1)
                hit = dist <= r + 1e-12
                satisfied[np.flatnonzero(todo)[hit]] = True
        if fill != "curve-only":
            y_at_det = np.asarray(fam.evaluator(det_x, theta), dtype=float)
            if fill == "below":
                satisfied |= det_y <= y_at_det
            else:
                satisfied |= det_y >= y_at_det
        if satisfied.all():
            break

    count = int(satisfied.sum())
    if circle_area:
        count = int(round(count * math.pi / 4.0))
    est = PlanimeterEstimate(satisfied=count, total=grid.g**2)
    return est, satisfied.reshape(grid.g, grid.g)


def estimate_to_json(est: PlanimeterEstimate, g: int) -> str:
    return json.dumps({"g": g, "satisfied": est.satisfied, "fraction": est.fraction})


def line_family(slope: float, intercepts: Sequence[float]) -> CurveFamily:
    """Family of lines y = slope * x + c over the given intercepts."""
    return CurveFamily(
        evaluator=lambda x, theta: slope * x + theta[0],
        thetas=[(c,) for c in intercepts],
    )


def acc_band_family(c_max: float, spacing: float) -> CurveFamily:
    """Unit-slope lines y = x + c sweeping c over [-c_max, c_max].

    The sweep step is at most `spacing` so the band interior is covered.
    """
    if c_max < 0:
        raise DomainError("c_max must be >= 0")
    n = max(2, math.ceil(2.0 * c_max / spacing) + 1)
    return line_family(1.0, np.linspace(-c_max, c_max, n))
