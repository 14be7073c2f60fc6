"""Volumetric image/mask containers and synthetic vascular phantom generation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import ValidationError

Spacing = Tuple[float, float, float]


@dataclass
class Volume:
    """A 3D scalar image with physical voxel spacing in millimetres.

    Grids are indexed (x, y, z); on disk the x axis is the fastest-varying.
    """

    data: np.ndarray
    spacing: Spacing

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=np.float32)
        if self.data.ndim != 3:
            raise ValidationError(f"volume data must be 3D, got shape {self.data.shape}")
        if not np.isfinite(self.data).all():
            raise ValidationError("volume intensities must be finite")
        self.spacing = _check_spacing(self.spacing)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(int(n) for n in self.data.shape)


@dataclass
class Mask:
    """A binary 3D grid aligned with a Volume (same dims and spacing)."""

    data: np.ndarray
    spacing: Spacing

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.ndim != 3:
            raise ValidationError(f"mask data must be 3D, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if not np.isin(arr, (0, 1)).all():
                raise ValidationError("mask values must all be 0 or 1")
            arr = arr.astype(np.uint8)
        elif not np.isin(arr, (0, 1)).all():
            raise ValidationError("mask values must all be 0 or 1")
        self.data = arr
        self.spacing = _check_spacing(self.spacing)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(int(n) for n in self.data.shape)

    def foreground_count(self) -> int:
        return int(self.data.sum())


def _check_spacing(spacing) -> Spacing:
    spacing = tuple(float(s) for s in spacing)
    if len(spacing) != 3:
        raise ValidationError(f"spacing must have 3 components, got {len(spacing)}")
    if not all(np.isfinite(s) and s > 0 for s in spacing):
        raise ValidationError(f"spacing components must be finite and > 0, got {spacing}")
    return spacing


# Intensity regime: CT-like background around 100 and bright vessels around
# 400 so that a [0, 500] display window clips tails on both ends.
DEFAULT_BACKGROUND = (100.0, 50.0)
DEFAULT_VESSEL = (400.0, 50.0)


@dataclass
class PhantomSpec:
    """Parameters for a synthetic tubular-vessel phantom."""

    seed: int
    dims: Tuple[int, int, int] = (64, 64, 64)
    n_branches: int = 3
    radius_range: Tuple[float, float] = (1.0, 3.0)
    vessel_intensity: Tuple[float, float] = DEFAULT_VESSEL
    background_intensity: Tuple[float, float] = DEFAULT_BACKGROUND
    spacing: Spacing = (0.4, 0.4, 0.625)

    def __post_init__(self) -> None:
        self.dims = tuple(int(n) for n in self.dims)
        if len(self.dims) != 3 or any(n <= 0 for n in self.dims):
            raise ValidationError(f"dims must be 3 positive integers, got {self.dims}")
        if self.n_branches < 0:
            raise ValidationError("n_branches must be >= 0")
        r_min, r_max = (float(r) for r in self.radius_range)
        if r_min < 1:
            raise ValidationError("minimum radius must be >= 1 voxel")
        if r_min > r_max:
            raise ValidationError(f"radius_range must satisfy r_min <= r_max, got {self.radius_range}")
        self.radius_range = (r_min, r_max)
        for name, pair in (("vessel", self.vessel_intensity), ("background", self.background_intensity)):
            mean, std = (float(v) for v in pair)
            if not (np.isfinite(mean) and np.isfinite(std) and std >= 0):
                raise ValidationError(f"{name} intensity (mean, std) must be finite with std >= 0")
        self.vessel_intensity = tuple(float(v) for v in self.vessel_intensity)
        self.background_intensity = tuple(float(v) for v in self.background_intensity)
        self.spacing = _check_spacing(self.spacing)


@dataclass
class Branch:
    """One phantom vessel: a polyline centerline plus a tube radius in voxels."""

    points: np.ndarray  # (N, 3) float64, voxel coordinates
    radius: float


def _sample_branches(spec: PhantomSpec, rng: np.random.Generator) -> List[Branch]:
    """Draw smoothed random-walk centerlines confined to the volume interior."""
    r_min, r_max = spec.radius_range
    dims = np.asarray(spec.dims, dtype=np.float64)
    margin = r_max
    lo = np.minimum(margin, (dims - 1) / 2)
    hi = np.maximum(dims - 1 - margin, (dims - 1) / 2)
    n_steps = max(8, int(1.5 * min(spec.dims)))

    branches: List[Branch] = []
    for _ in range(spec.n_branches):
        radius = float(rng.uniform(r_min, r_max))
        pos = rng.uniform(lo, hi)
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction) + 1e-12
        points = np.empty((n_steps, 3), dtype=np.float64)
        points[0] = pos
        for k in range(1, n_steps):
            direction = direction + 0.35 * rng.standard_normal(3)
            direction /= np.linalg.norm(direction) + 1e-12
            pos = np.clip(pos + direction, lo, hi)
            points[k] = pos
        points = _moving_average(points, window=7)
        points = np.clip(points, lo, hi)
        branches.append(Branch(points=points, radius=radius))
    return branches


def _moving_average(points: np.ndarray, window: int) -> np.ndarray:
    if len(points) <= window:
        return points
    kernel = np.ones(window) / window
    smoothed = np.empty_like(points)
    for axis in range(3):
        padded = np.pad(points[:, axis], window // 2, mode="edge")
        smoothed[:, axis] = np.convolve(padded, kernel, mode="valid")
    return smoothed


def _rasterize_tubes(branches: List[Branch], dims: Tuple[int, int, int]) -> np.ndarray:
    """Union of balls of the branch radius centred on every centerline point."""
    mask = np.zeros(dims, dtype=np.uint8)
    nx, ny, nz = dims
    for branch in branches:
        r = branch.radius
        r2 = r * r
        for p in branch.points:
            x0, y0, z0 = (max(0, int(np.ceil(c - r))) for c in p)
            x1 = min(nx - 1, int(np.floor(p[0] + r)))
            y1 = min(ny - 1, int(np.floor(p[1] + r)))
            z1 = min(nz - 1, int(np.floor(p[2] + r)))
            if x1 < x0 or y1 < y0 or z1 < z0:
                continue
            xs = np.arange(x0, x1 + 1, dtype=np.float64) - p[0]
            ys = np.arange(y0, y1 + 1, dtype=np.float64) - p[1]
            zs = np.arange(z0, z1 + 1, dtype=np.float64) - p[2]
            d2 = xs[:, None, None] ** 2 + ys[None, :, None] ** 2 + zs[None, None, :] ** 2
            region = mask[x0 : x1 + 1, y0 : y1 + 1, z0 : z1 + 1]
            region[d2 <= r2] = 1
    return mask


def phantom_branches(spec: PhantomSpec) -> List[Branch]:
    """The centerline geometry generate_phantom would produce for this spec."""
    return _sample_branches(spec, np.random.default_rng(spec.seed))


def generate_phantom(spec: PhantomSpec) -> Tuple[Volume, Mask]:
    """Synthesize a (Volume, Mask) pair with known tubular ground truth.

    Deterministic: the same spec (seed included) always yields bit-identical
    output. The mask is exactly the union of balls of each branch radius
    centred on its centerline points.
    """
    rng = np.random.default_rng(spec.seed)
    branches = _sample_branches(spec, rng)
    mask_data = _rasterize_tubes(branches, spec.dims)

    bg_mean, bg_std = spec.background_intensity
    vs_mean, vs_std = spec.vessel_intensity
    data = bg_mean + bg_std * rng.standard_normal(spec.dims)
    fg = mask_data.astype(bool)
    n_fg = int(fg.sum())
    if n_fg:
        data[fg] = vs_mean + vs_std * rng.standard_normal(n_fg)

    volume = Volume(data=data.astype(np.float32), spacing=spec.spacing)
    mask = Mask(data=mask_data, spacing=spec.spacing)
    return volume, mask
