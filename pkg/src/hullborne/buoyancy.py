"""Archimedes forces for single meshes and multi-mesh assemblies."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .submersion import SubmergedRegion


@dataclass(frozen=True)
class FluidParams:
    rho_water: float = 1000.0
    g: float = 9.81

    def __post_init__(self):
        if not self.rho_water > 0:
            raise ValueError(f"rho_water must be > 0, got {self.rho_water}")
        if not self.g > 0:
            raise ValueError(f"g must be > 0, got {self.g}")


@dataclass(frozen=True)
class MeshForce:
    mesh_id: str
    force: float
    centroid: np.ndarray
    volume: float


@dataclass(frozen=True)
class BuoyancyReport:
    total_force: np.ndarray
    application_point: np.ndarray
    per_mesh: list[MeshForce] = field(default_factory=list)
    defined: bool = True

    @property
    def magnitude(self) -> float:
        return float(self.total_force[2])

    @property
    def volume(self) -> float:
        return sum(m.volume for m in self.per_mesh)


def buoyant_force_magnitude(params: FluidParams, volume: float) -> float:
    if volume < 0:
        raise ValueError(f"submerged volume must be >= 0, got {volume}")
    return params.rho_water * params.g * volume


def assembly_buoyancy(regions: Iterable[tuple[str, SubmergedRegion]], params: FluidParams = FluidParams(),
                      centroid_mode: str = "volumetric") -> BuoyancyReport:
    """Combine per-mesh submerged regions into one vertical force.

    Each mesh contributes rho*g*V at its centroid; the resultant acts at the
    volume-weighted mean of those centroids. When nothing is submerged the
    force is zero and the application point is NaN with ``defined`` False.
    """
    per_mesh = []
    for mesh_id, reg in regions:
        per_mesh.append(MeshForce(
            mesh_id=mesh_id,
            force=buoyant_force_magnitude(params, reg.volume),
            centroid=np.asarray(reg.centroid(centroid_mode), dtype=float),
            volume=float(reg.volume),
        ))
    if not per_mesh:
        raise ValueError("assembly_buoyancy needs at least one region")
    # fixed summation order keeps results independent of input order
    ordered = sorted(per_mesh, key=lambda m: (m.mesh_id, m.volume, tuple(np.nan_to_num(m.centroid))))
    fz = sum(m.force for m in ordered)
    vol = sum(m.volume for m in ordered)
    if vol <= 0.0:
        return BuoyancyReport(np.zeros(3), np.full(3, np.nan), per_mesh, defined=False)
    point = sum((m.centroid * m.volume for m in ordered if m.volume > 0), np.zeros(3)) / vol
    return BuoyancyReport(np.array([0.0, 0.0, fz]), point, per_mesh)
