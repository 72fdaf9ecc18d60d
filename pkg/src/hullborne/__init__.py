"""Convex-hull buoyancy for triangle meshes in still or oscillating water."""

from .buoyancy import BuoyancyReport, FluidParams, assembly_buoyancy, buoyant_force_magnitude
from .dynamics import RigidState, SimConfig, Trace, run_drop, step
from .hull import (
    ConvexHull,
    DegenerateHull,
    hull_volume,
    quickhull,
    vertex_mean_centroid,
    volumetric_centroid,
)
from .mesh_io import TriMesh, dump_obj, load_obj, mesh_total_volume, parse_obj
from .primitives import builtin_primitive
from .submersion import (
    ClipMode,
    Method,
    SubmergedRegion,
    VertexTracker,
    hull_submerged_volume,
    sliced_submerged_volume,
    submerged_point_set,
    update_vertex_tracker,
    volume_draft_curve,
)
from .water import WaterSurface, level_at

__version__ = "0.1.0"

__all__ = [
    "BuoyancyReport",
    "FluidParams",
    "assembly_buoyancy",
    "buoyant_force_magnitude",
    "RigidState",
    "SimConfig",
    "Trace",
    "run_drop",
    "step",
    "ConvexHull",
    "DegenerateHull",
    "hull_volume",
    "quickhull",
    "vertex_mean_centroid",
    "volumetric_centroid",
    "TriMesh",
    "dump_obj",
    "load_obj",
    "mesh_total_volume",
    "parse_obj",
    "builtin_primitive",
    "ClipMode",
    "Method",
    "SubmergedRegion",
    "VertexTracker",
    "hull_submerged_volume",
    "sliced_submerged_volume",
    "submerged_point_set",
    "update_vertex_tracker",
    "volume_draft_curve",
    "WaterSurface",
    "level_at",
]
