"""Triangle-based structuring and editing of image colors in RGB space."""

from .color_space import (
    RADIAL_EPS,
    IlluminantAxis,
    from_cylindrical,
    linear_to_srgb,
    srgb_to_linear,
    to_cylindrical,
)
from .editing import EditedStructure, EditScript, apply_edit, clamp_gamut, filter_point, recolor
from .fitting import FitConfig, FitReport, fit, objective
from .geometry import Barycentric, Triangle3, apply_barycentric, barycentric_of, closest_point, rotate_about_axis
from .imaging import ImageBuffer, export_cloud_ply, load_image, save_image
from .structure import TriangularStructure, assign, load_structure, save_structure, sector_of, validate
from .synth import MaterialSpec, SyntheticSpec, generate_cloud, material_vertices, synthetic_image
from .workflow import fit_image, init_from_angles, recolor_image, uniform_init

__version__ = "0.1.0"

__all__ = [
    "RADIAL_EPS",
    "IlluminantAxis",
    "srgb_to_linear",
    "linear_to_srgb",
    "to_cylindrical",
    "from_cylindrical",
    "Triangle3",
    "Barycentric",
    "closest_point",
    "barycentric_of",
    "apply_barycentric",
    "rotate_about_axis",
    "TriangularStructure",
    "assign",
    "sector_of",
    "validate",
    "load_structure",
    "save_structure",
    "FitConfig",
    "FitReport",
    "fit",
    "objective",
    "EditScript",
    "EditedStructure",
    "recolor",
    "filter_point",
    "clamp_gamut",
    "apply_edit",
    "ImageBuffer",
    "load_image",
    "save_image",
    "export_cloud_ply",
    "SyntheticSpec",
    "MaterialSpec",
    "generate_cloud",
    "material_vertices",
    "synthetic_image",
    "uniform_init",
    "init_from_angles",
    "fit_image",
    "recolor_image",
]
