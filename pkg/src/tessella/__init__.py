"""Perfect precise colorings of semiregular tilings built from triangle groups."""
from ._backend import BACKEND
from .catalog import FamilyId, Mode, TilingInstance, expected_count, instantiate, parse_instance
from .coloring import (
    ColoringScheme,
    classify,
    count_precise,
    enumerate_colorings,
    is_precise,
    patch_audit,
    verify_proposition,
)
from .errors import (
    GeometryMismatch,
    InvalidParameters,
    NoConvergence,
    NotAReflection,
    PaletteTooSmall,
    ResourceExhausted,
    TessellaError,
    ToleranceCollision,
)
from .patch import realize_patch
from .render import RenderOptions, overlay_mirrors, render

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ColoringScheme",
    "FamilyId",
    "GeometryMismatch",
    "InvalidParameters",
    "Mode",
    "NoConvergence",
    "NotAReflection",
    "PaletteTooSmall",
    "RenderOptions",
    "ResourceExhausted",
    "TessellaError",
    "TilingInstance",
    "ToleranceCollision",
    "classify",
    "count_precise",
    "enumerate_colorings",
    "expected_count",
    "instantiate",
    "is_precise",
    "overlay_mirrors",
    "parse_instance",
    "patch_audit",
    "realize_patch",
    "render",
    "verify_proposition",
    "__version__",
]
