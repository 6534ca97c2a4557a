"""Semi-infinite interfacial cracks between monoclinic elastic half-planes.

The package builds the bimaterial parameter set from elastic constants
(Stroh roots, surface admittance, Dundurs-type parameters) and solves the
crack-face integral identities for Mode III and for the in-plane modes,
returning openings, interface tractions and stress intensity factors.
"""

from .bimaterial import BimaterialParams, alpha_admissible_interval, dundurs_parameters
from .errors import (
    ConfigError,
    CrackError,
    DegenerateOperator,
    DegenerateRoots,
    InadmissibleLoad,
    InadmissibleMaterial,
    InadmissibleParameters,
    InvalidGeometry,
    InvalidMaterial,
    OutOfScope,
    PhysicsError,
    SingularInput,
    UnreliableExtraction,
    UnsupportedEvaluation,
)
from .materials import MaterialSpec, reduced_compliance, stroh_matrices, validate_monoclinic
from .mode3_solver import (
    LoadSpecAntiplane,
    antiplane_residual,
    sif_extract,
    solve_general_antiplane,
    solve_line_force_skew,
    solve_line_force_sym,
)
from .plane_solver import (
    LoadSpecPlane,
    forward_identity_residual,
    skew_sif_sweep,
    solve_general_plane_sym,
    solve_plane_skew_line,
    solve_plane_sym_line,
)
from .singular_ops import (
    HalfLineFunction,
    QuadratureScheme,
    apply_Sc,
    apply_Ss,
    cauchy_S,
    invert_Ss_weighted,
)
from .stroh import stroh_system

__version__ = "0.1.0"

__all__ = [
    "BimaterialParams",
    "ConfigError",
    "CrackError",
    "DegenerateOperator",
    "DegenerateRoots",
    "HalfLineFunction",
    "InadmissibleLoad",
    "InadmissibleMaterial",
    "InadmissibleParameters",
    "InvalidGeometry",
    "InvalidMaterial",
    "LoadSpecAntiplane",
    "LoadSpecPlane",
    "MaterialSpec",
    "OutOfScope",
    "PhysicsError",
    "QuadratureScheme",
    "SingularInput",
    "UnreliableExtraction",
    "UnsupportedEvaluation",
    "alpha_admissible_interval",
    "antiplane_residual",
    "apply_Sc",
    "apply_Ss",
    "cauchy_S",
    "dundurs_parameters",
    "forward_identity_residual",
    "invert_Ss_weighted",
    "reduced_compliance",
    "sif_extract",
    "skew_sif_sweep",
    "solve_general_antiplane",
    "solve_general_plane_sym",
    "solve_line_force_skew",
    "solve_line_force_sym",
    "solve_plane_skew_line",
    "solve_plane_sym_line",
    "stroh_matrices",
    "stroh_system",
    "validate_monoclinic",
]
