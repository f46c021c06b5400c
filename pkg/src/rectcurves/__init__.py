"""Rectifying curves, cone geodesics, slant helices and rotation-minimizing
normal fields for curves in Euclidean space of any dimension."""
from .cones import (circularity_check, cone_geodesic, euler_lagrange_residual, geodesic_check,
                    make_cone, slant_helix_check, unroll_2cone)
from .correspondence import (curve_from_curvatures, rectifying_equation_residual_3d,
                             rectifying_equation_residual_4d, rectifying_to_spherical,
                             spherical_equation_residual_3d, spherical_to_rectifying)
from .curves import (CurveError, NonRegularCurveError, make_builtin_curve, random_spherical_curve,
                     reparameterize_arclength, sample_jets)
from .frames import (classify_rm_normal, coordinate_functions, frenet_apparatus,
                     integrate_coordinate_ode, rm_frame)
from .kernels import BACKEND
from .linalg import fit_constant_direction, orthonormalize
from .rectify import check_j_rectifying, check_rectifying, construct_rectifying, find_vertex

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CurveError", "NonRegularCurveError", "check_j_rectifying", "check_rectifying",
    "circularity_check", "classify_rm_normal", "cone_geodesic", "construct_rectifying",
    "coordinate_functions", "curve_from_curvatures", "euler_lagrange_residual", "find_vertex",
    "fit_constant_direction", "frenet_apparatus", "geodesic_check", "integrate_coordinate_ode",
    "make_builtin_curve", "make_cone", "orthonormalize", "random_spherical_curve",
    "rectifying_equation_residual_3d", "rectifying_equation_residual_4d",
    "rectifying_to_spherical", "reparameterize_arclength", "rm_frame", "sample_jets",
    "slant_helix_check", "spherical_equation_residual_3d", "spherical_to_rectifying",
    "unroll_2cone",
]
