"""Inversion in an ellipse: the point map, its metric relations, exact
images of lines and conics, and the elliptic Pappus chain."""

__version__ = "0.1.0"

from .errors import (CenterSingular, DegenerateQuad, EllipticInversionError, EmptyResult,
                     IndexOutOfRange, InvalidSpec, MidpointSingular, OffLine, PreconditionError,
                     SingularAtOrigin, UnsupportedDegree, ZeroCurve)
from .geometry import (DEFAULT_TOL, Direction, Point, RigidMotion, Tolerance, apply_motion,
                       are_collinear, distance, signed_distance_along)
from .inversion import (INFINITY, DirectionalRadius, Ellipse, conjugated, directional_radius,
                        invert_point, invert_point_by_polar, invert_point_by_ray,
                        invert_point_by_squash, polar_line)
from .metric import (CollinearQuad, cross_ratio, distance_cross_ratio, harmonic_conjugate,
                     inverse_distance, is_harmonic)
from .curves import (CurveClass, ImplicitCurve, InversionEllipseExact, classify_image,
                     common_points_of_images, images_orthogonal_at_origin,
                     images_tangent_at_origin, is_homothetic, pushforward, sample_image,
                     tangent_direction_at_origin)
from .pappus import (ChainElement, ChainSpec, build_chain, chain_csv, chain_inversion_witness,
                     verify_chain)
