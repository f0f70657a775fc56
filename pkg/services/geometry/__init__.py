"""Star-shaped domains: parametrization, quadrature, collocation and descriptors."""

from services.geometry.collocation import (
    CollocationSet,
    collocation_angles,
    interior_points,
    theta_count,
)
from services.geometry.descriptors import (
    Descriptors,
    InradiusDiameterCheck,
    boundary_sample,
    descriptors,
    height,
    inradius_diameter_check,
    is_convex_sampled,
)
from services.geometry.measures import (
    QuadratureRule,
    centroid,
    normalize_unit_volume,
    surface_area,
    surface_quadrature,
    volume,
    volume_gradient,
    volume_quadrature,
)
from services.geometry.mesh import mesh_grid
from services.geometry.shape import (
    CylinderDomain,
    ShapeCoefficients,
    StarShapedDomain,
    ball_shape,
    cylinder_like_shape,
    fit_radius_function,
    oblate_shape,
    perturbed_ball,
    prolate_shape,
    radius,
    spheroid_shape,
    surface_frame,
    surface_point,
    unit_direction,
    unit_volume_ball,
)

__all__ = [
    "CollocationSet",
    "CylinderDomain",
    "Descriptors",
    "InradiusDiameterCheck",
    "QuadratureRule",
    "ShapeCoefficients",
    "StarShapedDomain",
    "ball_shape",
    "boundary_sample",
    "centroid",
    "collocation_angles",
    "cylinder_like_shape",
    "descriptors",
    "fit_radius_function",
    "height",
    "inradius_diameter_check",
    "interior_points",
    "is_convex_sampled",
    "mesh_grid",
    "normalize_unit_volume",
    "oblate_shape",
    "perturbed_ball",
    "prolate_shape",
    "radius",
    "spheroid_shape",
    "surface_area",
    "surface_frame",
    "surface_point",
    "surface_quadrature",
    "theta_count",
    "unit_direction",
    "unit_volume_ball",
    "volume",
    "volume_gradient",
    "volume_quadrature",
]
