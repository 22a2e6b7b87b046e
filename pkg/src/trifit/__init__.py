"""Fit a triangle with prescribed angles onto three concurrent lines, and the
equivalent great-circle problem on the sphere."""

from .errors import *  # noqa: F401,F403
from .geom import (
    LineConfig,
    LineThroughOrigin,
    LineTriple,
    TriangleShape,
    angle_between_directions,
    build_canonical_lines,
    interior_angles,
    validate_config,
    validate_shape,
)
from .solver import Solution, SolveRequest, VerificationReport, solve, verify
from .spherical import (
    EllipticPoint,
    GreatCircle,
    SphericalScene,
    elliptic_construct,
    oracle_search,
    scene_from_solution,
    verify_question1,
)
from .sullivan import SullivanFrame, make_frame
from .sweep import sweep

__version__ = "0.1.0"
