"""Numerical model of the restricted superdisc: Grassmann-valued matrices,
the pseudounitary action, its symplectic structure and geometric quantization."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BranchError,
    DimensionError,
    FixtureError,
    IllConditionedError,
    ParityError,
    SingularityError,
    SuperdiscError,
)
from .grassmann import GrassmannElement, JetScalar  # noqa: E402
from .supermatrix import SpaceShape, SuperMatrix, J_matrix  # noqa: E402
from .disc import DiscPoint, GroupElement, LieElement, lift, moebius, phi  # noqa: E402
from .symplectic import TangentVector, cocycle, moment_map, omega, vector_field  # noqa: E402
from .quantize import MonomialSection, Section, central_term, fhat, rho, weight  # noqa: E402

__all__ = [
    "BranchError", "DimensionError", "FixtureError", "IllConditionedError", "ParityError",
    "SingularityError", "SuperdiscError", "GrassmannElement", "JetScalar", "SpaceShape",
    "SuperMatrix", "J_matrix", "DiscPoint", "GroupElement", "LieElement", "lift", "moebius", "phi",
    "TangentVector", "cocycle", "moment_map", "omega", "vector_field", "MonomialSection", "Section",
    "central_term", "fhat", "rho", "weight",
]
