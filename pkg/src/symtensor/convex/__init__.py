from .bodies import (
    Body,
    Containment,
    DegenerateBodyError,
    DimensionMismatchError,
    Ellipsoid,
    HPolytope,
    Interval,
    OracleBody,
    RepresentationError,
    VPolytope,
    as_hpolytope,
    as_vpolytope,
    contains,
    gauge,
    inclusion_factor,
    linear_image,
    polar,
    polar_generators,
    reduce_generators,
    scaled,
    support,
)
from .enumeration import DeskScaleError
from .io import FORMAT, FormatError, body_from_dict, body_to_dict, read_body, write_body
from .lp import LinProgram, LPError, lp_solve
from .rational import Rational, as_rational, format_rational, parse_rational
