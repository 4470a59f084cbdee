"""Exact computation in the monoid of monotone injective partial selfmaps of
``N^n`` (product order) with cofinite domain and range."""
from .errors import (
    DimensionMismatch,
    InvalidElement,
    PosetMapError,
    PreconditionError,
    RepresentationError,
    TheoremViolation,
    UnsupportedDimension,
)
from .pmap import (
    PiecewiseMap,
    Rule,
    ValidityReport,
    compose,
    cylinder_shift,
    dom_complement,
    equals,
    evaluate,
    from_parts,
    identity,
    identity_off,
    inverse_if_valid,
    ran_complement,
    unit,
    validate,
)
from .regions import UNBOUNDED, Box, Interval, RegionSet, Space, leq

__version__ = "0.1.0"
