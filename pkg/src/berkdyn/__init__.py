"""berkdyn: exact arithmetic for dynamics on the Berkovich projective line."""

from .errors import (
    BerkdynError,
    DivisionByZero,
    ExtensionBound,
    FractionalOffsetMismatch,
    IncompatibleBackends,
    Inconclusive,
    InfinityOperand,
    Mismatch,
    NegativeValuation,
    NonzeroMass,
    NotBernoulli,
    ParamDomain,
    PoleAtCenter,
    PrecisionExhausted,
    ProbeFailure,
    TypeIAtom,
    TypeIOperand,
)
from .fields import (
    Backend,
    FieldElement,
    EQUICHAR0,
    EQUICHARP,
    INF,
    PADIC,
    parse_backend,
    residue_roots,
    uniformizer_pow,
    valuation,
)

__all__ = [
    "Backend",
    "FieldElement",
    "EQUICHAR0",
    "EQUICHARP",
    "INF",
    "PADIC",
    "parse_backend",
    "residue_roots",
    "uniformizer_pow",
    "valuation",
    "BerkdynError",
    "DivisionByZero",
    "ExtensionBound",
    "FractionalOffsetMismatch",
    "IncompatibleBackends",
    "Inconclusive",
    "InfinityOperand",
    "Mismatch",
    "NegativeValuation",
    "NonzeroMass",
    "NotBernoulli",
    "ParamDomain",
    "PoleAtCenter",
    "PrecisionExhausted",
    "ProbeFailure",
    "TypeIAtom",
    "TypeIOperand",
]

__version__ = "0.1.0"
