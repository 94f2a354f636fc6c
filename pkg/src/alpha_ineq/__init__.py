"""Classical inequalities over fractal (alpha-dimensional) reals."""

from .catalog import (
    INEQUALITIES,
    Bernoulli,
    Case,
    ConjugatePair,
    ExponentTuple,
    FormVariant,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    Status,
    TolerancePolicy,
    Verdict,
    Young,
)
from .certifier import EqualityCertificate, check_equality_manifold, minimize_gap, perturb_check
from .core import AlphaReal, Dimension, Ordering, cmp, make, power, scalar_mul, value
from .errors import (
    AlphaIneqError,
    DimensionError,
    DomainError,
    IngestionError,
    PoleError,
    RangeError,
    RegimeError,
    ShapeError,
    UsageError,
)
from .harness import Sampling, SuiteReport, run_suite, shrink

__version__ = "0.1.0"
