"""hypercheck: exact desk-scale verification of hypercontractivity-type
inequalities, level-d inequalities, and intersecting-family bounds on finite
product probability spaces."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    HypercheckError,
    HypothesisError,
    ParseError,
    ResourceError,
    ShapeError,
    UnsupportedError,
)
from .space import (
    Domain,
    FunctionTable,
    ProductSpace,
    biased_space,
    expectation,
    inner_product,
    lp_norm,
    restrict,
    table_from_json,
    table_to_json,
    uniform_space,
)

__all__ = [
    "ConfigError", "DomainError", "HypercheckError", "HypothesisError",
    "ParseError", "ResourceError", "ShapeError", "UnsupportedError",
    "Domain", "FunctionTable", "ProductSpace", "biased_space",
    "expectation", "inner_product", "lp_norm", "restrict",
    "table_from_json", "table_to_json", "uniform_space",
    "__version__",
]
