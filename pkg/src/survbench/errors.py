"""Exception types that distinguish the package's failure modes.

Plain ``ValueError`` is used for bad parameters; file-system problems
surface as the builtin ``OSError`` family.
"""


class SchemaError(ValueError):
    """A delimited file's header does not match what was requested."""


class DataError(ValueError):
    """A cell in a delimited file is missing or cannot be parsed."""


class ShapeError(ValueError):
    """Array dimensions do not line up (covariate width, layer sizes)."""


class NumericError(ArithmeticError):
    """A computation produced a non-finite value (overflow, NaN input)."""


class TrainingError(RuntimeError):
    """Training cannot start or proceed (e.g. a split with no events)."""


class EstimationError(RuntimeError):
    """An estimator has no usable observations (e.g. no events)."""


class EvaluationError(RuntimeError):
    """A metric is undefined on the given data (no comparable pairs,
    zero censoring-survival weight)."""
