"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration and schema problems
exit with 2, data content problems with 1.
"""


class MiningError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(MiningError):
    """Schema document is malformed or inconsistent with the data."""


class LoadError(MiningError):
    """Data content cannot be parsed into the declared shape."""


class DimensionError(LoadError):
    """Row or column counts disagree between related inputs."""


class LabelError(LoadError):
    """A class label falls outside the established dictionary."""


class ConfigError(MiningError):
    """A parameter value or combination is invalid."""


class MissingTruthError(ConfigError):
    """A measure needs ground truth but the dataset has none."""


class BinaryTargetError(ConfigError):
    """A measure is only defined for two-class problems."""


class UndefinedInputError(MiningError):
    """The measure is undefined on this input (e.g. an empty subgroup)."""


class UndefinedSubgroupError(UndefinedInputError):
    """The subgroup lacks the structure the measure requires.

    Search treats candidates raising this as skippable, not as failures.
    """


class OracleBudgetError(MiningError):
    """Exhaustive enumeration would exceed the configured candidate budget."""
