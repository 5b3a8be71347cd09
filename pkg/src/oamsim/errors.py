"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one base class, while the CLI maps the finer
types onto distinct exit codes.
"""


class OamsimError(ValueError):
    """Base class for all errors raised by this package."""


class RecipeError(OamsimError):
    """A recipe file is malformed or semantically invalid."""


class GridClipError(OamsimError):
    """A requested field does not fit the sampling grid."""


class GeometryError(OamsimError):
    """Array shapes or pixel pitches of two operands disagree."""


class ConfigurationError(OamsimError):
    """A parameter combination is self-inconsistent (e.g. an iris that
    overlaps the zero diffraction order)."""


class NyquistError(OamsimError):
    """A measurement would undersample the structure it looks for."""


class QuadratureError(OamsimError):
    """Numerical integration failed to converge."""
