"""Exception types shared across the toolkit."""


class ZsalgError(Exception):
    """Base class for toolkit errors."""


class UnvalidatedCategoryError(ZsalgError):
    """An operation requiring a validated category was called before validation."""


class MalformedSquaresError(ZsalgError):
    """The commuting-square table is not a bijection or has inconsistent endpoints."""


class MalformedTableError(ZsalgError):
    """A groupoid or category table is structurally broken."""


class DegreeMismatchError(ZsalgError):
    """Requested factorization degrees do not sum to the path degree."""


class NotComposableError(ZsalgError):
    """Attempted composition of morphisms with mismatched endpoints."""


class UndefinedGeneratorError(ZsalgError):
    """An action table lookup hit a generator pair with no entry."""


class NotApplicableError(ZsalgError):
    """Operation precondition not met (e.g. tail category is not a groupoid)."""


class UnknownUnitError(ZsalgError):
    """Requested unit is not in the groupoid."""


class NotIndependentError(ZsalgError):
    """A set required to be independent is not."""


class CombinatorialBlowupError(ZsalgError):
    """Enumeration exceeded the configured budget."""


class NotDegreeAdditiveError(ZsalgError):
    """Rotation cocycles need additive path-part degrees."""


class BadGeneratorError(ZsalgError):
    """Homotopy generator fails the additive cocycle identity."""


class WindowExceededError(ZsalgError):
    """A needed enumeration exceeds the configured degree window."""


class NoSourcesRequiredError(ZsalgError):
    """Level raising needs a row-finite graph with no sources on the window."""


class OffGridError(ZsalgError):
    """Fiber evaluation requested at a point not on the sample grid."""


class NotInModuleFormError(ZsalgError):
    """Correspondence input is not a sum of edge-times-subalgebra terms."""


class InfiniteBasisError(ZsalgError):
    """Truncated representation needs finite vertex and groupoid data."""
