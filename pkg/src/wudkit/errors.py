"""Exception hierarchy shared by all wudkit modules."""


class WudkitError(Exception):
    """Base class for all wudkit errors."""


class ConstantInputError(WudkitError):
    """A nonconstant polynomial was required."""


class ModulusTooLargeError(WudkitError):
    """Modulus exceeds the table-backed discrete-log limit (10**7)."""


class BudgetExceededError(WudkitError):
    """An enumeration or sieve budget was exceeded."""


class BeyondVUndefinedError(WudkitError):
    """A prime-power exponent exceeds V and no extension rule covers it."""


class ZeroDensityError(WudkitError):
    """alpha_F(d) = 0, so the lift-count formula is undefined."""


class EmptyRkError(WudkitError):
    """R_k(q) is empty; annihilator tuples are undefined."""


class NotAdmissibleError(WudkitError):
    """No admissible index k <= V exists for this modulus."""


class RegimeMismatchError(WudkitError):
    """N does not match the requested estimate regime."""


class PrecETooSmallError(WudkitError):
    """Prime-power exponent e below the bound's precondition."""


class SquarefullInputError(WudkitError):
    """Polynomial is squarefull where a non-squarefull one is required."""


class MultDependentError(WudkitError):
    """Polynomials are multiplicatively dependent where independence is required."""


class PolyVanishesModEllError(WudkitError):
    """Polynomial is identically zero mod ell."""
