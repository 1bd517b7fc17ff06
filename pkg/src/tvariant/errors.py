"""Exception hierarchy shared by every module."""


class TVariantError(Exception):
    pass


class ParseError(TVariantError, ValueError):
    pass


class SizeMismatchError(TVariantError, ValueError):
    """Two values built over different ground sets were combined."""


class GuardError(TVariantError):
    """An enumeration guard (maximum n) was exceeded."""

    def __init__(self, what, n, limit):
        super().__init__(f"{what}: n={n} exceeds guard max_n={limit}")
        self.n = n
        self.limit = limit


class SaturationError(TVariantError, ValueError):
    pass


class ClosureError(TVariantError):
    def __init__(self, left, right, value):
        super().__init__(f"product not closed: {left} * {right} = {value} is not an element")
        self.witness = (left, right, value)


class AssociativityError(TVariantError):
    def __init__(self, a, b, c):
        super().__init__(f"associativity fails for ({a}, {b}, {c})")
        self.witness = (a, b, c)


class NotRegularError(TVariantError, ValueError):
    pass


class NotAnObjectError(TVariantError, ValueError):
    pass


class NotNormalConeError(TVariantError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvariantError(TVariantError, ValueError):
    pass
