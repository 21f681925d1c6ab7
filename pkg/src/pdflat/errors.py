"""Exception types shared across the package."""


class PdflatError(Exception):
    pass


class ArityMismatch(PdflatError, ValueError):
    """Operands live in polynomial rings with different variable counts."""


class NotHomogeneous(PdflatError, ValueError):
    pass


class CapExceeded(PdflatError, ValueError):
    """A configured size guardrail would be exceeded."""


class BadPrime(PdflatError, ValueError):
    """The prime divides a denominator of the matrix; retry with another prime."""


class PreconditionError(PdflatError, ValueError):
    pass
