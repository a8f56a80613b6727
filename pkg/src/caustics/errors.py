"""Exception hierarchy shared by all modules."""


class CausticsError(Exception):
    pass


class DomainError(CausticsError, ValueError):
    """Argument outside the domain where an operation is defined."""


class NotConvexError(DomainError):
    pass


class NumericError(CausticsError, ArithmeticError):
    """A bracketing, quadrature or iteration step failed."""


class EscapeError(NumericError):
    def __init__(self, step, point):
        super().__init__(f"iterate left the annulus at step {step}: {point}")
        self.step = step
        self.point = point


class DegenerateTwistError(NumericError):
    pass


class RootNotFoundError(NumericError):
    pass


class BranchLostError(NumericError):
    def __init__(self, message, last_good=None, q=None):
        super().__init__(message)
        self.last_good = last_good
        self.q = q


class ConvergenceError(NumericError):
    pass


class ContractError(CausticsError):
    """A documented precondition of an operation does not hold."""


class SizeError(CausticsError, ValueError):
    pass


class ConfigError(CausticsError, ValueError):
    pass


class ScanAborted(CausticsError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
