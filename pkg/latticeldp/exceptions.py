"""Exceptions raised by latticeldp

Every error carries a short machine-readable `code` and the process
`exit_code` used by the command-line tool.
"""


class LatticeLDPError(Exception):
    exit_code = 1
    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def error_line(self):
        """Single-line description printed to stderr by the CLI
        """
        message = str(self).replace("\n", " ")
        return (f"error code={self.code} exit={self.exit_code} "
                f"kind={type(self).__name__} message={message}")


class ValidationError(LatticeLDPError, ValueError):
    exit_code = 2
    code = "invalid_argument"


class DomainError(ValidationError):
    """A point lies outside the state domain
    """
    code = "domain"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NumericalError(LatticeLDPError, ArithmeticError):
    exit_code = 3
    code = "numerical"


class LegendreConvergenceError(NumericalError):
    code = "legendre_convergence"

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BudgetExceededError(LatticeLDPError):
    exit_code = 4
    code = "budget_exceeded"

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required
