"""Exception types raised by the solver toolkit."""


class InvalidArgument(ValueError):
    """A constructor or operation received arguments outside its domain."""


class DomainError(ValueError):
    """A formula was evaluated where it is undefined (e.g. log of a non-positive node)."""


class NumericFailure(ArithmeticError):
    """A coefficient or intermediate value turned NaN or infinite.

    ``context`` carries whatever location information the raiser had
    (node index, time level, control value).
    """

    def __init__(self, message, **context):
        self.context = context
        if context:
            details = ", ".join(f"{k}={v!r}" for k, v in context.items())
            message = f"{message} ({details})"
        super().__init__(message)


class SolverFailure(RuntimeError):
    """Linear solve broke down or missed its residual target."""

    def __init__(self, message, residual=float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residual={residual:.3e})")


class NonConvergence(RuntimeError):
    """Policy iteration hit its iteration cap before the gap fell below tolerance."""

    def __init__(self, message, gap, iterations, step=None):
        self.gap = gap
        self.iterations = iterations
        self.step = step
        super().__init__(f"{message} (gap={gap:.3e}, iterations={iterations}, step={step})")
