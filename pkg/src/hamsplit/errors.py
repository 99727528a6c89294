"""Exception types shared across the package."""


class UnsupportedSetError(ValueError):
    """Index set is not compatible with the requested transform."""


class SubstepFailureError(RuntimeError):
    """The inner ODE integrator of a nonlinear substep failed."""


class BlowUpError(RuntimeError):
    """Trajectory left the trust region (NaN/Inf or norm explosion)."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"blow-up detected at step {step}")


class ResonanceError(ArithmeticError):
    """A homological-equation divisor fell below the floor."""

    def __init__(self, j, divisor: float, message: str = ""):
        self.j = j
        self.divisor = divisor
        super().__init__(
            message or f"resonant class {j} with divisor {divisor:.3e}")


class BudgetExceededError(RuntimeError):
    """Enumeration budget exhausted; partial results may be attached."""

    def __init__(self, message: str = "", partial=None):
        self.partial = partial
        super().__init__(message or "enumeration budget exceeded")
