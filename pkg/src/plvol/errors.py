"""Exception types shared across the package."""


class InvalidStructure(ValueError):
    """Algebraic data violates a structural axiom (antisymmetry, Jacobi, cocycle...)."""


class DomainViolation(ValueError):
    """A point lies outside the valid domain of a chart or group model."""


class DomainExit(RuntimeError):
    """A trajectory left the chart domain mid-integration."""

    def __init__(self, step_index: int, point):
        super().__init__(f"trajectory left the chart domain at step {step_index}")
        self.step_index = step_index
        self.point = point
