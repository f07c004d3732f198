"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function or violates a state invariant."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure hit its cap without meeting tolerance."""
