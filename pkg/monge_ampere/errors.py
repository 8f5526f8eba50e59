"""
Exceptions raised by the Monge-Ampere engine.

All of them subclass a built-in so callers can catch broadly.
"""


class ConfigurationError(ValueError):
    """Inadmissible run configuration (mesh length, names, atom positions)."""


class GridMismatchError(ValueError):
    """Operands live on different grids."""


class StencilError(IndexError):
    """A stencil neighbor falls outside the closed lattice."""


class PoissonConvergenceError(RuntimeError):
    """The iterative Poisson backend did not reach its tolerance."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Poisson solve did not converge after {iterations} iterations "
            f"(relative residual {residual:.3e})"
        )


class DivergenceError(FloatingPointError):
    """An iterate stopped being finite."""

    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"non-finite values in iterate {iteration}")
