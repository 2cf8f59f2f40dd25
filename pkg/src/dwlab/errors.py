"""Exception types shared across the package."""


class DwlabError(Exception):
    """Base class for all package errors."""


class ConfigError(DwlabError):
    """Invalid run configuration or malformed input file."""


class QuadratureBuildError(DwlabError):
    """The orthogonal-polynomial eigenproblem behind a rule failed.

    LAPACK does not expose its internal iteration count, so the message
    carries the matrix size and the underlying failure text instead.
    """

    def __init__(self, size, detail):
        self.size = size
        self.detail = detail
        super().__init__(f"tridiagonal eigenproblem failed for size {size}: {detail}")


class NonConvergence(DwlabError):
    """Refinement driver hit its cap before reaching the target tolerance."""

    def __init__(self, iterates, tolerance):
        self.iterates = list(iterates)
        self.tolerance = tolerance
        super().__init__(
            f"refinement did not reach rel. tolerance {tolerance:g}; "
            f"iterates: {', '.join(repr(v) for v in self.iterates)}"
        )


class PowerIterationStall(DwlabError):
    """Power iteration hit the iteration cap; carries the Rayleigh history tail."""

    def __init__(self, rayleigh_history):
        self.rayleigh_history = list(rayleigh_history)
        tail = ", ".join(f"{v:.17g}" for v in self.rayleigh_history[-5:])
        super().__init__(f"power iteration stalled; last Rayleigh quotients: {tail}")


class DegenerateF(DwlabError):
    """min F(z)F(z)* on the verification grid fell below the solver floor."""


class FitResidualTooLarge(DwlabError):
    """Least-squares polynomial fit could not meet its residual tolerance."""

    def __init__(self, residual, tolerance, degree):
        self.residual = residual
        self.tolerance = tolerance
        self.degree = degree
        super().__init__(
            f"fit residual {residual:.3g} exceeds tolerance {tolerance:.3g} "
            f"at bi-degree {degree}"
        )


class AllZeroH(DwlabError):
    """H vanished on the whole normalization search grid."""
