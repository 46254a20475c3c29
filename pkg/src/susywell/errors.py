"""Exception types shared across the package.

Every numerical guard raises one of these instead of letting NaN/inf
propagate silently. Each carries enough context to report the offending
input (position, step size, matrix size, ...).
"""

from __future__ import annotations


class SusywellError(Exception):
    """Base class for all package-specific errors."""


class SingularPoint(SusywellError):
    """Evaluation requested within the exclusion radius of a pole."""

    def __init__(self, x: float, singularity: float, message: str | None = None):
        self.x = x
        self.singularity = singularity
        super().__init__(
            message
            or f"evaluation at x={x!r} is within the exclusion radius of the "
            f"singular point {singularity!r}"
        )


class DomainViolation(SusywellError):
    """Position outside the fundamental cell of the requested closed form."""

    def __init__(self, x: float, message: str):
        self.x = x
        super().__init__(f"x={x!r}: {message}")


class StepTooLarge(SusywellError):
    """Finite-difference step too close to a singularity to be trusted."""

    def __init__(self, h: float, limit: float):
        self.h = h
        self.limit = limit
        super().__init__(
            f"step h={h!r} exceeds 1/10 of the distance {limit!r} to the "
            "nearest singularity"
        )


class ConvergenceFailure(SusywellError):
    """Eigenvalue solver failed to converge or failed its residual gate."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class InsufficientEigenvalues(SusywellError):
    """Not enough eigenvalues available to perform the requested pairing."""


class EvanescentOverflow(SusywellError):
    """Exponential growth across a segment would overflow double precision."""

    def __init__(self, exponent: float):
        self.exponent = exponent
        super().__init__(
            f"evanescent exponent {exponent!r} exceeds the overflow guard (700)"
        )


class DegenerateMatch(SusywellError):
    """Local basis at a matching point is numerically degenerate."""

    def __init__(self, determinant: complex, where: float):
        self.determinant = determinant
        self.where = where
        super().__init__(
            f"local basis determinant {determinant!r} at x={where!r} is below "
            "the 1e-12 degeneracy guard"
        )


class SliceTooCoarse(SusywellError):
    """Thin-slice refinement failed to stabilize the transmission."""

    def __init__(self, energy: float, slices: int, change: float):
        self.energy = energy
        self.slices = slices
        self.change = change
        super().__init__(
            f"transmission at E={energy!r} still changes by {change!r} after "
            f"refining to {slices} slices"
        )


class ConfigError(SusywellError):
    """Invalid run configuration (bad key, value, or combination)."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
