"""Exception hierarchy shared by the simulation modules."""

from typing import Any


class NHAAHError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(NHAAHError, ValueError):
    """Invalid model or workflow parameters."""


class ConfigError(NHAAHError, ValueError):
    """A workflow config file could not be read or validated."""


class BasisTooLargeError(NHAAHError, ValueError):
    """The requested dense many-body matrix exceeds the configured budget."""


class EigensolverError(NHAAHError):
    """The dense eigensolver failed to converge."""

    def __init__(self, message: str, params: Any = None):
        super().__init__(message)
        self.params = params

    def __str__(self) -> str:
        base = super().__str__()
        if self.params is None:
            return base
        return f"{base} (params: {self.params!r})"


class SingularMatrixError(NHAAHError):
    """H - E_B is singular to working precision; perturb E_B."""


class IndeterminateWindingError(NHAAHError):
    """The winding number could not be resolved (E_B too close to a trail)."""

    def __init__(self, message: str, raw_phase: float | None = None):
        super().__init__(message)
        self.raw_phase = raw_phase


class TransitionNotFoundError(NHAAHError):
    """No transition was found inside the scanned range."""

    def __init__(self, message: str, summary: dict[str, float] | None = None):
        super().__init__(message)
        self.summary = summary or {}

    def __str__(self) -> str:
        base = super().__str__()
        if not self.summary:
            return base
        details = ", ".join(f"{k}={v:.6g}" for k, v in self.summary.items())
        return f"{base} [{details}]"


class CollapseError(NHAAHError):
    """The scaling collapse has no admissible overlap region."""

    def __init__(self, message: str, sizes: list[int] | None = None):
        super().__init__(message)
        self.sizes = sizes or []


class FitConvergenceError(NHAAHError):
    """A least-squares fit did not converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (final residual {residual:.6g})")
        self.residual = residual


class IncompleteOutputError(NHAAHError):
    """A subcommand finished without writing every requested output."""

    def __init__(self, message: str, outputs: list | None = None, details: dict | None = None):
        super().__init__(message)
        self.outputs = outputs or []
        self.details = details or {}
