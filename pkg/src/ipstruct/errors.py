"""Exception types used across the package.

Two failure families are distinguished deliberately:

* :class:`ValidationError` -- the input is malformed (bad shapes, not a
  projector, not column-stochastic, ...).  The CLI maps these to exit
  code 2.
* :class:`NumericalError` -- the input was fine but a numerical step could
  not be completed reliably (singular eigenvector pairing, ambiguous
  clustering, ...).  The CLI maps these to exit code 3.
"""

from __future__ import annotations

from typing import Mapping, Optional


class ValidationError(ValueError):
    """Raised when an input fails structural validation."""


class NumericalError(RuntimeError):
    """Raised when a numerical procedure cannot produce a trustworthy result."""

    def __init__(self, message: str, residuals: Optional[Mapping[str, float]] = None):
        super().__init__(message)
        self.residuals: dict[str, float] = dict(residuals or {})


class DecompositionError(NumericalError):
    """Raised when a structure/algebra decomposition fails verification."""
