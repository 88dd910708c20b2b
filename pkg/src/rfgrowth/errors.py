"""Error taxonomy shared across the package.

Every deliberate failure path raises one of these, each carrying a stable
``reason`` slug so callers (and the CLI exit-code mapping) can branch without
parsing prose.
"""

from __future__ import annotations


class RFGrowthError(Exception):
    """Base class; ``reason`` is a stable machine-readable slug."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


class DimensionMismatch(RFGrowthError):
    """Operands live in different ambient ranks or have inconsistent shapes."""

    def __init__(self, message: str):
        super().__init__("dimension-mismatch", message)


class DomainError(RFGrowthError):
    """Input is structurally outside what the operation can handle exactly.

    Used for: non-integral data where integers are required, rings failing a
    structural precondition (Jacobi, nilpotency class cap, coordinate
    triangularity), vectors outside a lattice, and non-subring inputs.
    """

    def __init__(self, message: str, reason: str = "domain"):
        super().__init__(reason, message)
