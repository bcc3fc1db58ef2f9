"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation problems exit 2,
enumeration-cap breaches exit 4, property failures exit 1.
"""


class AuthcapError(Exception):
    """Base class for all package errors."""


class ValidationError(AuthcapError):
    """Malformed input: bad probabilities, dimension mismatch, out-of-range parameter."""


class SizeCapError(AuthcapError):
    """An exact-enumeration table would exceed the configured entry cap."""

    def __init__(self, needed: int, cap: int, what: str = "table"):
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"{what} needs {needed} entries but the enumeration cap is {cap} "
            f"(override with AUTHCAP_MAX_TABLE)"
        )


class ConvergenceError(AuthcapError):
    """Iterative solver failed to reach its tolerance within the iteration budget."""
