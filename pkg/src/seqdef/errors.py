"""Exception types shared across the package.

The CLI maps ConfigError to exit code 2 and NumericalError (and its
subclasses) to exit code 3.
"""


class SeqdefError(Exception):
    """Base class for all package errors."""


class ConfigError(SeqdefError):
    """Invalid configuration, parameters, or input files."""


class NumericalError(SeqdefError):
    """A numerical procedure could not produce a valid result."""


class SubcriticalError(NumericalError):
    """The network has no giant component to destroy (tau <= 2)."""


class NoRootError(NumericalError):
    """Root finding failed; carries the bracket endpoints and residuals."""

    def __init__(self, message, lo, hi, f_lo, f_hi):
        super().__init__(
            f"{message}: no sign change on [{lo:g}, {hi:g}] "
            f"(f(lo)={f_lo:g}, f(hi)={f_hi:g})"
        )
        self.lo = lo
        self.hi = hi
        self.f_lo = f_lo
        self.f_hi = f_hi


class InfeasibleError(NumericalError):
    """No parameter value satisfies the requested constraint."""
