"""Exception hierarchy shared by all wittram modules."""


class WittramError(Exception):
    """Base class for all errors raised by this package."""


class NotAUnit(WittramError):
    """Inversion was requested for an element of positive valuation."""


class NotEisenstein(WittramError):
    """A tower modulus fails the Eisenstein conditions."""


class InvalidExtension(WittramError):
    """Extension data is structurally inconsistent."""


class SigmaNotARoot(InvalidExtension):
    """The supplied Galois image of pi_L is not a root of the top modulus."""


class SigmaWrongOrder(InvalidExtension):
    """The supplied Galois action does not have order exactly p."""


class PrecisionExhausted(WittramError):
    """A quantity could not be resolved below the precision horizon."""


class ResourceLimit(WittramError):
    """A symbolic computation would exceed the configured term budget."""


class IntegralityError(WittramError):
    """A polynomial that must have integer coefficients failed certification."""


class LengthMismatch(WittramError):
    """Witt vector lengths (or truncation targets) are incompatible."""


class NoSolution(WittramError):
    """A linear system over Z/p^N has no solution at precision."""


class SamplingExhausted(WittramError):
    """The trace-zero sampler ran out of retries."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class VanishingViolated(WittramError):
    """A sampled vector contradicted the verified vanishing statement.

    This cannot happen for mathematically correct code; it signals an
    implementation bug, never a property of the extension.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnstableInvariants(WittramError):
    """Cohomology invariants disagreed between two working precisions."""


class VerificationError(WittramError):
    """An internal consistency check failed (implementation bug)."""


class ConfigError(WittramError):
    """The harness was invoked with an invalid or unsafe configuration."""
