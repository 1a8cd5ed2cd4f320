"""Exception types shared across the package and mapped to CLI exit codes."""


class ToricHeightError(Exception):
    """Base class for errors raised by this package."""


class ParseError(ToricHeightError):
    """Malformed input document or unparsable number (CLI exit code 2)."""


class LatticeHypothesisError(ToricHeightError):
    """An operation that requires a full exponent lattice was given a
    non-full one (CLI exit code 3)."""


class EnumerationCapError(ToricHeightError):
    """A monomial enumeration would exceed the configured cap (CLI exit
    code 4)."""
