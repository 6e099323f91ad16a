"""Shared exception types.

``InputError`` marks bad user input (malformed quivers, windows, grammar);
the CLI maps it to exit code 1.  ``MathematicalInconsistencyError`` marks a
violated internal invariant (a bug, not bad input) and maps to exit code 2.
"""


class FriezelabError(Exception):
    pass


class InputError(FriezelabError, ValueError):
    """Malformed or out-of-domain user input."""


class MathematicalInconsistencyError(FriezelabError):
    """An exact identity that must hold failed; signals an internal bug."""
