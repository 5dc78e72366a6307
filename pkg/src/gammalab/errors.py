"""Exception taxonomy shared by all modules.

The split mirrors the CLI exit codes: malformed or precondition-violating
input is an :class:`InputError` (exit 2), a distrusted witness or oracle
failing its verified contract is a :class:`ValidationError` (exit 1), and
running out of budget before a question is decided is a
:class:`HorizonError` (exit 3).
"""


class GammaLabError(Exception):
    """Base class for all library errors."""


class InputError(GammaLabError):
    """Ill-formed input or violated precondition."""


class ValidationError(GammaLabError):
    """A distrusted input (witness, oracle output) failed verification."""


class HorizonError(GammaLabError):
    """A bounded search ran out before the question was decided."""
