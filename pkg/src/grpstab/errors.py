"""Exception types shared across the package.

The CLI maps these onto its exit codes: :class:`InputError` is 2 and
:class:`CapExceeded` is 3.
"""


class InputError(ValueError):
    """Malformed input: bad files, invalid tables, non-normal subgroups, ..."""


class CapExceeded(RuntimeError):
    """A computation was refused because it exceeds a configured size cap."""
