"""Package-wide exception types."""


class CapacityError(Exception):
    """A requested computation exceeds a configured size ceiling.

    The message names the bound that was hit, so callers (and the CLI,
    which maps this to exit code 2) can report it without guesswork.
    """
