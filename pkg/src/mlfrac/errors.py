"""Error type shared across the package.

Every raise carries a stable machine-readable code so callers (and the CLI)
can match on failure kind without parsing prose.
"""


class NumericsError(ValueError):
    """Computational precondition or range failure with a stable code."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)
