class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined or tabulated."""


class ResourceError(RuntimeError):
    """Request exceeds the configured memory budget."""


class UnknownInequalityError(KeyError):
    """No catalog entry with the requested id."""

    def __init__(self, ident: str, suggestions: list[str] | None = None):
        self.ident = ident
        self.suggestions = suggestions or []
        msg = f"unknown inequality id {ident!r}"
        if self.suggestions:
            msg += f"; did you mean: {', '.join(self.suggestions)}"
        super().__init__(msg)

    def __str__(self) -> str:
        return self.args[0]
