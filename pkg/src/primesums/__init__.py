"""Prime-sum asymptotics and explicit-estimate verification."""

__version__ = "0.1.0"
