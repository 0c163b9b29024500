"""Laboratory for periodic-point varieties of integrable rational maps."""

__version__ = "0.1.0"
