"""Cross-framework meaning-representation parsing toolkit."""

__version__ = "0.1.0"
