"""phl: exact-arithmetic pullback-ring homological algebra toolkit."""

__version__ = "0.1.0"
