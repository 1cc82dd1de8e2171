"""Belief-propagation decoding of generalized data-syndrome codes."""

__version__ = "0.1.0"
