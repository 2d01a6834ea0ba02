"""Executable classification of thick tensor ideals of D⁻(R) over a small
catalog of commutative noetherian rings."""

__version__ = "0.1.0"
