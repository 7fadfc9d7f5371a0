"""Strict polynomial functors, Schur algebras and symmetric-group modules over F_p."""

__version__ = "0.1.0"
