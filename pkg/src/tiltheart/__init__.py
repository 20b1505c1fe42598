"""Tilting criteria and endomorphism algebras for hearts of torsion pairs over path algebras."""

__version__ = "0.1.0"
