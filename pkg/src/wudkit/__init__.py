"""wudkit: exact computation around weak uniform distribution of
polynomially-defined multiplicative functions in residue classes."""

__version__ = "0.1.0"
