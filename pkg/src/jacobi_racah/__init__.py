"""Exact realisations of the Hahn, Racah and higher-rank Racah algebras by Jacobi operators."""

__version__ = "0.1.0"
