"""Hecke algebras, Plancherel moments and related computations for GL(n)."""
