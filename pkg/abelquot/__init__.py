"""Permutation group kernel and certifier for the abelianization bound
``|G / G'| <= 4**(n / sqrt(log2 n))`` of transitive groups of degree ``n``."""

__version__ = "0.1.0"
