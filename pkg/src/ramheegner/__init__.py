"""Heegner point constructions at additive primes ramifying in the CM field."""

__version__ = "0.1.0"
