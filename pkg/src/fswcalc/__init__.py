"""Exact characteristic-class calculus for families Seiberg-Witten invariants."""

__version__ = "0.1.0"
