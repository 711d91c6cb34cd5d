"""Multimode ultrastrong light-matter coupling of cavity photons and a cyclotron resonance."""

__version__ = "0.1.0"
