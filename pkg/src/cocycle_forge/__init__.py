"""Harmonic cocycles on the Bruhat-Tits tree of GL2 over F_q((1/t)) and their lifts."""

__version__ = "0.1.0"
