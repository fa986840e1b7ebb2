"""Joint spectral measures for the Lie group G2 and its level-k modular invariants."""

__version__ = "0.1.0"
