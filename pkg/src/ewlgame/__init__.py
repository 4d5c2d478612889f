"""Quantum (EWL) two-player games, Nash certificates and the Newcomb reduction."""

__version__ = "0.1.0"
