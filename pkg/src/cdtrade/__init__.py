"""Capacity-distortion computations for joint state and message communication."""

__version__ = "0.1.0"
