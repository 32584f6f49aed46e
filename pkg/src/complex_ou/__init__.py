"""Nonsymmetric Ornstein-Uhlenbeck calculus on complex Gaussian space."""
__version__ = "0.1.0"
