"""Splitting Gibbs measures of fertile three-state hard-core models on Cayley trees."""

__version__ = "0.1.0"
