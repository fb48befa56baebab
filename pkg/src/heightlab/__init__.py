"""Exact-arithmetic toolkit for heights, Chow forms, distributive constants
and the explicit constants of quantitative Diophantine approximation,
together with a desk-scale audit CLI."""

__version__ = "0.1.0"
