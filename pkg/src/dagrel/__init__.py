"""Dilatory dagger categories, relations in epi-regular independence categories and four concrete instances."""

__version__ = "0.1.0"
