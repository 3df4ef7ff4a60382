"""Weighted tree augmentation with an exact odd-cut LP."""
__version__ = "0.1.0"
