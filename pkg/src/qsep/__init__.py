"""Separability of symmetric W/GHZ mixed-state families from q-conditional entropies."""

__version__ = "0.1.0"
