"""besovlab: Besov regularity of sample paths and local times, checked numerically."""

__version__ = "0.1.0"
