"""Teacher-student pipeline for multilingual news topic classification."""

__version__ = "0.1.0"
