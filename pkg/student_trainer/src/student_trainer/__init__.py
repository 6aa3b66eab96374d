"""Trainer-contract implementation backed by a fine-tuned encoder classifier."""

__version__ = "0.1.0"
