"""Shared exception hierarchy."""


class AccordError(Exception):
    """Base class for all errors raised by this package."""
