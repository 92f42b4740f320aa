#!/usr/bin/env python3
"""
Error types for the Bell-decomposable entanglement toolkit.

InputError covers malformed or out-of-contract arguments; DomainError covers
quantities that are mathematically undefined for otherwise well-formed input.
"""


class BellEntanglementError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(BellEntanglementError, ValueError):
    """Argument violates an operation's preconditions."""


class ConfigError(InputError):
    """Environment or command-line setting could not be parsed."""


class DomainError(BellEntanglementError, ArithmeticError):
    """Result is undefined for the given (valid) input."""


class NumericalError(DomainError):
    """Two computation routes disagree beyond numerical noise."""
