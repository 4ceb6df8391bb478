class ValidationError(ValueError):
    """Raised when an input value or file breaks a documented invariant."""
