class CapacityError(ValueError):
    """Input exceeds what the current configuration can decide (rebuild with larger bounds)."""
