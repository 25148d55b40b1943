"""Error taxonomy: structural errors (shapes, incompatible objects) vs parameter errors."""


class StructuralError(ValueError):
    """Inputs are structurally inconsistent (dimension mismatch, kind/scheme mismatch)."""


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""
