"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """An exact solver was asked for a search space beyond its supported size."""


class GenerationError(ValueError):
    """Instance generation was asked for an unsatisfiable configuration."""
