"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Shape is not usable: non power-of-two size, depth too large, or mismatch."""


class LayoutError(ValueError):
    """Coefficient-vector layout is malformed or inconsistent with the data."""


class CapacityError(ValueError):
    """A dense operator would exceed the configured memory budget."""


class KernelSizeError(ValueError):
    """Convolution kernel too large for the image it is applied to."""


class SchemeError(ValueError):
    """Grouping scheme incompatible with the layout dimensionality."""


class GroupOverlapError(ValueError):
    """Groups overlap where a disjoint partition is required."""


class DivergenceError(RuntimeError):
    """Solver produced a non-finite objective value."""


class ConfigError(ValueError):
    """Benchmark configuration file or option is invalid."""
