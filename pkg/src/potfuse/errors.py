"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (shapes, empty data, bad files)."""


class TrainingError(RuntimeError):
    """A base trainer could not produce a usable hyperplane."""


class FitError(RuntimeError):
    """Density models could not be attached to a trained member."""
