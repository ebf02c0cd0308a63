"""Exception types shared across the package."""


class InvalidSpecError(ValueError):
    """A shortcut spec is internally inconsistent or does not fit the data."""


class ConfigurationError(ValueError):
    """A model/training config violates its invariants."""


class DatasetError(ValueError):
    """A dataset path or layout problem; the message names the offender."""


class NonFiniteLossError(RuntimeError):
    """Training produced a non-finite loss; carries a diagnostic snapshot."""

    def __init__(self, step: int, components: dict):
        self.step = step
        self.components = components
        parts = ", ".join(f"{k}={v}" for k, v in components.items())
        super().__init__(f"non-finite loss at step {step}: {parts}")
