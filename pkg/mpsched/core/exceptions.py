"""
mpsched - Error types

ConfigurationError maps to CLI exit code 2, SimulationError to exit code 1.
"""

from typing import Iterable, List, Union


class ConfigurationError(ValueError):
    """Invalid scenario, parameter or CLI configuration.

    Carries every violation found, each prefixed with its dotted field path.
    """

    def __init__(self, errors: Union[str, Iterable[str]]):
        if isinstance(errors, str):
            errors = [errors]
        self.errors: List[str] = list(errors)
        super().__init__("; ".join(self.errors))


class SimulationError(RuntimeError):
    """A simulation invariant was violated (logic error, not bad input)."""


__all__ = ["ConfigurationError", "SimulationError"]
