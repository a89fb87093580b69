"""Exception hierarchy shared by every module of the package."""


class DarbouxKitError(Exception):
    """Base class for all package errors."""


class TruncationError(DarbouxKitError, ValueError):
    """A derivative was requested beyond the truncation order of a jet."""


class OrderMismatchError(DarbouxKitError, ValueError):
    """Two jets with different truncation orders were combined."""


class PoleError(DarbouxKitError, ZeroDivisionError):
    """Division by a jet whose value is exactly zero at the expansion point.

    In practice this means the evaluation point lies on a singular manifold.
    """


class FieldOverflowError(DarbouxKitError, OverflowError):
    """An ``exp`` argument exceeded the overflow guard."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class FieldSyntaxError(DarbouxKitError, ValueError):
    """Malformed field expression text."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class InvalidModeError(DarbouxKitError, ValueError):
    """A soliton mode parameter is not admissible (e.g. zero wavenumber)."""


class SingularSpecError(DarbouxKitError, ValueError):
    """Soliton parameters hit a pole of the closed-form solution."""


class DegeneratePairError(DarbouxKitError, ValueError):
    """Two eigenfunctions share the same spectral parameter."""


class MissingManifoldError(DarbouxKitError, ValueError):
    """An operation needs a singular manifold that was not supplied."""


class NotAnEigenfunctionError(DarbouxKitError, ValueError):
    """An input field does not satisfy the Lax pair it is claimed to solve."""


class NotABacklundPairError(DarbouxKitError, ValueError):
    """Two potentials are not related by the expected Backlund transformation."""

    def __init__(self, message, worst_residual):
        super().__init__(f"{message} (worst residual {worst_residual:.3e})")
        self.worst_residual = worst_residual


class MissingBindingError(DarbouxKitError, KeyError):
    """A residual was evaluated without all the fields it needs."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class EmptyScanError(DarbouxKitError, ValueError):
    """Every grid point was skipped by the pole guard."""


class ScenarioError(DarbouxKitError, ValueError):
    """A verification scenario is malformed or its pipeline failed."""
