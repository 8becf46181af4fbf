"""Exception types."""


class MultisymplecticError(Exception):
    """Base class for all library errors."""


class ChartMismatch(MultisymplecticError):
    pass


class IllFormedMap(MultisymplecticError):
    """A coordinate map that does not respect periodic coordinates."""


class NotClosed(MultisymplecticError):
    pass


class NotHamiltonian(MultisymplecticError):
    """No vector field v solves d(alpha) = -iota_v omega."""


class UnsupportedOmega(MultisymplecticError):
    """Automatic solving needs constant coefficients."""


class DegreeError(MultisymplecticError):
    pass


class MissingVectorField(MultisymplecticError):
    pass


class NotAHomomorphism(MultisymplecticError):
    pass


class NotInvariant(MultisymplecticError):
    pass


class NotASubalgebra(MultisymplecticError):
    pass


class PreconditionFailed(MultisymplecticError):
    pass


class NoAnsatzSolution(MultisymplecticError):
    pass


class NoSignAssignment(MultisymplecticError):
    pass


class MomentMapError(MultisymplecticError):
    """A construction that should produce a homotopy moment map did not verify."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotEquivariant(MultisymplecticError):
    pass
