"""Exception and warning types raised across the package."""


class SaftError(ValueError):
    """Base class for every domain error raised by saftw."""


class NonUnimodular(SaftError):
    def __init__(self, determinant: float):
        self.determinant = determinant
        super().__init__(f"matrix is not unimodular: AD - BC = {determinant!r}")


class DegenerateB(SaftError):
    def __init__(self, msg: str = "operation requires B != 0"):
        super().__init__(msg)


class DegenerateD(SaftError):
    pass


class SingularAngle(SaftError):
    pass


class GridMismatch(SaftError):
    pass


class NegativeExponent(SaftError):
    pass


class UnderResolved(SaftError):
    pass


class NonpositiveScale(SaftError):
    pass


class DivergentAdmissibility(SaftError):
    pass


class AdmissibilitySpreadTooLarge(SaftError):
    pass


class InterpolationOutOfBand(SaftError):
    pass


class ZeroNorm(SaftError):
    pass


class ZeroCenter(SaftError):
    pass


class ExponentOutOfRange(SaftError):
    pass


class AlphaOutOfRange(SaftError):
    pass


class BadParameter(SaftError):
    pass


class EdgeDecayWarning(UserWarning):
    """Signal does not decay to the required level at the grid edges."""


class NegativeBWarning(UserWarning):
    """A matrix with B < 0 was supplied by the user."""
