"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end.
Codes are grouped by class of failure and are stable:

====  =====================================================
code  meaning
====  =====================================================
1     unexpected internal error
2     input problems (parse errors, unknown symbols, shapes)
3     evaluation problems (poles, division by zero)
4     degenerate geometry (frames, base points, basis changes)
5     a mathematical identity failed (inconsistent systems,
      nonzero residuals, non-polynomial forms)
6     series problems (insufficient order, divisibility)
7     golden regression mismatch
====  =====================================================
"""

from __future__ import annotations


class Rank2Error(Exception):
    exit_code = 1


# -- input ------------------------------------------------------------------

class InputError(Rank2Error):
    exit_code = 2


class ParseError(InputError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownSymbol(InputError):
    pass


class ChartMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidStyle(InputError):
    pass


class MissingAssignment(InputError):
    pass


class InconsistentAssignment(InputError):
    pass


# -- evaluation ---------------------------------------------------------------

class EvaluationError(Rank2Error):
    exit_code = 3


class DivisionByZeroFunction(EvaluationError):
    pass


class PoleAtPoint(EvaluationError):
    pass


EvaluationPole = PoleAtPoint


class ZeroPolynomial(EvaluationError):
    pass


# -- geometry -----------------------------------------------------------------

class GeometryError(Rank2Error):
    exit_code = 4


class DegenerateFrame(GeometryError):
    pass


class CompletionFailed(GeometryError):
    pass


class BasePointOnD3perp(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class SingularBasisChange(GeometryError):
    pass


class BasisDegenerateAtPoint(GeometryError):
    pass


class NotHypersurface(GeometryError):
    pass


class VanishingFundamentalForm(GeometryError):
    pass


# -- failed identities ----------------------------------------------------------

class IdentityError(Rank2Error):
    exit_code = 5


class InconsistentSystem(IdentityError):
    pass


class NonzeroResidual(IdentityError):
    pass


class NotPolynomial(IdentityError):
    pass


class NotHomogeneous(IdentityError):
    pass


class NotLagrangian(IdentityError):
    pass


class NotTangent(IdentityError):
    pass


# -- series -------------------------------------------------------------------

class SeriesError(Rank2Error):
    exit_code = 6


class OrderUnderflow(SeriesError):
    pass


OrderTooLow = OrderUnderflow


class NotDivisible(SeriesError):
    pass


class NotJumpOne(SeriesError):
    pass


class RankTooHigh(SeriesError):
    pass


class SignViolation(SeriesError):
    pass


class SingularAtEqualTimes(SeriesError):
    pass


class NonMonotone(SeriesError):
    pass


# -- regression -----------------------------------------------------------------

class RegressionMismatch(Rank2Error):
    exit_code = 7
