"""Exception hierarchy shared by all nileta modules."""

from __future__ import annotations


class NiletaError(Exception):
    """Base class for all errors raised by this package."""


class LatticeValidationError(NiletaError):
    """A proposed Gram matrix violates an even-lattice invariant."""


class NotSymmetric(LatticeValidationError):
    def __init__(self, i: int, j: int, a: int, b: int):
        self.index = (i, j)
        super().__init__(f"gram[{i}][{j}]={a} != gram[{j}][{i}]={b}")


class NotEvenDiagonal(LatticeValidationError):
    def __init__(self, i: int, value: int):
        self.index = i
        super().__init__(f"diagonal entry gram[{i}][{i}]={value} is odd")


class NotPositiveDefinite(LatticeValidationError):
    def __init__(self, k: int, minor: int):
        self.index = k
        self.minor = minor
        super().__init__(f"leading principal {k}x{k} minor is {minor} <= 0")


class Singular(NiletaError):
    """Integer matrix has determinant zero."""


class OrderOverflow(NiletaError):
    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"discriminant group order {order} exceeds enumeration cap {cap}")


class NotInDual(NiletaError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"pairing with basis vector {index} is not integral")


class RankMismatch(NiletaError):
    pass


class CertificationFailure(NiletaError):
    """A closed form disagrees with its brute-force reference; this signals a bug."""


class FitFailure(NiletaError):
    def __init__(self, message: str, offending_d: int | None = None):
        self.offending_d = offending_d
        super().__init__(message)


class DomainError(NiletaError):
    pass


class ConvergenceFailure(NiletaError):
    pass


class InternalMismatch(NiletaError):
    """An internally recomputed quantity disagrees with its defining formula."""


class MissingSum(NiletaError):
    def __init__(self, d: int):
        self.d = d
        super().__init__(f"discriminant sum for twist {d} was not supplied")


class InconsistentLevels(NiletaError):
    pass


class InconsistentOrders(NiletaError):
    pass


class ParseError(NiletaError):
    """Malformed input file or lattice description."""
