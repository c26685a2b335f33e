"""Exception hierarchy shared by every module."""


class GeomTypeError(Exception):
    pass


class KindError(GeomTypeError):
    """A SubrectangleRef of the wrong kind (H vs V) was supplied."""


class ParseError(GeomTypeError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = "" if line is None else f"line {line}, col {col or 1}: "
        super().__init__(where + message)


class FormatError(GeomTypeError):
    pass


class IllegalMove(GeomTypeError):
    pass


class ReducibleError(GeomTypeError):
    pass


class BudgetError(GeomTypeError):
    pass


class CoverError(GeomTypeError):
    """Internal inconsistency of the developed family (not a budget issue)."""


class WindingGuardError(CoverError):
    pass


class NotAQuadrantPair(GeomTypeError):
    pass


class NotComparable(GeomTypeError):
    pass


class NotBReducible(GeomTypeError):
    pass


class NotCApplicable(GeomTypeError):
    pass


class NotClosed(GeomTypeError):
    pass


class DetError(GeomTypeError):
    pass
