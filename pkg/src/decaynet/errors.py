"""Exception hierarchy for decaynet."""


class DecayError(ValueError):
    """Base class for every error raised by this package."""


# graphs
class NotSimple(DecayError):
    pass


class NotConnected(DecayError):
    pass


class SizeTooSmall(DecayError):
    pass


class BadDimension(DecayError):
    pass


class GraphTooSmall(DecayError):
    pass


class EnvelopeNotMonotone(DecayError):
    pass


# norms
class SizeCap(DecayError):
    pass


class ParamOrder(DecayError):
    pass


class RegimeViolation(DecayError):
    pass


class NotDominated(DecayError):
    pass


class ZeroMatrix(DecayError):
    pass


# covers and truncations
class BadRadius(DecayError):
    pass


class RadiusTooSmall(DecayError):
    pass


class NotNormal(DecayError):
    pass


class NotDiagonal(DecayError):
    pass


# inversion / stability
class Singular(DecayError):
    pass


class ResidualTooLarge(DecayError):
    pass


class GridTooCoarse(DecayError):
    pass


# powers / markov
class NotStochastic(DecayError):
    pass


class SymbolTooLarge(DecayError):
    pass


class EmptySequence(DecayError):
    pass


# files
class BadFile(DecayError):
    pass
