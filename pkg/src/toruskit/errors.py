"""Exception hierarchy.

Every domain error carries a stable ``code`` string, which the command line
reports in its JSON error document.
"""


class ToruskitError(ValueError):
    code = "DomainError"


class DependentInput(ToruskitError):
    code = "DependentInput"


class RankMismatch(ToruskitError):
    code = "RankMismatch"


class NotAVertex(ToruskitError):
    code = "NotAVertex"


class NotPointed(ToruskitError):
    code = "NotPointed"


class CapExceeded(ToruskitError):
    code = "CapExceeded"


class NotFullDimensional(ToruskitError):
    code = "NotFullDimensional"


class FanMismatch(ToruskitError):
    code = "FanMismatch"


class IncompleteFan(ToruskitError):
    code = "IncompleteFan"


class NotCartier(ToruskitError):
    code = "NotCartier"


class NotSmooth(ToruskitError):
    code = "NotSmooth"


class RayOutsideSupport(ToruskitError):
    code = "RayOutsideSupport"


class StabilizerNotTrivial(ToruskitError):
    code = "StabilizerNotTrivial"


class OnDivisor(ToruskitError):
    code = "OnDivisor"


class Unbounded(ToruskitError):
    code = "Unbounded"


class BoundTooLarge(CapExceeded):
    code = "BoundTooLarge"
