"""Exception hierarchy shared by all polymoduli modules."""


class PolymoduliError(Exception):
    """Base class for every error raised by this package."""


# combinatorics
class InvalidComplex(PolymoduliError, ValueError):
    """Malformed face list (too few faces, repeated or negative indices)."""


class NonManifoldEdge(InvalidComplex):
    pass


class InconsistentOrientation(InvalidComplex):
    pass


class DisconnectedComplex(InvalidComplex):
    pass


class PinchedVertex(InvalidComplex):
    pass


class GenusNotZero(PolymoduliError):
    pass


class SearchExhausted(PolymoduliError):
    """A search that is guaranteed to succeed did not; indicates a bug."""


# colorings
class ForeignSimplex(PolymoduliError, ValueError):
    pass


class ArgumentMismatch(PolymoduliError, ValueError):
    pass


# triangle and cone kernels
class DegenerateTriangle(PolymoduliError, ValueError):
    pass


class DegenerateSphericalTriangle(PolymoduliError, ValueError):
    pass


class DegenerateCone(PolymoduliError, ValueError):
    pass


class NotInGeneralPosition(PolymoduliError, ValueError):
    pass


class SizeMismatch(PolymoduliError, ValueError):
    pass


class MissingEntry(PolymoduliError, KeyError):
    pass


class MissingChart(MissingEntry):
    pass


# moduli
class FacesNotAdjacent(PolymoduliError, ValueError):
    pass


class NonFiniteMatrix(PolymoduliError, ValueError):
    pass


class NotASolution(PolymoduliError, ValueError):
    pass


# embeddings
class DegenerateFace(PolymoduliError, ValueError):
    pass


class ZeroDihedral(PolymoduliError, ValueError):
    pass


class NotAMember(PolymoduliError, ValueError):
    pass


class ClosureFailure(PolymoduliError):
    def __init__(self, message, vertex=None, deviation=None):
        super().__init__(message)
        self.vertex = vertex
        self.deviation = deviation


class NotCongruent(PolymoduliError, ValueError):
    pass


class Collinear(PolymoduliError, ValueError):
    pass


class CombinatoricMismatch(PolymoduliError, ValueError):
    pass


# file formats
class FormatError(PolymoduliError, ValueError):
    def __init__(self, message, path=None, lineno=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}".strip())
        self.path = path
        self.lineno = lineno
