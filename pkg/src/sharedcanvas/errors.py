"""Exception hierarchy shared by every sharedcanvas module."""


class SharedCanvasError(Exception):
    """Base class for all errors raised by this package."""


# --- region selectors -------------------------------------------------------

class FragmentError(SharedCanvasError, ValueError):
    pass


class MalformedFragment(FragmentError):
    pass


class UnsupportedUnit(FragmentError):
    pass


class ZeroExtent(FragmentError):
    pass


class MalformedPoints(FragmentError):
    pass


class DegeneratePolygon(FragmentError):
    pass


# --- object model -----------------------------------------------------------

class ModelError(SharedCanvasError, ValueError):
    pass


class InvalidIri(ModelError):
    pass


class NonPositiveDimension(ModelError):
    pass


class SelectorOutOfBounds(ModelError):
    pass


class KindMismatch(ModelError):
    pass


class EmptyChoice(ModelError):
    pass


class InvalidRotation(ModelError):
    pass


class EmptySequence(ModelError):
    pass


class DuplicateCanvasInSequence(ModelError):
    pass


class RangeTargetNotInSequence(ModelError):
    pass


class RangeOrderError(ModelError):
    pass


class DuplicateEntry(ModelError):
    pass


class DuplicateId(ModelError):
    pass


class DanglingReference(ModelError):
    pass


class NoSequences(ModelError):
    pass


# --- rdf --------------------------------------------------------------------

class TurtleSyntaxError(SharedCanvasError):
    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, column {col}: {message}")


class UnknownPrefix(TurtleSyntaxError):
    pass


class GraphError(SharedCanvasError):
    pass


class BrokenList(GraphError):
    pass


class NoManifestNode(GraphError):
    pass


class MultipleManifestNodes(GraphError):
    pass


class TypeClash(GraphError):
    pass


class MalformedGraph(GraphError):
    """A node lacks a property the mapping requires (e.g. a canvas without width)."""


# --- resolve / render / ingest ----------------------------------------------

class TransformOverflow(SharedCanvasError):
    pass


class ZoneChainTooDeep(TransformOverflow):
    pass


class MissingPlan(SharedCanvasError):
    pass


class SchemaError(SharedCanvasError):
    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
