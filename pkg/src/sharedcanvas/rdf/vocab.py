"""Fixed namespace IRIs and vocabulary terms.

The ``sc:`` namespace is project-controlled; the others are the usual
published namespaces. See docs/rdf-mapping.md for how each model type
maps onto these terms.
"""

from .graph import IriRef

NAMESPACES = {
    "cnt": "http://www.w3.org/2011/content#",
    "dc": "http://purl.org/dc/elements/1.1/",
    "dctypes": "http://purl.org/dc/dcmitype/",
    "exif": "http://www.w3.org/2003/12/exif/ns#",
    "oac": "http://www.openannotation.org/ns/",
    "ore": "http://www.openarchives.org/ore/terms/",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "sc": "http://www.shared-canvas.org/ns/",
}


class _Namespace:
    def __init__(self, base):
        self.base = base

    def __getattr__(self, name) -> IriRef:
        if name.startswith("__"):
            raise AttributeError(name)
        return IriRef(self.base + name)

    def __getitem__(self, name) -> IriRef:
        return IriRef(self.base + name)


CNT = _Namespace(NAMESPACES["cnt"])
DC = _Namespace(NAMESPACES["dc"])
DCTYPES = _Namespace(NAMESPACES["dctypes"])
EXIF = _Namespace(NAMESPACES["exif"])
OAC = _Namespace(NAMESPACES["oac"])
ORE = _Namespace(NAMESPACES["ore"])
RDF = _Namespace(NAMESPACES["rdf"])
SC = _Namespace(NAMESPACES["sc"])

RDF_TYPE = RDF.type
RDF_FIRST = RDF.first
RDF_REST = RDF.rest
RDF_NIL = RDF.nil

# annotation subtype per model anno_type value
ANNOTATION_CLASSES = {
    "PaintImage": SC.ImageAnnotation,
    "PaintText": SC.TextAnnotation,
    "PlaceZone": SC.ZoneAnnotation,
    "Comment": SC.CommentAnnotation,
    "Describe": SC.DescriptionAnnotation,
}

LIST_CLASSES = {
    "TextOrder": SC.TextOrder,
    "ImageList": SC.ImageList,
    "CommentList": SC.CommentList,
}

CHOICE_CLASSES = {
    "ImageChoice": SC.ImageChoice,
    "TextChoice": SC.TextChoice,
}

RESOURCE_CLASSES = {
    "Image": DCTYPES.Image,
    "Text": DCTYPES.Text,
}

# a node may carry at most one of these families
EXCLUSIVE_CLASSES = (
    SC.Manifest,
    SC.Canvas,
    SC.Zone,
    SC.Range,
    SC.AnnotationList,
    SC.AlternativeGroup,
    OAC.Annotation,
    OAC.Choice,
    OAC.Constraint,
    DCTYPES.Image,
    DCTYPES.Text,
)
