"""RDF layer: graph, Turtle subset, and the model <-> graph mapping."""

from .graph import Blank, Graph, IriRef, Literal, Triple, canonical_triples, isomorphic, read_list
from .mapping import graph_to_model, model_to_graph
from .turtle import parse_turtle, serialize_turtle

__all__ = [
    "Blank",
    "Graph",
    "IriRef",
    "Literal",
    "Triple",
    "canonical_triples",
    "isomorphic",
    "read_list",
    "graph_to_model",
    "model_to_graph",
    "parse_turtle",
    "serialize_turtle",
]
