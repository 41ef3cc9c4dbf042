"""Convert RDF graphs to property graphs with G2GML mapping descriptions."""

__version__ = "0.1.0"

from .endpoint import EndpointConfig, build_select, execute
from .export import export_db
from .g2gml import Diagnostic, G2GDocument, parse_g2gml, validate
from .mapping import RunOptions, run
from .model import PgEdge, PgNode, PropertyGraph, infer_value, stats
from .pgformat import parse_json_pg, parse_pg, write_json_pg, write_pg
from .rdf import TripleStore, load_turtle, parse_turtle
from .sparql import evaluate, parse_pattern

__all__ = [
    "Diagnostic", "EndpointConfig", "G2GDocument", "PgEdge", "PgNode", "PropertyGraph",
    "RunOptions", "TripleStore", "build_select", "evaluate", "execute", "export_db",
    "infer_value", "load_turtle", "parse_g2gml", "parse_json_pg", "parse_pattern", "parse_pg",
    "parse_turtle", "run", "stats", "validate", "write_json_pg", "write_pg",
]
