"""Toric surface codes over small finite fields.

Exact lattice polygon geometry, Minkowski decompositions, code
construction from polygons, exact minimum distances, and the distance
bounds that come from decomposing the polygon.
"""

from .errors import ToricodeError
from .field import FieldSpec, field_from_order, make_field

__all__ = ["ToricodeError", "FieldSpec", "make_field", "field_from_order"]

__version__ = "0.1.0"
