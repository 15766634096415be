"""Lens spaces bounding rational homology balls: continued fractions,
the set R, diagonal-lattice embeddings and the ribbon string families."""

from .cfrac import Fraction, neg_eval, neg_expand
from .rset import is_in_R, is_ribbon_2bridge
from .search import donaldson_obstruction, embed_string

__version__ = "0.1.0"

__all__ = [
    "Fraction",
    "neg_eval",
    "neg_expand",
    "is_in_R",
    "is_ribbon_2bridge",
    "donaldson_obstruction",
    "embed_string",
]
