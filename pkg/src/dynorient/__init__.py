"""Dynamic low out-degree orientations, arboricity decompositions, and
implicit colourings for graphs under edge insertions and deletions."""

from .acyclic import BFOrienter
from .colouring import ColourCode, ProductColouring
from .decompose import ArboricityDecomposer
from .params import Params
from .refine import RefinementEngine

__all__ = [
    "ArboricityDecomposer",
    "BFOrienter",
    "ColourCode",
    "Params",
    "ProductColouring",
    "RefinementEngine",
]
__version__ = "0.1.0"
