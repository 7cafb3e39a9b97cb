"""Exact lattice-generation probabilities.

Library layout:

* ``exactmat``   -- arbitrary-precision integer/rational matrices, HNF,
                    SNF, determinants, unimodularity, integral solves
* ``lattice``    -- full-rank lattices, covering-radius bounds, window
                    enumeration, generation tests
* ``bounds``     -- certified enclosures for every closed-form constant
* ``groupgen``   -- finite abelian groups and generation probabilities
* ``sampling``   -- reproducible counter-based RNG and rejection samplers
* ``experiments``-- the Monte Carlo harness and CSV reports behind the
                    ``latgen`` CLI
"""

__version__ = "0.1.0"

from .enclosure import Enclosure
from .exactmat import ExactMatrix, RationalMatrix
from .lattice import LatticeBasis, Window

__all__ = [
    "Enclosure",
    "ExactMatrix",
    "RationalMatrix",
    "LatticeBasis",
    "Window",
    "__version__",
]
