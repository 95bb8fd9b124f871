"""Exact computations with non-commutative Wick polynomials.

Submodules:

* :mod:`ncwick.core` -- words, bar-words, exact scalars and elements
* :mod:`ncwick.coalgebra` -- unshuffle and extraction coproducts
* :mod:`ncwick.functionals` -- characters, convolution, half-shuffles, cumulants
* :mod:`ncwick.partitions` -- partition lattices and moment-cumulant sums
* :mod:`ncwick.wick` -- Wick maps, actions and Wick products
* :mod:`ncwick.cli` -- parsing, formatting and the ``ncwick`` command
"""

from .core import Alphabet, Element, Scalar, Tensor, phi, word
from .functionals import State, conv_inverse, extend_state, moment_map
from .wick import wick_boolean, wick_cfree, wick_free, wick_tensor

__all__ = [
    "Alphabet",
    "Element",
    "Scalar",
    "Tensor",
    "phi",
    "word",
    "State",
    "conv_inverse",
    "extend_state",
    "moment_map",
    "wick_boolean",
    "wick_cfree",
    "wick_free",
    "wick_tensor",
]
