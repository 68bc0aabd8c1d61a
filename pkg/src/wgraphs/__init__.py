"""Exact computations with W-graphs over Iwahori-Hecke algebras.

Subpackages:

* :mod:`wgraphs.coxeter` -- Coxeter groups on canonical reduced words.
* :mod:`wgraphs.laurent` -- exact sparse Laurent polynomials.
* :mod:`wgraphs.wgraph` -- W-graphs and their matrix-module form.
* :mod:`wgraphs.canon` -- triangular canonicalisation (the R-polynomial
  route, used as an independent oracle).
* :mod:`wgraphs.hy` -- Howlett-Yin induction: the p/mu recursion, induced
  modules, transitivity/Mackey/factorization checks.
* :mod:`wgraphs.cells` -- Kazhdan-Lusztig left cells.
* :mod:`wgraphs.formats` -- JSON/DOT file formats.
* :mod:`wgraphs.cli` -- the ``hy`` command-line front end.
"""

from .coxeter import CoxeterSystem, Element
from .laurent import LaurentPoly, v
from .matrix import LMat
from .wgraph import OmegaModule, WGraph, sign_module, trivial_module

__all__ = [
    "CoxeterSystem",
    "Element",
    "LaurentPoly",
    "LMat",
    "OmegaModule",
    "WGraph",
    "sign_module",
    "trivial_module",
    "v",
]
