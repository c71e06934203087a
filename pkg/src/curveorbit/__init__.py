"""Exact flat limits of plane curves under degenerating transformations.

The package computes, over an exact coefficient tower (rationals
optionally extended by i and by declared radicals):

- flat limits of a plane curve composed with a matrix germ in t
  (`germs.flat_limit`), and the classification of a germ by the limit
  family it marks (`germs.classify_germ`);
- Newton polygons and Puiseux branches at a flag
  (`branches.newton_polygon`, `branches.puiseux_branches`);
- the full enumeration of limit components with multiplicities
  (`pnc.assemble_pnc`);
- orbit-degree arithmetic from component contributions
  (`orbitdeg.app_assemble`, `orbitdeg.predegree_and_degree`).

The `curveorbit` console script exposes these as subcommands; see
`formats` for the input file grammar.
"""

from .branches import (characteristics, newton_polygon, puiseux_branches,
                       sibling_classes)
from .curves import Flag, PlaneCurve, as_point, tangent_cone
from .errors import CurveOrbitError, ParseError
from .germs import (MatrixGerm, classify_germ, diag_germ, flat_limit,
                    standardize_germ)
from .orbitdeg import TruncH, app_assemble, predegree_and_degree
from .pnc import PncComponent, PncResult, assemble_pnc
from .poly import Poly
from .scalars import QQ, Scalar, Tower

__all__ = [
    "CurveOrbitError", "Flag", "MatrixGerm", "ParseError", "PlaneCurve",
    "PncComponent", "PncResult", "Poly", "QQ", "Scalar", "Tower", "TruncH",
    "app_assemble", "as_point", "assemble_pnc", "characteristics",
    "classify_germ", "diag_germ", "flat_limit", "newton_polygon",
    "predegree_and_degree", "puiseux_branches", "sibling_classes",
    "standardize_germ", "tangent_cone",
]

__version__ = "1.0.0"
