"""Named cells of M_7 and the shipped local field around them.

The seven vertices of K_7 are numbered along a 3-3-1 dot grid: bottom row
1, 2, 3 (left to right), middle row 4, 5, 6, top dot 7.
"""

from __future__ import annotations

from importlib import resources

from .complex import SimplicialComplex, build_matching_complex, parse_cell
from .gvf import GradientVectorField, loads_gvf

F_STAR_CELLS = {
    "eta1": parse_cell("2-5,3-6,4-7"),
    "eta2": parse_cell("1-5,2-4,6-7"),
    "eta3": parse_cell("1-5,2-6,4-7"),
    "sigma1": parse_cell("1-2,4-5"),
    "sigma2": parse_cell("1-2,4-6"),
    "sigma3": parse_cell("1-3,4-5"),
    "sigma4": parse_cell("1-3,4-6"),
}

F_STAR_FILE = "f_star_local.gvf"


def f_star_text() -> str:
    return resources.files(__package__).joinpath("data", F_STAR_FILE).read_text()


def f_star_field(cplx: SimplicialComplex | None = None) -> GradientVectorField:
    """The shipped fixture field on M_7 (validated as acyclic on load)."""
    return loads_gvf(f_star_text(), cplx or build_matching_complex(7))
