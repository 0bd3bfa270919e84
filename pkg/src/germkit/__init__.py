"""Singular sets, Milnor sets and tameness analysis of polynomial map germs.

The package analyzes polynomial map germs F:(R^M,0)->(R^N,0) and their
compositions H = G o F.  It computes singular and Milnor (polar) sets as
determinantal ideals of stacked Jacobians, decides tameness with witness
extraction by numeric accumulation search, and evaluates topological-degree
and Euler-characteristic formulas for Milnor fibers and tubes.
"""

from germkit.poly import (
    PolyMap,
    Polynomial,
    compose,
    euclidean_rho,
    parse_polynomial,
)

__all__ = [
    "Polynomial",
    "PolyMap",
    "compose",
    "euclidean_rho",
    "parse_polynomial",
]
