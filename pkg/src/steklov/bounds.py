"""Lower bounds for the first nonzero Steklov eigenvalue.

Three bounds are computed from four boundary quantities: the minimum edge
weight w0, the minimum boundary measure m0, the total boundary measure V_B
and the boundary hop-diameter d_B.

  unit form       |B| / ((|B|-1)^2 d_B)   (valid for unit weights with no
                                           boundary-boundary edges)
  general form    w0 / (d_B V_B)
  extended form   w0 V_B / ((V_B - m0)^2 d_B)

The extended form dominates the general one and reduces to the unit form on
unit-weighted graphs; it needs no assumption on boundary-boundary edges.
With fewer than two boundary vertices sigma_2 is +inf by convention and all
bounds are reported as +inf (vacuous).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import (
    EmptyBoundaryError,
    GraphError,
    WeightedBoundaryGraph,
    hop_distance_matrix,
    json_number,
    require_connected,
)
from .spectral import steklov_spectrum

INF = float("inf")


@dataclass(frozen=True)
class BoundReport:
    """Boundary quantities, the three bounds, sigma_2 and the residual gap."""

    w0: float
    m0: float
    VB: float
    dB: int
    bound_unit: float
    bound_unit_applicable: bool
    bound_general: float
    bound_extended: float
    sigma2: float
    gap_extended: float

    def to_json_dict(self) -> dict:
        return {
            "w0": json_number(self.w0),
            "m0": json_number(self.m0),
            "VB": json_number(self.VB),
            "dB": self.dB,
            "bound_unit": json_number(self.bound_unit),
            "bound_unit_applicable": self.bound_unit_applicable,
            "bound_general": json_number(self.bound_general),
            "bound_extended": json_number(self.bound_extended),
            "sigma2": json_number(self.sigma2),
            "gap_extended": json_number(self.gap_extended),
        }


def _raw_quantities(g: WeightedBoundaryGraph) -> tuple[float, float, float, int]:
    """Quantities without the |B| >= 2 precondition (dB = 0 when |B| <= 1)."""
    if len(g.boundary) == 0:
        raise EmptyBoundaryError("graph has an empty boundary")
    w0 = min((w for _, _, w in g.edges), default=INF)
    bidx = np.asarray(g.boundary, dtype=np.intp)
    bm = g.measures[bidx]
    m0 = float(bm.min())
    VB = float(bm.sum())
    if len(bidx) < 2:
        return w0, m0, VB, 0
    dist = hop_distance_matrix(g)
    dB = int(dist[np.ix_(bidx, bidx)].max())
    return w0, m0, VB, dB


def boundary_quantities(
    g: WeightedBoundaryGraph,
) -> tuple[float, float, float, int]:
    """(w0, m0, V_B, d_B) for a connected graph with at least 2 boundary vertices."""
    require_connected(g)
    if len(g.boundary) < 2:
        raise GraphError("boundary quantities need at least 2 boundary vertices")
    return _raw_quantities(g)


def has_boundary_edge(g: WeightedBoundaryGraph) -> bool:
    """True iff some edge joins two boundary vertices."""
    b = g.boundary_set
    return any(u in b and v in b for u, v, _ in g.edges)


def bound_extended(g: WeightedBoundaryGraph) -> float:
    """Extended lower bound  w0 V_B / ((V_B - m0)^2 d_B);  +inf when |B| < 2."""
    require_connected(g)
    if len(g.boundary) < 2:
        return INF
    w0, m0, VB, dB = _raw_quantities(g)
    return w0 * VB / ((VB - m0) ** 2 * dB)


def bound_general(g: WeightedBoundaryGraph) -> float:
    """General lower bound  w0 / (d_B V_B);  +inf when |B| < 2."""
    require_connected(g)
    if len(g.boundary) < 2:
        return INF
    w0, _, VB, dB = _raw_quantities(g)
    return w0 / (dB * VB)


def bound_unit_weight(g: WeightedBoundaryGraph) -> tuple[float, bool]:
    """Unit-weight lower bound  |B| / ((|B|-1)^2 d_B)  plus applicability.

    The formula value is always returned; the flag is True only under the
    bound's hypotheses: unit measures and weights, and no edge joining two
    boundary vertices.
    """
    require_connected(g)
    nb = len(g.boundary)
    if nb < 2:
        return INF, False
    _, _, _, dB = _raw_quantities(g)
    value = nb / ((nb - 1) ** 2 * dB)
    applicable = g.is_unit_weighted() and not has_boundary_edge(g)
    return value, applicable


def bound_report(g: WeightedBoundaryGraph) -> BoundReport:
    """All bounds plus the computed sigma_2 and its gap over the extended bound.

    ``gap_extended`` is ``sigma2 - bound_extended`` in float arithmetic, so a
    report for |B| < 2 (both values +inf) carries gap NaN.
    """
    require_connected(g)
    w0, m0, VB, dB = _raw_quantities(g)
    nb = len(g.boundary)
    spectrum = steklov_spectrum(g)
    sigma2 = spectrum.sigma(2)
    if nb < 2:
        b_unit, applicable = INF, False
        b_general = INF
        b_extended = INF
    else:
        b_unit = nb / ((nb - 1) ** 2 * dB)
        applicable = g.is_unit_weighted() and not has_boundary_edge(g)
        b_general = w0 / (dB * VB)
        b_extended = w0 * VB / ((VB - m0) ** 2 * dB)
    gap = sigma2 - b_extended
    return BoundReport(
        w0=w0,
        m0=m0,
        VB=VB,
        dB=dB,
        bound_unit=b_unit,
        bound_unit_applicable=applicable,
        bound_general=b_general,
        bound_extended=b_extended,
        sigma2=sigma2,
        gap_extended=float(gap),
    )
