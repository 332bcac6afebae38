"""PL area: weight paired with hyperbolic arc length, compared lexically.

The metric model: every face carries the ideal hyperbolic triangle with
vertices 0, 1, infinity in the upper half-plane.  Edge midpoints are the
incircle touch points i, 1+i and (1+i)/2 (the unique isometry-equivariant
choice).  The point at arclength s from the midpoint i along the edge
(0, inf) is i*exp(s); the parametrizations of the other two edges are the
images under the order-3 isometry z -> 1/(1-z), which cycles

    (0, inf) -> (0, 1) -> (1, inf) -> (0, inf)

and matches midpoints.

Crossings are placed canonically: the k-th of m crossings on an edge sits at
arclength (k - (m+1)/2) * h from the midpoint, with spacing h = 1.  This
canonical-position length is an upper bound for the minimal length in the
metric, not the infimum; reports flag it as length_model "canonical-h1".
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import EmptySurface
from .normal import weight as coordinate_weight
from .reconstruct import DiskComplex, build_complex
from .triangulation import Triangulation, skeleton, support_metrics

LENGTH_TOLERANCE = 1e-9
SPACING = 1.0
LENGTH_MODEL = "canonical-h1"

MIDPOINT_ARC = math.acosh(1.5)  # midpoint-to-midpoint arc in the ideal triangle


@dataclass(frozen=True, order=False)
class PLArea:
    """The pair (weight, length); lexicographic with 1e-9 length tolerance."""

    weight: int
    length: float

    def less_than(self, other: "PLArea") -> bool:
        if self.weight != other.weight:
            return self.weight < other.weight
        return self.length < other.length - LENGTH_TOLERANCE

    def tol_equal(self, other: "PLArea") -> bool:
        return (
            self.weight == other.weight
            and abs(self.length - other.length) <= LENGTH_TOLERANCE
        )


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Geodesic distance in the upper half-plane."""
    cosh_d = 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
    return math.acosh(cosh_d)


def _rho(z: complex) -> complex:
    """Order-3 isometry of the ideal triangle, 0 -> 1 -> inf -> 0."""
    return 1.0 / (1.0 - z)


def point_on_edge(edge: int, s: float) -> complex:
    """Edges: 0 = (0, inf), 2 = (0, 1), 1 = (1, inf); s from the midpoint.

    Positive s runs toward inf on edge 0; the other two edges carry the
    directions induced by the order-3 isometry.
    """
    base = cmath.exp(s) * 1j
    if edge == 0:
        return base
    if edge == 2:
        return _rho(base)
    if edge == 1:
        return _rho(_rho(base))
    raise ValueError("edge must be 0, 1 or 2")


def arc_length(edge_a: int, s: float, edge_b: int, u: float) -> float:
    """Distance between parametrized points on two edges of the model."""
    return hyperbolic_distance(point_on_edge(edge_a, s), point_on_edge(edge_b, u))


def corner_arc_length(delta1: float, delta2: float) -> float:
    """Length of an arc cutting off a corner, endpoints at away-from-corner
    offsets delta1 and delta2 from the respective edge midpoints.

    Model: corner at infinity, edges the two verticals; the endpoint at
    offset d sits at height exp(-d).
    """
    a = math.exp(-delta1)
    b = math.exp(-delta2)
    cosh_d = 1.0 + (1.0 + (a - b) ** 2) / (2.0 * a * b)
    return math.acosh(cosh_d)


def _arc_offsets(n: int, m: int, h: float = SPACING) -> float:
    """Away-from-corner offset of the n-th crossing from a corner on an edge
    with m crossings, under the canonical equal-spacing placement."""
    return (n - (m + 1) / 2.0) * h


def normal_arc_length(n: int, m1: int, m2: int, h: float = SPACING) -> float:
    """Length of the n-th arc at a corner whose edges carry m1, m2 crossings."""
    return corner_arc_length(_arc_offsets(n, m1, h), _arc_offsets(n, m2, h))


@dataclass(frozen=True)
class ArcPlacement:
    """Canonical crossing positions and the arcs they support.

    positions[e] lists the m_e signed arclengths along edge orbit e
    (symmetric about the midpoint); arcs[f] lists, for face orbit f, each
    arc as a pair of (edge orbit, 1-based slot) endpoints.
    """

    positions: tuple[tuple[float, ...], ...]
    arcs: tuple[tuple[tuple[tuple[int, int], tuple[int, int]], ...], ...]


def canonical_placement(tri: Triangulation, coords) -> ArcPlacement:
    complex_ = build_complex(tri, coords)
    sk = skeleton(tri)
    positions = tuple(
        tuple(_arc_offsets(k, m) for k in range(1, m + 1))
        for m in complex_.weights_per_edge
    )
    per_face: list[list] = [[] for _ in range(sk.face_count)]
    for aid, data in sorted(complex_.arcs.items()):
        face_orbit = aid[0]
        per_face[face_orbit].append(data.endpoints)
    return ArcPlacement(
        positions=positions,
        arcs=tuple(tuple(entries) for entries in per_face),
    )


def surface_length(complex_: DiskComplex) -> float:
    """Sum over disks of their boundary arc lengths (each geometric arc lies
    in one face and borders two disks, so is counted twice)."""
    arc_len = {
        aid: normal_arc_length(
            data.n_from_corner, data.edge_weights[0], data.edge_weights[1]
        )
        for aid, data in sorted(complex_.arcs.items())
    }
    total = 0.0
    for disk in complex_.disks:
        for arc_use in complex_.boundaries[disk]:
            total += arc_len[arc_use.arc]
    return total


def pl_area(tri: Triangulation, coords) -> PLArea:
    """Weight and canonical-placement length of a normal coordinate vector."""
    if not any(coords):
        return PLArea(weight=0, length=0.0)
    complex_ = build_complex(tri, coords)
    return PLArea(
        weight=sum(complex_.weights_per_edge),
        length=surface_length(complex_),
    )


@dataclass(frozen=True)
class DiameterCheck:
    diameter: int
    weight: int
    passed: bool


def verify_diameter_bound(tri: Triangulation, coords) -> DiameterCheck:
    """Check diam(support) <= weight^2 in the quasimetric (exact integers)."""
    if not any(coords):
        raise EmptySurface("zero vector has no support")
    support = {i for i in range(tri.size) if any(coords[7 * i + k] for k in range(7))}
    metrics = support_metrics(tri, support)
    wt = coordinate_weight(tri, coords)
    return DiameterCheck(
        diameter=metrics.diameter,
        weight=wt,
        passed=metrics.diameter <= wt * wt,
    )
