"""Reconstruction of a normal surface as a cell complex.

Cells: vertices are edge crossings, edges are normal arcs in faces, faces
are normal disks.  Identifiers are orbit-level so that the two sides of a
glued face agree on them:

- crossing: (edge orbit, slot), slots 1..m along the orbit direction;
- arc: (face orbit, corner, n) in terms of the orbit's representative slot,
  where n counts arcs outward from that corner (1 = innermost);
- disk: (tet, "tri", v, c) or (tet, "quad", qtype, c), copies c >= 1.

Along a directed tet edge u -> v the crossings come in the order: triangles
at u (copy 1 first), then the quads of the crossing type, then triangles at
v (copy 1 last).  Quad copies are numbered from the QUAD_PAIRS[qt][0] side.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptySurface
from .normal import (
    NormalCoordinates,
    QUAD_PAIRS,
    arc_count,
    check_coordinates,
    edge_weights,
    euler_from_coordinates,
    quad_index,
    tri_index,
)
from .triangulation import (
    EDGE_INDEX,
    FACE_VERTICES,
    Triangulation,
    skeleton,
)

Crossing = tuple[int, int]                # (edge orbit, slot)
ArcId = tuple[int, int, int]              # (face orbit, rep corner, n)
DiskId = tuple                            # (tet, kind, which, copy)


@dataclass(frozen=True)
class ArcUse:
    """One traversal of an arc along a disk boundary: the arc, the traversal
    direction against the arc's canonical endpoint order, and the face slot
    through which this disk meets the arc."""

    arc: ArcId
    direction: int
    face_slot: tuple[int, int]


@dataclass(frozen=True)
class ArcData:
    """A normal arc: its two crossings and the placement data needed for
    hyperbolic length (count-from-corner and the two edge weights)."""

    endpoints: tuple[Crossing, Crossing]
    n_from_corner: int
    edge_weights: tuple[int, int]


@dataclass(frozen=True)
class DiskComplex:
    """The full cell complex of a normal coordinate vector."""

    disks: tuple[DiskId, ...]
    boundaries: dict  # DiskId -> tuple[ArcUse, ...] in cycle order
    arcs: dict        # ArcId -> ArcData
    weights_per_edge: tuple[int, ...]

    @property
    def vertex_count(self) -> int:
        seen = set()
        for data in self.arcs.values():
            seen.update(data.endpoints)
        return len(seen)

    @property
    def arc_total(self) -> int:
        return len(self.arcs)

    @property
    def disk_count(self) -> int:
        return len(self.disks)


@dataclass(frozen=True)
class SurfaceComponent:
    """One connected component of a reconstructed normal surface."""

    coordinates: NormalCoordinates
    disk_count: int
    arc_count: int
    crossing_count: int
    euler_characteristic: int
    orientable: bool
    vertex_linking: bool

    @property
    def genus(self) -> int | None:
        if not self.orientable:
            return None
        return (2 - self.euler_characteristic) // 2

    @property
    def is_sphere(self) -> bool:
        return self.euler_characteristic == 2


@dataclass(frozen=True)
class ReconstructedSurface:
    """Cell counts, connectivity and per-component data of a normal surface."""

    coordinates: NormalCoordinates
    components: tuple[SurfaceComponent, ...]
    vertex_count: int
    arc_count: int
    disk_count: int
    euler_characteristic: int

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    @property
    def orientable(self) -> bool:
        return all(c.orientable for c in self.components)

    @property
    def vertex_linking(self) -> bool:
        return bool(self.components) and all(
            c.vertex_linking for c in self.components
        )


def crossing_of(
    tri: Triangulation,
    weights: list[int],
    tet: int,
    u: int,
    v: int,
    i: int,
) -> Crossing:
    """The i-th crossing (1-based) from vertex u along edge {u, v} of `tet`,
    as an orbit-level (edge orbit, slot) pair."""
    sk = skeleton(tri)
    e = EDGE_INDEX[frozenset((u, v))]
    orbit, reversed_ = sk.edge_orbit_of[(tet, e)]
    m = weights[orbit]
    lo, _hi = sorted((u, v))
    pos = i if u == lo else m + 1 - i  # position along the ascending direction
    slot = m + 1 - pos if reversed_ else pos
    return (orbit, slot)


def _arc_lookup(tri: Triangulation, coords, weights):
    """Helpers mapping tet-local arc references to orbit-level ArcIds."""
    sk = skeleton(tri)

    def rep_view(tet: int, face: int, corner: int):
        orbit = sk.face_orbit_of[(tet, face)]
        rep = sk.face_orbits[orbit][0]
        if (tet, face) == rep:
            return orbit, rep, corner, None
        g = tri.gluings[tet][face]
        assert g is not None and (g.tet, g.face) == rep
        return orbit, rep, g.perm[corner], g.perm

    def arc_id(tet: int, face: int, corner: int, n: int) -> ArcId:
        orbit, _rep, rep_corner, _ = rep_view(tet, face, corner)
        return (orbit, rep_corner, n)

    def arc_direction(tet: int, face: int, corner: int, from_vertex: int) -> int:
        """+1 if traversing the arc starting at its canonical first endpoint.

        The canonical first endpoint lies on the representative edge
        {corner, x} with the smaller third vertex x.
        """
        orbit, rep, rep_corner, perm = rep_view(tet, face, corner)
        x_rep, _y_rep = sorted(
            w for w in FACE_VERTICES[rep[1]] if w != rep_corner
        )
        start = from_vertex if perm is None else perm[from_vertex]
        return 1 if start == x_rep else -1

    def arc_data(face_orbit: int, rep_corner: int, n: int) -> ArcData:
        rep_tet, rep_face = sk.face_orbits[face_orbit][0]
        x, y = sorted(w for w in FACE_VERTICES[rep_face] if w != rep_corner)
        c1 = crossing_of(tri, weights, rep_tet, rep_corner, x, n)
        c2 = crossing_of(tri, weights, rep_tet, rep_corner, y, n)
        return ArcData(
            endpoints=(c1, c2),
            n_from_corner=n,
            edge_weights=(weights[c1[0]], weights[c2[0]]),
        )

    return arc_id, arc_direction, arc_data


def build_complex(tri: Triangulation, coords) -> DiskComplex:
    """Build the disk/arc/crossing complex of a valid coordinate vector."""
    coords = check_coordinates(tri, coords)
    weights = edge_weights(tri, coords)
    arc_id, arc_direction, arc_data = _arc_lookup(tri, coords, weights)

    disks: list[DiskId] = []
    boundaries: dict[DiskId, tuple] = {}
    arcs: dict[ArcId, ArcData] = {}

    def record(disk: DiskId, cycle: list[ArcUse]):
        disks.append(disk)
        boundaries[disk] = tuple(cycle)
        for use in cycle:
            if use.arc not in arcs:
                arcs[use.arc] = arc_data(*use.arc)

    def use(tet: int, face: int, corner: int, n: int, start: int) -> ArcUse:
        return ArcUse(
            arc=arc_id(tet, face, corner, n),
            direction=arc_direction(tet, face, corner, start),
            face_slot=(tet, face),
        )

    for tet in range(tri.size):
        tcount = [coords[tri_index(tet, v)] for v in range(4)]
        qtype = None
        qcount = 0
        for j in range(3):
            if coords[quad_index(tet, j)]:
                qtype = j
                qcount = coords[quad_index(tet, j)]

        for v in range(4):
            others = [w for w in range(4) if w != v]
            w1, w2, w3 = others
            # boundary cycle: edge {v,w1} -> face missing w3 -> edge {v,w2}
            # -> face missing w1 -> edge {v,w3} -> face missing w2 -> close
            legs = ((w1, w2, w3), (w2, w3, w1), (w3, w1, w2))
            for c in range(1, tcount[v] + 1):
                cycle = [use(tet, missing, v, c, a) for a, b, missing in legs]
                record((tet, "tri", v, c), cycle)

        if qtype is not None:
            (pa, pb), (pc, pd) = QUAD_PAIRS[qtype]
            t = tcount
            for c in range(1, qcount + 1):
                n_a = t[pa] + c
                n_b = t[pb] + c
                n_c = t[pc] + (qcount + 1 - c)
                n_d = t[pd] + (qcount + 1 - c)
                # cycle x_{AC} -> x_{AD} -> x_{BD} -> x_{BC} -> x_{AC}
                cycle = [
                    use(tet, pb, pa, n_a, pc),
                    use(tet, pc, pd, n_d, pa),
                    use(tet, pa, pb, n_b, pd),
                    use(tet, pd, pc, n_c, pb),
                ]
                record((tet, "quad", qtype, c), cycle)

    return DiskComplex(
        disks=tuple(disks),
        boundaries=boundaries,
        arcs=arcs,
        weights_per_edge=tuple(weights),
    )


def _arc_direction_checks(complex_: DiskComplex) -> dict[ArcId, list[tuple[int, int]]]:
    """ArcId -> [(disk index, traversal direction)]; every arc must occur
    exactly twice over all disk boundaries."""
    incidences: dict[ArcId, list[tuple[int, int]]] = {a: [] for a in complex_.arcs}
    for di, disk in enumerate(complex_.disks):
        for arc_use in complex_.boundaries[disk]:
            incidences[arc_use.arc].append((di, arc_use.direction))
    for aid, inc in incidences.items():
        assert len(inc) == 2, f"arc {aid} bounds {len(inc)} disks"
    return incidences


def reconstruct(tri: Triangulation, coords) -> ReconstructedSurface:
    """Split into components, compute Euler characteristics, orientability
    and the vertex-linking flag; cross-check cell counts against the
    coordinate formula."""
    complex_ = build_complex(tri, coords)
    coords = check_coordinates(tri, coords)
    incidences = _arc_direction_checks(complex_)

    ndisks = len(complex_.disks)
    parent = list(range(ndisks))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for inc in incidences.values():
        a = find(inc[0][0])
        b = find(inc[1][0])
        if a != b:
            parent[a] = b

    groups: dict[int, list[int]] = {}
    for di in range(ndisks):
        groups.setdefault(find(di), []).append(di)
    ordered = sorted(groups.values(), key=lambda g: complex_.disks[g[0]])

    # orientability: 2-color disks so adjacent disks traverse each shared
    # arc in opposite directions
    color = [0] * ndisks
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(ndisks)}
    for inc in incidences.values():
        (d1, s1), (d2, s2) = inc
        adjacency[d1].append((d2, -s1 * s2))
        adjacency[d2].append((d1, -s1 * s2))

    def orientable_group(group: list[int]) -> bool:
        ok = True
        color[group[0]] = 1
        stack = [group[0]]
        while stack:
            x = stack.pop()
            for y, rel in adjacency[x]:
                want = color[x] * rel
                if color[y] == 0:
                    color[y] = want
                    stack.append(y)
                elif color[y] != want:
                    ok = False
        return ok

    components = []
    for group in ordered:
        group_orientable = orientable_group(group)
        disk_ids = [complex_.disks[i] for i in group]
        comp_coords = [0] * (7 * tri.size)
        for tet, kind, which, _copy in disk_ids:
            if kind == "tri":
                comp_coords[tri_index(tet, which)] += 1
            else:
                comp_coords[quad_index(tet, which)] += 1
        arc_ids = set()
        for disk in disk_ids:
            arc_ids.update(u.arc for u in complex_.boundaries[disk])
        crossings = set()
        for aid in arc_ids:
            crossings.update(complex_.arcs[aid].endpoints)
        chi = len(crossings) - len(arc_ids) + len(disk_ids)
        components.append(
            SurfaceComponent(
                coordinates=tuple(comp_coords),
                disk_count=len(disk_ids),
                arc_count=len(arc_ids),
                crossing_count=len(crossings),
                euler_characteristic=chi,
                orientable=group_orientable,
                vertex_linking=all(
                    comp_coords[quad_index(t, j)] == 0
                    for t in range(tri.size)
                    for j in range(3)
                ),
            )
        )

    total_chi = sum(c.euler_characteristic for c in components)
    vtotal = complex_.vertex_count
    etotal = complex_.arc_total
    ftotal = complex_.disk_count
    assert total_chi == vtotal - etotal + ftotal
    assert total_chi == euler_from_coordinates(tri, coords), (
        "cell-count Euler characteristic disagrees with the coordinate formula"
    )
    split = [sum(c.coordinates[i] for c in components) for i in range(7 * tri.size)]
    assert tuple(split) == tuple(coords)

    return ReconstructedSurface(
        coordinates=tuple(coords),
        components=tuple(components),
        vertex_count=vtotal,
        arc_count=etotal,
        disk_count=ftotal,
        euler_characteristic=total_chi,
    )


def connected_sphere(surface: ReconstructedSurface) -> bool:
    """Connected, Euler characteristic 2 (hence an embedded 2-sphere)."""
    return surface.connected and surface.euler_characteristic == 2


def nonzero(coords) -> None:
    if not any(coords):
        raise EmptySurface("coordinate vector is zero")
