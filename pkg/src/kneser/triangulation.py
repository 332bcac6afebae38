"""Closed orientable triangulated 3-manifolds as face gluing tables.

Conventions used throughout the package:

- A triangulation is a list of abstract tetrahedra 0..t-1, each with local
  vertices 0..3.  Face f of a tetrahedron is the triangle opposite local
  vertex f.
- A gluing of face f of tet i is a triple (j, k, p) meaning: face f of tet i
  is identified with face k of tet j via the vertex permutation p, where p
  maps local vertices of tet i to local vertices of tet j and p(f) = k.
- Edges of a tetrahedron are indexed 0..5 by EDGE_VERTICES below.
- Orientation coherence: there is an assignment o: tets -> {+1, -1} with
  sign(p) = -o(i) * o(j) for every gluing, i.e. all gluing permutations are
  odd once the tetrahedra carry coherent orientations.

Semi-simplicial generality is allowed: two distinct faces of one tetrahedron
may be glued to each other.  A face glued to itself is always rejected.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    Disconnected,
    EmptySupport,
    NonInvolutiveGluing,
    NonOrientable,
    NotClosed,
    SelfGluedFace,
)

Perm = tuple[int, int, int, int]

IDENTITY_PERM: Perm = (0, 1, 2, 3)

# Edge e has endpoints EDGE_VERTICES[e], listed ascending so that the edge
# index determines a canonical local direction.
EDGE_VERTICES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
)

EDGE_INDEX: dict[frozenset[int], int] = {
    frozenset(uv): e for e, uv in enumerate(EDGE_VERTICES)
}

# FACE_VERTICES[f] lists the vertices of face f (ascending).
FACE_VERTICES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2),
)


def perm_sign(p: Perm) -> int:
    """Sign of a permutation of {0,1,2,3}: +1 even, -1 odd."""
    inversions = sum(
        1 for a in range(4) for b in range(a + 1, 4) if p[a] > p[b]
    )
    return -1 if inversions % 2 else 1


def perm_inverse(p: Perm) -> Perm:
    q = [0, 0, 0, 0]
    for v in range(4):
        q[p[v]] = v
    return (q[0], q[1], q[2], q[3])


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Composition p after q: (p o q)(v) = p[q[v]]."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def is_perm(p: Sequence[int]) -> bool:
    return len(p) == 4 and sorted(p) == [0, 1, 2, 3]


class Gluing(NamedTuple):
    tet: int
    face: int
    perm: Perm


RawGluing = "tuple[int, int, Perm] | None"


@dataclass(frozen=True)
class Triangulation:
    """Immutable gluing table, with orientation data when orientable.

    gluings[i][f] is the Gluing of face f of tet i, or None for a boundary
    face.  orientations is a per-tet +1/-1 assignment witnessing orientation
    coherence, or None if the triangulation is non-orientable.
    """

    gluings: tuple[tuple[Gluing | None, ...], ...]
    orientations: tuple[int, ...] | None
    closed: bool
    labels: tuple[str, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.gluings)

    @property
    def orientable(self) -> bool:
        return self.orientations is not None

    def gluing(self, tet: int, face: int) -> Gluing | None:
        return self.gluings[tet][face]


@dataclass(frozen=True, eq=False)
class SkeletonTable:
    """Orbits of vertices, edges and faces under the gluing identifications.

    Orbits are numbered by their lexicographically least (tet, index) slot,
    which makes every downstream output byte-deterministic.  Each edge slot
    additionally records whether its canonical local direction (ascending
    local vertices) is reversed relative to the orbit direction (the
    representative slot's ascending direction).
    """

    vertex_orbits: tuple[tuple[tuple[int, int], ...], ...]
    edge_orbits: tuple[tuple[tuple[int, int], ...], ...]
    face_orbits: tuple[tuple[tuple[int, int], ...], ...]
    vertex_orbit_of: dict[tuple[int, int], int]
    edge_orbit_of: dict[tuple[int, int], tuple[int, bool]]
    face_orbit_of: dict[tuple[int, int], int]
    edge_degrees: tuple[int, ...]
    tet_count: int

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_orbits)

    @property
    def edge_count(self) -> int:
        return len(self.edge_orbits)

    @property
    def face_count(self) -> int:
        return len(self.face_orbits)

    @property
    def euler_characteristic(self) -> int:
        return (
            self.vertex_count - self.edge_count
            + self.face_count - self.tet_count
        )


@dataclass(frozen=True)
class SupportMetrics:
    """Size and quasimetric diameter of a set of tetrahedra."""

    support: frozenset[int]
    size: int
    diameter: int


class _UnionFind:
    """Union-find where each slot carries an XOR bit relative to its root."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.bit = [False] * n

    def find(self, x: int) -> tuple[int, bool]:
        path = []
        root = x
        while self.parent[root] != root:
            path.append(root)
            root = self.parent[root]
        acc = False
        for y in reversed(path):
            acc ^= self.bit[y]
            self.parent[y] = root
            self.bit[y] = acc
        return root, (self.bit[x] if path else False)

    def union(self, x: int, y: int, rel: bool) -> bool:
        """Join x, y so that bit(x) ^ bit(y) == rel; False on conflict."""
        rx, bx = self.find(x)
        ry, by = self.find(y)
        if rx == ry:
            return (bx ^ by) == rel
        self.parent[ry] = rx
        self.bit[ry] = bx ^ rel ^ by
        return True


def _check_structure(table: Sequence[Sequence[RawGluing]]) -> None:
    t = len(table)
    for i, row in enumerate(table):
        if len(row) != 4:
            raise ValueError(f"tet {i}: expected 4 face entries, got {len(row)}")
        for f, entry in enumerate(row):
            if entry is None:
                continue
            try:
                j, k, p = entry
            except Exception as exc:
                raise ValueError(f"(tet {i}, face {f}): malformed entry") from exc
            if not (0 <= j < t) or not (0 <= k < 4):
                raise ValueError(f"(tet {i}, face {f}): target ({j},{k}) out of range")
            if not is_perm(p):
                raise ValueError(f"(tet {i}, face {f}): {p} is not a permutation")
            if p[f] != k:
                raise ValueError(
                    f"(tet {i}, face {f}): permutation must send face {f} to face {k}"
                )


def _orient(table: Sequence[Sequence[RawGluing]]) -> tuple[int, ...]:
    """Coherent +1/-1 orientations; raises NonOrientable on conflict."""
    t = len(table)
    orient = [0] * t
    for seed in range(t):
        if orient[seed]:
            continue
        orient[seed] = 1
        stack = [seed]
        while stack:
            i = stack.pop()
            for f in range(4):
                entry = table[i][f]
                if entry is None:
                    continue
                j, _, p = entry
                want = -orient[i] * perm_sign(tuple(p))
                if orient[j] == 0:
                    orient[j] = want
                    stack.append(j)
                elif orient[j] != want:
                    raise NonOrientable(i, f)
    return tuple(orient)


def validate(
    table: Sequence[Sequence[RawGluing]],
    *,
    require_closed: bool = True,
    require_orientable: bool = True,
    labels: Sequence[str] | None = None,
) -> Triangulation:
    """Check a raw gluing table and build a Triangulation.

    Always enforced: structural sanity, gluing involutivity, no face glued
    to itself.  With require_orientable, a coherent orientation must exist;
    with require_closed, the triangulation must be a closed 3-manifold (no
    boundary faces, no edge identified with itself in reverse, and Euler
    characteristic zero, which for orientable gluings forces all vertex
    links to be spheres).
    """
    _check_structure(table)
    t = len(table)

    for i in range(t):
        for f in range(4):
            entry = table[i][f]
            if entry is None:
                continue
            j, k, p = entry
            p = tuple(p)
            if (j, k) == (i, f):
                raise SelfGluedFace(i, f)
            back = table[j][k]
            if back is None:
                raise NonInvolutiveGluing(i, f, f"(tet {j}, face {k}) is unglued")
            j2, k2, q = back
            if (j2, k2) != (i, f) or tuple(q) != perm_inverse(p):
                raise NonInvolutiveGluing(
                    i, f, f"(tet {j}, face {k}) does not glue back with the inverse"
                )

    orientations: tuple[int, ...] | None
    try:
        orientations = _orient(table)
    except NonOrientable:
        if require_orientable:
            raise
        orientations = None

    rows = []
    for row in table:
        cells = []
        for entry in row:
            if entry is None:
                cells.append(None)
            else:
                j, k, p = entry
                cells.append(Gluing(j, k, tuple(p)))
        rows.append(tuple(cells))

    tri = Triangulation(
        gluings=tuple(rows),
        orientations=orientations,
        closed=False,
        labels=tuple(labels) if labels is not None else None,
    )
    closed = _closedness(tri, demand=require_closed)
    if closed:
        tri = Triangulation(
            gluings=tri.gluings,
            orientations=orientations,
            closed=True,
            labels=tri.labels,
        )
    return tri


def _closedness(tri: Triangulation, demand: bool) -> bool:
    """True if tri is a closed 3-manifold; raise NotClosed when demanded."""
    for i in range(tri.size):
        for f in range(4):
            if tri.gluings[i][f] is None:
                if demand:
                    raise NotClosed(i, f)
                return False
    bad = _reversed_edge(tri)
    if bad is not None:
        if demand:
            tet, edge = bad
            raise NotClosed(tet, edge, "edge identified with itself in reverse")
        return False
    chi = skeleton(tri).euler_characteristic
    if chi != 0:
        if demand:
            raise NotClosed(0, 0, f"Euler characteristic {chi} != 0")
        return False
    return True


def _edge_unionfind(tri: Triangulation) -> tuple[_UnionFind, tuple[int, int] | None]:
    """Union-find over all 6t edge slots; also reports a reversed self-gluing."""
    uf = _UnionFind(6 * tri.size)
    bad: tuple[int, int] | None = None
    for i in range(tri.size):
        for f in range(4):
            g = tri.gluings[i][f]
            if g is None:
                continue
            for e, (u, v) in enumerate(EDGE_VERTICES):
                if u == f or v == f:
                    continue
                pu, pv = g.perm[u], g.perm[v]
                e2 = EDGE_INDEX[frozenset((pu, pv))]
                rel = pu > pv  # gluing reverses the ascending direction
                if not uf.union(6 * i + e, 6 * g.tet + e2, rel) and bad is None:
                    bad = (i, e)
    return uf, bad


def _reversed_edge(tri: Triangulation) -> tuple[int, int] | None:
    return _edge_unionfind(tri)[1]


@lru_cache(maxsize=256)
def skeleton(tri: Triangulation) -> SkeletonTable:
    """Orbit tables of the 0-, 1- and 2-skeleton under the gluings."""
    t = tri.size

    vf = _UnionFind(4 * t)
    uf_e, _bad = _edge_unionfind(tri)
    ff = _UnionFind(4 * t)

    for i in range(t):
        for f in range(4):
            g = tri.gluings[i][f]
            if g is None:
                continue
            ff.union(4 * i + f, 4 * g.tet + g.face, False)
            for v in range(4):
                if v == f:
                    continue
                vf.union(4 * i + v, 4 * g.tet + g.perm[v], False)

    def orbits(uf: _UnionFind, slots: int, width: int):
        groups: dict[int, list[tuple[int, int]]] = {}
        for s in range(slots):
            root, _ = uf.find(s)
            groups.setdefault(root, []).append((s // width, s % width))
        return sorted((sorted(v) for v in groups.values()), key=lambda g: g[0])

    vertex_orbits = tuple(tuple(g) for g in orbits(vf, 4 * t, 4))
    face_orbits = tuple(tuple(g) for g in orbits(ff, 4 * t, 4))

    edge_groups: dict[int, list[tuple[tuple[int, int], bool]]] = {}
    for s in range(6 * t):
        root, bit = uf_e.find(s)
        edge_groups.setdefault(root, []).append(((s // 6, s % 6), bit))
    edge_sorted = sorted(edge_groups.values(), key=lambda g: min(x[0] for x in g))
    edge_orbits = []
    edge_orbit_of: dict[tuple[int, int], tuple[int, bool]] = {}
    for idx, grp in enumerate(edge_sorted):
        grp = sorted(grp)
        rep_bit = grp[0][1]
        members = []
        for slot, bit in grp:
            members.append(slot)
            edge_orbit_of[slot] = (idx, bit ^ rep_bit)
        edge_orbits.append(tuple(members))

    vertex_orbit_of = {}
    for idx, grp in enumerate(vertex_orbits):
        for slot in grp:
            vertex_orbit_of[slot] = idx
    face_orbit_of = {}
    for idx, grp in enumerate(face_orbits):
        for slot in grp:
            face_orbit_of[slot] = idx

    return SkeletonTable(
        vertex_orbits=vertex_orbits,
        edge_orbits=tuple(edge_orbits),
        face_orbits=face_orbits,
        vertex_orbit_of=vertex_orbit_of,
        edge_orbit_of=edge_orbit_of,
        face_orbit_of=face_orbit_of,
        edge_degrees=tuple(len(g) for g in edge_orbits),
        tet_count=t,
    )


def _vertex_adjacency(tri: Triangulation) -> list[set[int]]:
    """tets adjacent iff they share at least one vertex orbit."""
    sk = skeleton(tri)
    adj: list[set[int]] = [set() for _ in range(tri.size)]
    for orbit in sk.vertex_orbits:
        tets = sorted({tet for tet, _ in orbit})
        for a in tets:
            for b in tets:
                if a != b:
                    adj[a].add(b)
    return adj


def quasimetric(tri: Triangulation, a: int, b: int) -> int:
    """Minimal covering chain length between tets a and b, minus one.

    Consecutive tetrahedra of a chain must share at least one vertex (a
    continuous path may pass through any shared point, including vertices).
    """
    if not (0 <= a < tri.size and 0 <= b < tri.size):
        raise ValueError("tetrahedron index out of range")
    if a == b:
        return 0
    dist = _bfs_distances(tri, a)
    if dist[b] < 0:
        raise Disconnected(f"no chain of tetrahedra connects {a} to {b}")
    return dist[b]


def _bfs_distances(tri: Triangulation, source: int) -> list[int]:
    adj = _vertex_adjacency(tri)
    dist = [-1] * tri.size
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def support_metrics(tri: Triangulation, support: Iterable[int]) -> SupportMetrics:
    """Size and d_T-diameter of a set of tetrahedra."""
    sup = frozenset(support)
    if not sup:
        raise EmptySupport("support is empty")
    if any(not (0 <= x < tri.size) for x in sup):
        raise ValueError("support contains an out-of-range tetrahedron index")
    diam = 0
    for a in sorted(sup):
        dist = _bfs_distances(tri, a)
        for b in sorted(sup):
            if dist[b] < 0:
                raise Disconnected(
                    f"support tets {a} and {b} lie in different components"
                )
            diam = max(diam, dist[b])
    return SupportMetrics(support=sup, size=len(sup), diameter=diam)


def connected_components(tri: Triangulation) -> list[list[int]]:
    """Tet index classes connected through face gluings, each sorted."""
    seen = [False] * tri.size
    comps: list[list[int]] = []
    for seed in range(tri.size):
        if seen[seed]:
            continue
        comp = [seed]
        seen[seed] = True
        stack = [seed]
        while stack:
            i = stack.pop()
            for f in range(4):
                g = tri.gluings[i][f]
                if g is not None and not seen[g.tet]:
                    seen[g.tet] = True
                    comp.append(g.tet)
                    stack.append(g.tet)
        comps.append(sorted(comp))
    return comps


def restrict(tri: Triangulation, tets: Sequence[int]) -> Triangulation:
    """Sub-triangulation on the given tets (which must be gluing-closed)."""
    index = {old: new for new, old in enumerate(tets)}
    rows = []
    for old in tets:
        cells = []
        for f in range(4):
            g = tri.gluings[old][f]
            if g is None:
                cells.append(None)
            else:
                if g.tet not in index:
                    raise ValueError("tet set is not closed under gluings")
                cells.append((index[g.tet], g.face, g.perm))
        rows.append(cells)
    labels = None
    if tri.labels is not None:
        labels = [tri.labels[old] for old in tets]
    return validate(
        rows,
        require_closed=tri.closed,
        require_orientable=tri.orientable,
        labels=labels,
    )


def split_components(tri: Triangulation) -> list[Triangulation]:
    """Connected components as separate triangulations, in sorted tet order."""
    return [restrict(tri, comp) for comp in connected_components(tri)]


def disjoint_union(a: Triangulation, b: Triangulation) -> Triangulation:
    rows: list[list[RawGluing]] = []
    for i in range(a.size):
        rows.append([
            (g.tet, g.face, g.perm) if g is not None else None
            for g in a.gluings[i]
        ])
    for i in range(b.size):
        rows.append([
            (g.tet + a.size, g.face, g.perm) if g is not None else None
            for g in b.gluings[i]
        ])
    return validate(
        rows,
        require_closed=a.closed and b.closed,
        require_orientable=a.orientable and b.orientable,
    )
