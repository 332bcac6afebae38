"""Destructive crushing along a normal sphere, and the cut-and-cap oracle.

Crushing deletes every tetrahedron containing a quadrilateral and keeps one
tetrahedron (the flattened central piece) for each quad-free tetrahedron.
Between two surviving faces the flattened material forms a chain of wedges:
inside a quad-bearing tetrahedron, the region behind face k is the wedge
pinched onto the edge spanned by k's companions, and flattening it
identifies face k with the other face containing that edge -- the partner
of k inside its own quad pair, via the transposition swapping the pair.
Following these wedge hops across deleted tetrahedra yields the new gluing.

Cut-and-cap is the topologically faithful reference construction: partition
every tetrahedron into the closed complementary cells of the surface,
triangulate each cell boundary canonically, cone each cell from an interior
apex, leave the two sides of every normal disk unglued (the cut), and cone
off the resulting boundary spheres.  It never loses a connected summand and
is used to audit crush outputs, not in the decomposition loop.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidAfterCrush, KneserError, VertexLinkingRejected
from .normal import (
    QUAD_PAIRS,
    arc_count,
    check_coordinates,
    quad_index,
    tri_index,
)
from .reconstruct import build_complex, reconstruct
from .triangulation import (
    EDGE_INDEX,
    EDGE_VERTICES,
    FACE_VERTICES,
    Perm,
    Triangulation,
    perm_compose,
    skeleton,
    split_components,
    validate,
)


def _quad_partner(qtype: int, k: int) -> int:
    """The other vertex of k's pair for the given quad type."""
    for pair in QUAD_PAIRS[qtype]:
        if k in pair:
            return pair[0] if pair[1] == k else pair[1]
    raise AssertionError


def _transposition(a: int, b: int) -> Perm:
    p = [0, 1, 2, 3]
    p[a], p[b] = b, a
    return tuple(p)  # type: ignore[return-value]


def _quad_types(tri: Triangulation, coords) -> list[int | None]:
    quads: list[int | None] = []
    for i in range(tri.size):
        q = None
        for j in range(3):
            if coords[quad_index(i, j)]:
                q = j
        quads.append(q)
    return quads


def crush(tri: Triangulation, coords) -> list[Triangulation]:
    """Crush a connected, non-vertex-linking normal 2-sphere.

    Deletes quad-bearing tetrahedra (at least one, so the total count
    strictly drops), re-glues the surviving faces across the flattened
    wedges, validates the result as closed and orientable, and returns its
    connected components.
    """
    coords = check_coordinates(tri, coords)
    surface = reconstruct(tri, coords)
    if not (surface.connected and surface.euler_characteristic == 2):
        raise ValueError("crush requires a connected normal 2-sphere")
    if surface.vertex_linking:
        raise VertexLinkingRejected(
            "vertex-linking spheres delete no tetrahedra"
        )
    quads = _quad_types(tri, coords)
    survivors = [i for i in range(tri.size) if quads[i] is None]
    index = {old: new for new, old in enumerate(survivors)}

    def walk(start_tet: int, start_face: int):
        g = tri.gluings[start_tet][start_face]
        assert g is not None
        tet, face, perm = g.tet, g.face, g.perm
        while quads[tet] is not None:
            partner = _quad_partner(quads[tet], face)
            perm = perm_compose(_transposition(face, partner), perm)
            face = partner
            g = tri.gluings[tet][face]
            assert g is not None
            tet, face, perm = g.tet, g.face, perm_compose(g.perm, perm)
        return tet, face, perm

    table = []
    for old in survivors:
        row = []
        for f in range(4):
            tet, face, perm = walk(old, f)
            row.append((index[tet], face, perm))
        table.append(row)

    try:
        crushed = validate(table)
    except (KneserError, ValueError) as exc:
        raise InvalidAfterCrush(f"crush produced an invalid gluing table: {exc}")
    return split_components(crushed)


# --------------------------------------------------------------------------
# cut-and-cap
# --------------------------------------------------------------------------
#
# Region identifiers inside one tetrahedron (t_v triangle copies at vertex v,
# q quads of one type with pairs P = QUAD_PAIRS[qt][0], P'):
#   ("corner", v, i)  between triangles i and i+1 at v (i = 0 holds vertex v)
#   ("central",)       q = 0: the truncated-tet core
#   ("wedge", 0/1)     q > 0: between the innermost triangles on one pair
#                      side and the outermost quad on that side
#   ("qprod", c)       q > 1: between quads c and c+1

RegionId = tuple


def _disk_regions(tcount, qtype, q, disk) -> tuple[RegionId, RegionId]:
    """(region on the near side, region on the far side) of a normal disk.

    For a triangle copy c at vertex v, near = toward v.  For a quad copy c,
    near = toward pair side 0.
    """
    _tet, kind, which, c = disk
    if kind == "tri":
        near = ("corner", which, c - 1)
        if c < tcount[which]:
            far: RegionId = ("corner", which, c)
        elif qtype is None:
            far = ("central",)
        else:
            side = 0 if which in QUAD_PAIRS[qtype][0] else 1
            far = ("wedge", side)
        return near, far
    near = ("wedge", 0) if c == 1 else ("qprod", c - 1)
    far = ("wedge", 1) if c == q else ("qprod", c)
    return near, far


def _lone_corner(face: int, qtype: int) -> int:
    """The corner of `face` cut by quad arcs: the pair-mate of the missing
    vertex."""
    return _quad_partner(qtype, face)


def _patch_region(tcount, qtype, q, face: int, corner: int, i: int) -> RegionId:
    """Region behind the patch between arcs i and i+1 at `corner` (slot-local).

    i = 0 is the patch containing the corner itself.
    """
    if i < tcount[corner]:
        return ("corner", corner, i)
    assert qtype is not None and corner == _lone_corner(face, qtype)
    n = i - tcount[corner]
    if n == 0:
        side = 0 if corner in QUAD_PAIRS[qtype][0] else 1
        return ("wedge", side)
    if corner in QUAD_PAIRS[qtype][0]:
        return ("qprod", n)
    return ("qprod", q - n)


def _central_patch_region(tcount, qtype, q, face: int) -> RegionId:
    if qtype is None:
        return ("central",)
    lone = _lone_corner(face, qtype)
    side = 0 if lone in QUAD_PAIRS[qtype][0] else 1
    return ("wedge", 1 - side)


# Patch geometry is built once per face orbit in the coordinates of the
# orbit representative.  Cycle nodes are ("x", local edge, ascending
# position) or ("v", local corner); each cycle side records the 1-cell it
# runs along and its traversal direction against that 1-cell's canonical
# direction (ascending for edge segments, smaller-third-vertex-first for
# arcs).


@dataclass(frozen=True)
class _PatchSide:
    kind: str          # "arc" | "seg"
    data: tuple        # arc: (corner, n); seg: (local edge, interval)
    direction: int


@dataclass(frozen=True)
class _Patch:
    key: tuple                 # ("corner", w, i) or ("central",)
    nodes: tuple               # cycle node tokens, rep-local
    sides: tuple[_PatchSide, ...]  # side k runs nodes[k] -> nodes[k+1]


def _crossing_node(w: int, u: int, n: int, m: int):
    """Node for the n-th crossing from w on local edge {w, u} of m crossings."""
    lo, hi = min(w, u), max(w, u)
    pos = n if w == lo else m + 1 - n
    return ("x", EDGE_INDEX[frozenset((w, u))], pos)


def _seg_side(w: int, u: int, interval_from_w: int, m: int) -> _PatchSide:
    """Edge segment side traversed away from w, with interval counted from w."""
    lo = min(w, u)
    if w == lo:
        return _PatchSide("seg", (EDGE_INDEX[frozenset((w, u))], interval_from_w), 1)
    return _PatchSide(
        "seg", (EDGE_INDEX[frozenset((w, u))], m - interval_from_w), -1
    )


def _arc_side(face: int, w: int, start_third: int, n: int) -> _PatchSide:
    """Arc side at corner w, arc n, traversed starting over edge {w, start}."""
    x, _y = sorted(v for v in FACE_VERTICES[face] if v != w)
    return _PatchSide("arc", (w, n), 1 if start_third == x else -1)


def _face_patches(tri: Triangulation, coords, weights, face_orbit: int) -> list[_Patch]:
    sk = skeleton(tri)
    tet, face = sk.face_orbits[face_orbit][0]
    corners = FACE_VERTICES[face]
    counts = {w: arc_count(coords, tet, face, w) for w in corners}

    def m_of(w, u):
        orbit, _ = sk.edge_orbit_of[(tet, EDGE_INDEX[frozenset((w, u))])]
        return weights[orbit]

    patches: list[_Patch] = []
    for w in corners:
        x, y = sorted(v for v in corners if v != w)
        m_x, m_y = m_of(w, x), m_of(w, y)
        if counts[w] >= 1:
            nodes = (("v", w), _crossing_node(w, x, 1, m_x), _crossing_node(w, y, 1, m_y))
            sides = (
                _seg_side(w, x, 0, m_x),
                _arc_side(face, w, x, 1),
                # back toward the corner: traversed toward w
                _reverse(_seg_side(w, y, 0, m_y)),
            )
            patches.append(_Patch(("corner", w, 0), nodes, sides))
        for i in range(1, counts[w]):
            nodes = (
                _crossing_node(w, x, i, m_x),
                _crossing_node(w, x, i + 1, m_x),
                _crossing_node(w, y, i + 1, m_y),
                _crossing_node(w, y, i, m_y),
            )
            sides = (
                _seg_side(w, x, i, m_x),
                _arc_side(face, w, x, i + 1),
                _reverse(_seg_side(w, y, i, m_y)),
                _reverse(_arc_side(face, w, x, i)),
            )
            patches.append(_Patch(("corner", w, i), nodes, sides))

    # central patch: walk corners x -> y -> z; at each corner either the
    # outermost arc (two nodes) or the bare corner (one node)
    nodes: list = []
    sides: list[_PatchSide] = []
    cyc = list(corners)
    for idx, w in enumerate(cyc):
        nxt = cyc[(idx + 1) % 3]
        prv = cyc[(idx + 2) % 3]
        a_w = counts[w]
        m_next = m_of(w, nxt)
        m_prev = m_of(w, prv)
        if a_w:
            nodes.append(_crossing_node(w, prv, a_w, m_prev))
            sides.append(_arc_side(face, w, prv, a_w))
            nodes.append(_crossing_node(w, nxt, a_w, m_next))
        else:
            nodes.append(("v", w))
        sides.append(_seg_side(w, nxt, a_w, m_next))
    patches.append(_Patch(("central",), tuple(nodes), tuple(sides)))
    return patches


def _reverse(side: _PatchSide) -> _PatchSide:
    return _PatchSide(side.kind, side.data, -side.direction)


@dataclass(frozen=True)
class _Cone:
    """One cone tetrahedron over a boundary triangle of a cell.

    Local vertices 0..2 are the triangle corners (side k runs from corner k
    to corner k+1 and lies on the cone face opposite corner (k+2) % 3);
    vertex 3 is the cell apex.  `sides[k]` is (token, direction) for the
    1-cell the side runs along; tokens are unique within a cell up to their
    single partner.  `base` identifies the geometric triangle for pairing
    the two instances of a face patch; disk pieces carry base = None and
    stay unglued (they form the cut boundary).
    """

    cell: tuple
    sides: tuple
    base: tuple | None


def _patch_pieces(patch: _Patch):
    """Fan-triangulate a patch; yields (corners, sides) triples where sides
    may be _PatchSide objects or ("diag", chord_index, direction) markers."""
    nodes = list(patch.nodes)
    sides = list(patch.sides)
    anchor = min(range(len(nodes)), key=lambda i: nodes[i])
    nodes = nodes[anchor:] + nodes[:anchor]
    sides = sides[anchor:] + sides[:anchor]
    length = len(nodes)
    if length == 3:
        yield 0, (sides[0], sides[1], sides[2])
        return
    for k in range(1, length - 1):
        first = sides[0] if k == 1 else ("diag", k, 1)
        last = sides[length - 1] if k == length - 2 else ("diag", k + 1, -1)
        yield k - 1, (first, sides[k], last)


def _edge_weight_local(sk, weights, tet: int, e: int) -> int:
    orbit, _ = sk.edge_orbit_of[(tet, e)]
    return weights[orbit]


def cut_complex(tri: Triangulation, coords) -> Triangulation:
    """The cut-open manifold: every complementary cell coned from an apex,
    with the two sides of each normal disk left as boundary faces."""
    coords = check_coordinates(tri, coords)
    complex_ = build_complex(tri, coords)
    weights = list(complex_.weights_per_edge)
    sk = skeleton(tri)

    tcounts = [
        [coords[tri_index(i, v)] for v in range(4)] for i in range(tri.size)
    ]
    qtypes = _quad_types(tri, coords)
    qcounts = [
        coords[quad_index(i, qtypes[i])] if qtypes[i] is not None else 0
        for i in range(tri.size)
    ]

    cones: list[_Cone] = []

    def seg_token(tet: int, pi, side: _PatchSide):
        e, j = side.data
        u, v = EDGE_VERTICES[e]
        pu, pv = pi[u], pi[v]
        e2 = EDGE_INDEX[frozenset((pu, pv))]
        m = _edge_weight_local(sk, weights, tet, e2)
        if pu < pv:
            return ("seg", e2, j), side.direction
        return ("seg", e2, m - j), -side.direction

    # face patches, instantiated on both slots of each face orbit
    for fo, orbit in enumerate(sk.face_orbits):
        rep = orbit[0]
        patches = _face_patches(tri, coords, weights, fo)
        g = tri.gluings[rep[0]][rep[1]]
        assert g is not None
        slots = [(rep, (0, 1, 2, 3)), ((g.tet, g.face), g.perm)]
        for slot, pi in slots:
            tet, face_local = slot
            pi_face = pi[rep[1]]
            for patch in patches:
                if patch.key[0] == "corner":
                    _, w, i = patch.key
                    region = _patch_region(
                        tcounts[tet], qtypes[tet], qcounts[tet],
                        pi_face, pi[w], i,
                    )
                else:
                    region = _central_patch_region(
                        tcounts[tet], qtypes[tet], qcounts[tet], pi_face
                    )
                cell = (tet, region)
                for piece_idx, piece_sides in _patch_pieces(patch):
                    tokens = []
                    for s in piece_sides:
                        if isinstance(s, _PatchSide):
                            if s.kind == "arc":
                                w_rep, n = s.data
                                tokens.append(
                                    (("arc", (fo, w_rep, n), slot), s.direction)
                                )
                            else:
                                tokens.append(seg_token(tet, pi, s))
                        else:
                            _, chord, direction = s
                            tokens.append(
                                (("diag", patch.key, chord, slot), direction)
                            )
                    cones.append(
                        _Cone(
                            cell=cell,
                            sides=tuple(tokens),
                            base=("patch", fo, patch.key, piece_idx, slot),
                        )
                    )

    # normal disks, one instance per side, bases left unglued
    for disk in complex_.disks:
        tet = disk[0]
        uses = complex_.boundaries[disk]
        near, far = _disk_regions(tcounts[tet], qtypes[tet], qcounts[tet], disk)
        for side_idx, region in ((0, near), (1, far)):
            cell = (tet, region)
            arc_tokens = [
                (("arc", u.arc, u.face_slot), u.direction) for u in uses
            ]
            if len(uses) == 3:
                cones.append(
                    _Cone(cell=cell, sides=tuple(arc_tokens), base=None)
                )
            else:
                diag = ("qdiag", disk, side_idx)
                cones.append(
                    _Cone(
                        cell=cell,
                        sides=(arc_tokens[0], arc_tokens[1], (diag, -1)),
                        base=None,
                    )
                )
                cones.append(
                    _Cone(
                        cell=cell,
                        sides=((diag, 1), arc_tokens[2], arc_tokens[3]),
                        base=None,
                    )
                )

    rows: list[list] = [[None] * 4 for _ in cones]

    # base gluings: pair the two slot instances of each patch piece
    by_base: dict[tuple, list[int]] = {}
    for idx, cone in enumerate(cones):
        if cone.base is not None:
            key = cone.base[:4]
            by_base.setdefault(key, []).append(idx)
    for key, pair in sorted(by_base.items()):
        assert len(pair) == 2, f"patch piece {key} has {len(pair)} instances"
        a, b = pair
        rows[a][3] = (b, 3, (0, 1, 2, 3))
        rows[b][3] = (a, 3, (0, 1, 2, 3))

    # side gluings: match tokens within each cell
    by_side: dict[tuple, list[tuple[int, int, int]]] = {}
    for idx, cone in enumerate(cones):
        for k, (token, direction) in enumerate(cone.sides):
            by_side.setdefault((cone.cell, token), []).append((idx, k, direction))
    for key, group in sorted(by_side.items()):
        assert len(group) == 2, f"cell 1-cell {key} bounds {len(group)} sides"
        (i1, k1, d1), (i2, k2, d2) = group
        perm1 = [0, 0, 0, 0]
        if d1 == d2:
            perm1[k1] = k2
            perm1[(k1 + 1) % 3] = (k2 + 1) % 3
        else:
            perm1[k1] = (k2 + 1) % 3
            perm1[(k1 + 1) % 3] = k2
        perm1[(k1 + 2) % 3] = (k2 + 2) % 3
        perm1[3] = 3
        f1 = (k1 + 2) % 3
        f2 = (k2 + 2) % 3
        perm2 = [0, 0, 0, 0]
        for v in range(4):
            perm2[perm1[v]] = v
        rows[i1][f1] = (i2, f2, tuple(perm1))
        rows[i2][f2] = (i1, f1, tuple(perm2))

    return validate(rows, require_closed=False, require_orientable=True)


def _boundary_neighbor(tri: Triangulation, tet: int, face: int, u: int, v: int):
    """Rotate around edge {u, v} of boundary face (tet, face) until the next
    boundary face; returns (tet', face', u', v') with the edge correspondence."""
    cur_tet, avoid, cu, cv = tet, face, u, v
    while True:
        other = ({0, 1, 2, 3} - {cu, cv, avoid}).pop()
        g = tri.gluings[cur_tet][other]
        if g is None:
            return cur_tet, other, cu, cv
        cur_tet, avoid, cu, cv = g.tet, g.face, g.perm[cu], g.perm[cv]


def cap_boundary(tri: Triangulation) -> Triangulation:
    """Cone off every boundary component; each must be a 2-sphere."""
    slots = [
        (i, f)
        for i in range(tri.size)
        for f in range(4)
        if tri.gluings[i][f] is None
    ]
    if not slots:
        return tri

    neighbors: dict[tuple[int, int, int, int], tuple[int, int, int, int]] = {}
    for i, f in slots:
        verts = FACE_VERTICES[f]
        for a in range(3):
            u, v = verts[a], verts[(a + 1) % 3]
            neighbors[(i, f, u, v)] = _boundary_neighbor(tri, i, f, u, v)

    # boundary components and their Euler characteristics
    slot_index = {s: n for n, s in enumerate(slots)}
    parent = list(range(len(slots)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    corner_parent: dict[tuple[int, int, int], tuple[int, int, int]] = {}

    def cfind(x):
        while corner_parent.setdefault(x, x) != x:
            corner_parent[x] = corner_parent[corner_parent[x]]
            x = corner_parent[x]
        return x

    for (i, f, u, v), (i2, f2, u2, v2) in neighbors.items():
        a, b = find(slot_index[(i, f)]), find(slot_index[(i2, f2)])
        if a != b:
            parent[a] = b
        for x, y in (((i, f, u), (i2, f2, u2)), ((i, f, v), (i2, f2, v2))):
            rx, ry = cfind(x), cfind(y)
            if rx != ry:
                corner_parent[rx] = ry

    groups: dict[int, list[tuple[int, int]]] = {}
    for s in slots:
        groups.setdefault(find(slot_index[s]), []).append(s)
    for comp in groups.values():
        f_count = len(comp)
        e_count = 3 * f_count // 2
        corners = {
            cfind((i, f, w)) for i, f in comp for w in FACE_VERTICES[f]
        }
        chi = len(corners) - e_count + f_count
        assert chi == 2, f"boundary component has Euler characteristic {chi}"

    rows: list[list] = []
    for i in range(tri.size):
        rows.append([
            (g.tet, g.face, g.perm) if g is not None else None
            for g in tri.gluings[i]
        ])

    cap_of = {s: tri.size + n for n, s in enumerate(slots)}
    for (i, f), cap in cap_of.items():
        verts = FACE_VERTICES[f]
        rows.append([None] * 4)
        base = [0, 0, 0, 0]
        for loc, w in enumerate(verts):
            base[loc] = w
        base[3] = f
        rows[cap][3] = (i, f, tuple(base))
        inv = [0, 0, 0, 0]
        for x in range(4):
            inv[base[x]] = x
        rows[i][f] = (cap, 3, tuple(inv))

    loc_of = {}
    for i, f in slots:
        for loc, w in enumerate(FACE_VERTICES[f]):
            loc_of[(i, f, w)] = loc

    for (i, f, u, v), (i2, f2, u2, v2) in neighbors.items():
        cap1, cap2 = cap_of[(i, f)], cap_of[(i2, f2)]
        w = ({0, 1, 2, 3} - {f, u, v}).pop()
        w2 = ({0, 1, 2, 3} - {f2, u2, v2}).pop()
        p = [0, 0, 0, 0]
        p[loc_of[(i, f, u)]] = loc_of[(i2, f2, u2)]
        p[loc_of[(i, f, v)]] = loc_of[(i2, f2, v2)]
        p[loc_of[(i, f, w)]] = loc_of[(i2, f2, w2)]
        p[3] = 3
        face1 = loc_of[(i, f, w)]
        rows[cap1][face1] = (cap2, p[face1], tuple(p))

    return validate(rows, require_closed=True, require_orientable=True)


def cut_and_cap(tri: Triangulation, coords) -> list[Triangulation]:
    """Cut along the surface and cap every boundary sphere with a cone;
    topologically faithful (no summand is lost).  Returns the pieces."""
    cut = cut_complex(tri, coords)
    return [cap_boundary(piece) for piece in split_components(cut)]
