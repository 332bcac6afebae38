"""Independent reference implementations used only by the tests.

Nothing here imports the algorithms it is checking: distances come from
exhaustive chain enumeration, homology from sympy's Smith normal form,
vertex rays from sympy matrix ranks, and normal solutions from a direct
backtracking search over bounded coordinates.
"""
from __future__ import annotations

import itertools

import sympy
from sympy.matrices.normalforms import smith_normal_form

from kneser.normal import matching_system
from kneser.triangulation import FACE_VERTICES, Triangulation, skeleton


def exhaustive_chain_distance(tri: Triangulation, a: int, b: int) -> int | None:
    """Minimal chain length - 1 by brute-force enumeration of all simple
    chains of tetrahedra with consecutive vertex sharing."""
    sk = skeleton(tri)
    share = [
        [
            any(
                sk.vertex_orbit_of[(x, u)] == sk.vertex_orbit_of[(y, v)]
                for u in range(4)
                for v in range(4)
            )
            for y in range(tri.size)
        ]
        for x in range(tri.size)
    ]
    best = None
    for length in range(1, tri.size + 1):
        for chain in itertools.permutations(range(tri.size), length):
            if chain[0] != a or chain[-1] != b:
                continue
            if all(share[x][y] for x, y in zip(chain, chain[1:])):
                best = length - 1
                break
        if best is not None:
            break
    return best


def sympy_homology(tri: Triangulation, k: int) -> tuple[int, tuple[int, ...]]:
    """H_k invariants via sympy: ranks and Smith normal form of the orbit
    boundary matrices, built here from scratch."""
    sk = skeleton(tri)
    d1 = _boundary_matrix(tri, 1)
    d2 = _boundary_matrix(tri, 2)
    d3 = _boundary_matrix(tri, 3)
    dims = {0: sk.vertex_count, 1: sk.edge_count, 2: sk.face_count}
    mats = {0: None, 1: d1, 2: d2, 3: d3}
    lower = mats[k]
    upper = mats[k + 1]
    rank_lower = 0 if lower is None else lower.rank()
    rank_upper = upper.rank()
    betti = dims[k] - rank_lower - rank_upper
    snf = smith_normal_form(upper)
    torsion = sorted(
        int(abs(snf[i, i]))
        for i in range(min(snf.shape))
        if abs(snf[i, i]) > 1
    )
    return betti, tuple(torsion)


def _boundary_matrix(tri: Triangulation, k: int) -> sympy.Matrix:
    """Boundary of the orbit chain complex, written independently of the
    library: signs from sorting parities of identified vertex tuples."""
    from kneser.triangulation import EDGE_INDEX, EDGE_VERTICES

    sk = skeleton(tri)
    if k == 1:
        m = sympy.zeros(sk.vertex_count, sk.edge_count)
        for idx, orbit in enumerate(sk.edge_orbits):
            tet, e = orbit[0]
            u, v = EDGE_VERTICES[e]
            m[sk.vertex_orbit_of[(tet, v)], idx] += 1
            m[sk.vertex_orbit_of[(tet, u)], idx] -= 1
        return m
    if k == 2:
        m = sympy.zeros(sk.edge_count, sk.face_count)
        for idx, orbit in enumerate(sk.face_orbits):
            tet, f = orbit[0]
            a, b, c = FACE_VERTICES[f]
            for sign, (u, v) in ((1, (b, c)), (-1, (a, c)), (1, (a, b))):
                eidx, reversed_ = sk.edge_orbit_of[(tet, EDGE_INDEX[frozenset((u, v))])]
                m[eidx, idx] += -sign if reversed_ else sign
        return m
    if k == 3:
        m = sympy.zeros(sk.face_count, tri.size)
        for i in range(tri.size):
            for f in range(4):
                orbit = sk.face_orbit_of[(i, f)]
                rep = sk.face_orbits[orbit][0]
                if rep == (i, f):
                    rel = 1
                else:
                    g = tri.gluings[rep[0]][rep[1]]
                    images = [g.perm[v] for v in FACE_VERTICES[rep[1]]]
                    rel = _parity(images)
                m[orbit, i] += (-1) ** f * rel
        return m
    raise ValueError(k)


def _parity(seq) -> int:
    seen = 0
    s = list(seq)
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                seen += 1
    return -1 if seen % 2 else 1


def is_vertex_ray_sympy(tri: Triangulation, coords) -> bool:
    """Extremality via sympy rank: solutions supported inside supp(coords)
    must form a 1-dimensional space."""
    matching = matching_system(tri)
    support = [i for i, c in enumerate(coords) if c]
    if not support:
        return False
    m = sympy.Matrix([[row[c] for c in support] for row in matching])
    return len(support) - m.rank() == 1


def brute_force_solutions(
    tri: Triangulation, cmax: int = 4, max_weight: int | None = None
) -> list[tuple[int, ...]]:
    """Every admissible solution with all coordinates <= cmax (and, when
    max_weight is given, total weight <= max_weight), by per-tet pattern
    backtracking.

    Pruning: candidate pools are intersected over all already-assigned
    neighbor faces, and partial assignments are cut once the sum over edge
    orbits of the largest assigned crossing count exceeds the weight cap
    (crossing counts of a completed solution agree across incidences, so
    that sum is a valid lower bound).
    """
    from kneser.normal import edge_weight_in

    t = tri.size
    sk = skeleton(tri)
    patterns = _tet_patterns(cmax)

    def face_sig(pattern, face):
        return tuple(
            _pattern_arc_count(pattern, face, v) for v in FACE_VERTICES[face]
        )

    # pattern ids by per-face arc signature (shared by all tets)
    by_face: dict[int, dict[tuple, set[int]]] = {f: {} for f in range(4)}
    for pid, p in enumerate(patterns):
        for f in range(4):
            by_face[f].setdefault(face_sig(p, f), set()).add(pid)

    # per (tet, local edge): the edge orbit, for the weight bound
    orbit_of = {
        (tet, e): sk.edge_orbit_of[(tet, e)][0]
        for tet in range(t)
        for e in range(6)
    }

    def pattern_coords(pattern):
        coords = [0] * 7
        for v in range(4):
            coords[v] = pattern[v]
        if pattern[4] is not None:
            coords[4 + pattern[4]] = pattern[5]
        return coords

    pattern_edge_counts = []
    for p in patterns:
        local = pattern_coords(p)
        padded = local + [0] * 7  # edge_weight_in indexes a 7t vector
        pattern_edge_counts.append(
            tuple(edge_weight_in(padded, 0, e) for e in range(6))
        )

    order = [0]
    remaining = set(range(1, t))
    while remaining:
        nxt = None
        for cand in sorted(remaining):
            if any(
                tri.gluings[cand][f] is not None
                and tri.gluings[cand][f].tet in order
                for f in range(4)
            ):
                nxt = cand
                break
        if nxt is None:
            nxt = min(remaining)
        order.append(nxt)
        remaining.remove(nxt)

    solutions: list[tuple[int, ...]] = []
    assigned: dict[int, int] = {}
    orbit_max = [0] * sk.edge_count
    bound = 0

    def candidates(tet):
        pools = []
        for f in range(4):
            g = tri.gluings[tet][f]
            if g is None or g.tet not in assigned:
                continue
            other = patterns[assigned[g.tet]]
            sig = tuple(
                _pattern_arc_count(other, g.face, g.perm[v])
                for v in FACE_VERTICES[f]
            )
            pools.append(by_face[f].get(sig, set()))
        if not pools:
            return range(len(patterns))
        pool = set.intersection(*pools)
        return sorted(pool)

    def ok(tet, pattern):
        for f in range(4):
            g = tri.gluings[tet][f]
            if g is None or g.tet not in assigned:
                continue
            other = patterns[assigned[g.tet]]
            for v in FACE_VERTICES[f]:
                if _pattern_arc_count(pattern, f, v) != _pattern_arc_count(
                    other, g.face, g.perm[v]
                ):
                    return False
        return True

    def place(pos):
        nonlocal bound
        if pos == t:
            coords = [0] * (7 * t)
            for tet, pid in assigned.items():
                local = pattern_coords(patterns[pid])
                coords[7 * tet: 7 * tet + 7] = local
            solutions.append(tuple(coords))
            return
        tet = order[pos]
        for pid in candidates(tet):
            assigned[tet] = pid
            if not ok(tet, patterns[pid]):
                del assigned[tet]
                continue
            if max_weight is None:
                place(pos + 1)
                del assigned[tet]
                continue
            counts = pattern_edge_counts[pid]
            touched = []
            new_bound = bound
            feasible = True
            for e in range(6):
                orb = orbit_of[(tet, e)]
                if counts[e] > orbit_max[orb]:
                    touched.append((orb, orbit_max[orb]))
                    new_bound += counts[e] - orbit_max[orb]
                    orbit_max[orb] = counts[e]
            if new_bound > max_weight:
                feasible = False
            if feasible:
                old = bound
                bound = new_bound
                place(pos + 1)
                bound = old
            for orb, prev in touched:
                orbit_max[orb] = prev
            del assigned[tet]

    place(0)
    return sorted(solutions)


def _tet_patterns(cmax):
    """(t0, t1, t2, t3, qtype | None, qcount) with entries <= cmax."""
    out = []
    for tris in itertools.product(range(cmax + 1), repeat=4):
        out.append((*tris, None, 0))
        for qt in range(3):
            for qc in range(1, cmax + 1):
                out.append((*tris, qt, qc))
    return out


def _pattern_arc_count(pattern, face, corner):
    t0, t1, t2, t3, qt, qc = pattern
    tris = (t0, t1, t2, t3)
    others = [x for x in FACE_VERTICES[face] if x != corner]
    from kneser.normal import quad_type_separating

    need = quad_type_separating(others[0], others[1])
    return tris[corner] + (qc if qt == need else 0)


def shell_quadrature_k(r: float, shells: int = 20000) -> float:
    """Independent numerical quadrature of the bad-set constant
    K = integral over B(0, 2r) of 4 r^2 / |z|^2 dz, via midpoint spherical
    shells (the integrand is radial)."""
    import math

    total = 0.0
    for i in range(shells):
        rho0 = 2.0 * r * i / shells
        rho1 = 2.0 * r * (i + 1) / shells
        mid = 0.5 * (rho0 + rho1)
        vol = 4.0 / 3.0 * math.pi * (rho1 ** 3 - rho0 ** 3)
        total += 4.0 * r * r / (mid * mid) * vol
    return total
