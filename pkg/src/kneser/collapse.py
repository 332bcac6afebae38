"""Collapsing degenerate triangles of a labeled sphere into a bouquet.

The domain is a triangulated 2-sphere whose triangles carry images: either
a face label plus per-edge labels (a nondegenerate, homeomorphic image) or
None (the triangle maps into the 1-skeleton and will be collapsed).
Collapsing the degenerate triangles one by one, each to a point, is a
homotopy equivalence onto a bouquet whose 2-cells are exactly the
nondegenerate triangles; the generators are the maximal nondegenerate
subcomplexes, i.e. the components of the nondegenerate triangles under
adjacency across surviving (nondegenerate-nondegenerate) edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InconsistentLabels

Triangle = tuple[int, int, int]


@dataclass(frozen=True)
class FaceImage:
    """Image data of one nondegenerate triangle: the face it maps onto and
    the images of its three edges (v0v1, v1v2, v2v0)."""

    face: object
    edges: tuple[object, object, object]


@dataclass(frozen=True)
class BouquetGenerator:
    """One sphere of the bouquet: the triangles it consists of."""

    triangles: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.triangles)


def _check_sphere(triangles: Sequence[Triangle]) -> dict:
    """Each edge in exactly two triangles, connected, Euler characteristic 2."""
    edges: dict[frozenset, list[tuple[int, int]]] = {}
    for ti, tri in enumerate(triangles):
        if len(set(tri)) != 3:
            raise ValueError(f"triangle {ti} repeats a vertex")
        for k in range(3):
            e = frozenset((tri[k], tri[(k + 1) % 3]))
            edges.setdefault(e, []).append((ti, k))
    for e, inc in edges.items():
        if len(inc) != 2:
            raise ValueError(f"edge {sorted(e)} lies in {len(inc)} triangles")
    verts = {v for tri in triangles for v in tri}
    chi = len(verts) - len(edges) + len(triangles)
    if chi != 2:
        raise ValueError(f"Euler characteristic {chi}, expected a sphere")
    seen = {0}
    stack = [0]
    adjacency: dict[int, set[int]] = {i: set() for i in range(len(triangles))}
    for inc in edges.values():
        (a, _), (b, _) = inc
        adjacency[a].add(b)
        adjacency[b].add(a)
    while stack:
        x = stack.pop()
        for y in adjacency[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(triangles):
        raise ValueError("sphere is not connected")
    return edges


def collapse_extract(
    triangles: Sequence[Triangle],
    image: Sequence[FaceImage | None],
) -> list[BouquetGenerator]:
    """Collapse Degenerate (None-labeled) triangles in listed order and
    return the bouquet generators with their nondegenerate triangle counts.
    """
    triangles = [tuple(t) for t in triangles]
    if len(image) != len(triangles):
        raise InconsistentLabels(
            f"{len(triangles)} triangles but {len(image)} image labels"
        )
    edges = _check_sphere(triangles)

    # labels must agree along every edge shared by two nondegenerate faces
    for e, inc in edges.items():
        (a, ka), (b, kb) = inc
        ia, ib = image[a], image[b]
        if ia is None or ib is None:
            continue
        if ia.edges[ka] != ib.edges[kb]:
            raise InconsistentLabels(
                f"triangles {a} and {b} disagree on edge {sorted(e)}: "
                f"{ia.edges[ka]!r} vs {ib.edges[kb]!r}"
            )

    # Collapsing a closed triangle to a point identifies its vertices and
    # kills its edges; the surviving (nondegenerate-nondegenerate) edges are
    # untouched, so the bouquet pieces are the components of nondegenerate
    # triangles under adjacency across surviving edges.  The listed order
    # only orders the homotopy equivalences; the quotient is order-free.
    live = [i for i, img in enumerate(image) if img is not None]
    comp = {i: i for i in live}

    def cfind(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for inc in edges.values():
        (a, _), (b, _) = inc
        if image[a] is not None and image[b] is not None:
            ra, rb = cfind(a), cfind(b)
            if ra != rb:
                comp[ra] = rb

    groups: dict[int, list[int]] = {}
    for i in live:
        groups.setdefault(cfind(i), []).append(i)
    return [
        BouquetGenerator(triangles=tuple(sorted(g)))
        for g in sorted(groups.values(), key=min)
    ]
