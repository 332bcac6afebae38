import pytest

from kneser.errors import BudgetExceeded, NotClosed
from kneser.normal import (
    check_coordinates,
    euler_from_coordinates,
    matching_system,
    quad_index,
    satisfies_matching,
    satisfies_quad_constraint,
    vertex_link_coordinates,
    weight,
    zero_coordinates,
)
from kneser.reconstruct import build_complex, reconstruct
from kneser.triangulation import skeleton, validate
from kneser.vertex_enum import enumerate_vertex_solutions, is_vertex_ray
from oracles import brute_force_solutions, is_vertex_ray_sympy


class TestMatchingSystem:
    def test_bd4_shape(self, bd4):
        m = matching_system(bd4)
        assert len(m) == 30 and len(m[0]) == 35

    def test_zero_vector_satisfies(self, bd4):
        assert satisfies_matching(bd4, zero_coordinates(bd4))

    def test_vertex_links_satisfy(self, bd4):
        for orbit in range(skeleton(bd4).vertex_count):
            coords = vertex_link_coordinates(bd4, orbit)
            assert satisfies_matching(bd4, coords)

    def test_not_closed_rejected(self):
        open_tri = validate([[None] * 4], require_closed=False)
        with pytest.raises(NotClosed):
            matching_system(open_tri)


class TestEnumeration:
    def test_bd4_contains_all_vertex_links(self, bd4):
        solutions = enumerate_vertex_solutions(bd4)
        links = {
            vertex_link_coordinates(bd4, orbit)
            for orbit in range(skeleton(bd4).vertex_count)
        }
        assert links <= set(solutions)
        assert len(solutions) == 15  # 5 vertex links + 10 thin edge links

    def test_quad_constraint_postcondition(self, closed_corpus):
        for tri in closed_corpus.values():
            for coords in enumerate_vertex_solutions(tri):
                assert satisfies_quad_constraint(coords, tri.size)
                assert satisfies_matching(tri, coords)

    def test_budget(self, bd4):
        with pytest.raises(BudgetExceeded):
            enumerate_vertex_solutions(bd4, budget=4)

    def test_not_closed_propagates(self):
        open_tri = validate([[None] * 4], require_closed=False)
        with pytest.raises(NotClosed):
            enumerate_vertex_solutions(open_tri)

    def test_deterministic(self, closed_corpus):
        for tri in closed_corpus.values():
            assert enumerate_vertex_solutions(tri) == enumerate_vertex_solutions(tri)

    def test_gcd_reduced(self, closed_corpus):
        from math import gcd

        for tri in closed_corpus.values():
            for coords in enumerate_vertex_solutions(tri):
                g = 0
                for c in coords:
                    g = gcd(g, c)
                assert g == 1

    def test_brute_force_parity_small_corpus(self, small_corpus):
        """On every <= 6-tet triangulation, the enumerated solutions inside
        the window {coords <= 4, weight <= 12} must coincide with the
        brute-force solutions there that span extreme rays (extremality
        decided by an independent sympy rank computation).

        The weight cap keeps the search finite: the full coordinate box of
        the 4-simplex boundary lives in a 15-dimensional cone.  Every
        enumerated solution of the small corpus fits in the window, so the
        comparison covers the complete vertex-solution lists.
        """
        from math import gcd

        for name, tri in small_corpus.items():
            brute = brute_force_solutions(tri, cmax=4, max_weight=12)
            reduced = set()
            for coords in brute:
                if not any(coords) or not is_vertex_ray_sympy(tri, coords):
                    continue
                g = 0
                for c in coords:
                    g = gcd(g, c)
                if g == 1:
                    reduced.add(coords)
            enumerated = {
                coords
                for coords in enumerate_vertex_solutions(tri)
                if max(coords) <= 4 and weight(tri, coords) <= 12
            }
            assert enumerated == {
                coords for coords in enumerate_vertex_solutions(tri)
            }, f"{name}: a small-corpus vertex solution escaped the window"
            assert enumerated == reduced, name

    def test_full_box_parity_where_feasible(self):
        """The 1-tet sphere and the 2-tet projective space have small
        solution cones; there the whole <= 4 coordinate box is enumerable
        with no weight cap at all."""
        from math import gcd
        from kneser import corpus

        for tri in (corpus.s3_one_tet(), corpus.rp3_two_tet()):
            brute = brute_force_solutions(tri, cmax=4)
            reduced = set()
            for coords in brute:
                if not any(coords) or not is_vertex_ray_sympy(tri, coords):
                    continue
                g = 0
                for c in coords:
                    g = gcd(g, c)
                if g == 1:
                    reduced.add(coords)
            enumerated = {
                coords
                for coords in enumerate_vertex_solutions(tri)
                if max(coords) <= 4
            }
            assert enumerated == reduced

    def test_library_vertex_ray_test_matches_sympy(self, small_corpus):
        for name, tri in small_corpus.items():
            matching = matching_system(tri)
            for coords in enumerate_vertex_solutions(tri):
                assert is_vertex_ray(matching, coords)
                assert is_vertex_ray_sympy(tri, coords)


class TestWeight:
    def test_vertex_link_weight_four(self, bd4):
        coords = vertex_link_coordinates(bd4, 0)
        assert weight(bd4, coords) == 4

    def test_additive_on_solution_combinations(self, small_corpus):
        # weight only needs the matching equations, which are linear
        for tri in small_corpus.values():
            sols = enumerate_vertex_solutions(tri)
            for a in sols[:3]:
                for b in sols[:3]:
                    combo = tuple(2 * x + 3 * y for x, y in zip(a, b))
                    assert weight(tri, combo) == 2 * weight(tri, a) + 3 * weight(tri, b)

    def test_linearity(self, bd4):
        coords = vertex_link_coordinates(bd4, 0)
        doubled = tuple(2 * c for c in coords)
        assert weight(bd4, doubled) == 8

    def test_zero(self, bd4):
        assert weight(bd4, zero_coordinates(bd4)) == 0

    def test_inconsistent_crossings_detected(self, bd4):
        # a lone triangle violates matching, so its edge counts disagree
        # between incident tets; edge_weights must flag that
        from kneser.errors import InconsistentCrossings
        from kneser.normal import edge_weights, tri_index

        bad = list(zero_coordinates(bd4))
        bad[tri_index(0, 0)] = 1
        with pytest.raises(InconsistentCrossings):
            edge_weights(bd4, bad)


class TestReconstruct:
    def test_vertex_link_cells(self, bd4):
        coords = vertex_link_coordinates(bd4, 0)
        surface = reconstruct(bd4, coords)
        assert surface.connected
        assert (surface.vertex_count, surface.arc_count, surface.disk_count) == (
            4, 6, 4,
        )
        assert surface.euler_characteristic == 2
        assert surface.vertex_linking
        [comp] = surface.components
        assert comp.is_sphere and comp.orientable and comp.genus == 0

    def test_quad_implies_not_vertex_linking(self, closed_corpus):
        for tri in closed_corpus.values():
            for coords in enumerate_vertex_solutions(tri):
                if any(
                    coords[quad_index(i, j)]
                    for i in range(tri.size)
                    for j in range(3)
                ):
                    assert not reconstruct(tri, coords).vertex_linking

    def test_two_disjoint_links(self, bd4):
        a = vertex_link_coordinates(bd4, 0)
        b = vertex_link_coordinates(bd4, 1)
        both = tuple(x + y for x, y in zip(a, b))
        surface = reconstruct(bd4, both)
        assert len(surface.components) == 2
        assert all(c.euler_characteristic == 2 for c in surface.components)
        assert tuple(
            sum(c.coordinates[i] for c in surface.components)
            for i in range(35)
        ) == both

    def test_euler_cross_check_whole_corpus(self, closed_corpus):
        # reconstruct() internally asserts cell-count chi == coordinate chi;
        # also verify the equality explicitly here
        for tri in closed_corpus.values():
            for coords in enumerate_vertex_solutions(tri):
                surface = reconstruct(tri, coords)
                assert surface.euler_characteristic == euler_from_coordinates(
                    tri, coords
                )

    def test_all_triangle_components_are_vertex_links(self, closed_corpus):
        for tri in closed_corpus.values():
            sk = skeleton(tri)
            links = {
                vertex_link_coordinates(tri, orbit)
                for orbit in range(sk.vertex_count)
            }
            for coords in enumerate_vertex_solutions(tri):
                for comp in reconstruct(tri, coords).components:
                    if comp.vertex_linking:
                        assert comp.coordinates in links

    def test_doubled_link_weight_consistency(self, bd4):
        coords = vertex_link_coordinates(bd4, 0)
        doubled = tuple(2 * c for c in coords)
        complex_ = build_complex(bd4, doubled)
        assert sum(complex_.weights_per_edge) == 8

    def test_rejects_bad_coordinates(self, bd4):
        bad = list(zero_coordinates(bd4))
        bad[0] = 1  # an isolated triangle violates matching
        with pytest.raises(ValueError):
            check_coordinates(bd4, bad)
        two_quads = list(zero_coordinates(bd4))
        two_quads[quad_index(0, 0)] = 1
        two_quads[quad_index(0, 1)] = 1
        with pytest.raises(ValueError):
            check_coordinates(bd4, two_quads, require_quads=True)
