import pytest

from kneser import corpus
from kneser.decomposition import (
    certify_weakly_irreducible,
    connected_sum,
    decompose,
    find_essential_sphere,
    simplify,
    sphere_witnesses,
)
from kneser.errors import BudgetExceeded
from kneser.homology import homology
from kneser.pl_area import pl_area
from kneser.reconstruct import reconstruct
from kneser.triangulation import skeleton
from kneser.vertex_enum import enumerate_vertex_solutions
from oracles import brute_force_solutions, sympy_homology


class TestConnectedSum:
    def test_sizes(self):
        bd4 = corpus.bd4_simplex()
        assert connected_sum(bd4, bd4).size == 8

    def test_valid_closed_orientable(self, sum_pairs):
        for a, b in sum_pairs.values():
            out = connected_sum(a, b)
            assert out.closed and out.orientable
            assert out.size == a.size + b.size - 2

    def test_h1_additivity_against_sympy(self, sum_pairs):
        for a, b in sum_pairs.values():
            out = connected_sum(a, b)
            ha, hb = homology(a, 1), homology(b, 1)
            h = homology(out, 1)
            assert h.rank == ha.rank + hb.rank
            assert sorted(h.torsion) == sorted(ha.torsion + hb.torsion)
            assert (h.rank, h.torsion) == sympy_homology(out, 1)

    def test_nonembedded_summand_rejected(self):
        rp3_small = corpus.rp3_two_tet()
        with pytest.raises(ValueError, match="not embedded"):
            connected_sum(rp3_small, rp3_small)


class TestCertify:
    def test_rp3_and_s3_one_tet_certify(self):
        for tri in (corpus.rp3_two_tet(), corpus.s3_one_tet()):
            cert = certify_weakly_irreducible(tri)
            assert cert.certified
            assert cert.inspected == len(enumerate_vertex_solutions(tri))
            assert cert.witnesses == ()

    def test_quad_sphere_blocks_certificate(self):
        for tri in (
            corpus.bd4_simplex(),
            corpus.s3_two_tet(),
            connected_sum(corpus.bd4_simplex(), corpus.bd4_simplex()),
        ):
            cert = certify_weakly_irreducible(tri)
            assert not cert.certified
            for coords in cert.witnesses:
                surface = reconstruct(tri, coords)
                assert surface.connected
                assert surface.euler_characteristic == 2
                assert not surface.vertex_linking

    def test_certified_iff_no_witness(self, closed_corpus):
        for tri in closed_corpus.values():
            cert = certify_weakly_irreducible(tri)
            witnesses = sphere_witnesses(tri, enumerate_vertex_solutions(tri))
            assert cert.certified == (not witnesses)

    def test_budget_propagates(self, bd4):
        with pytest.raises(BudgetExceeded):
            certify_weakly_irreducible(bd4, budget=2)


class TestFindEssentialSphere:
    def test_none_on_certified(self):
        assert find_essential_sphere(corpus.rp3_two_tet()) is None

    def test_sum_yields_quad_sphere(self):
        tri = connected_sum(corpus.bd4_simplex(), corpus.bd4_simplex())
        found = find_essential_sphere(tri)
        assert found is not None
        coords, area = found
        surface = reconstruct(tri, coords)
        assert surface.connected and surface.euler_characteristic == 2
        assert not surface.vertex_linking
        assert any(coords[7 * i + 4 + j] for i in range(tri.size) for j in range(3))

    def test_lexicographic_selection(self, small_corpus):
        for name, tri in small_corpus.items():
            found = find_essential_sphere(tri)
            witnesses = sphere_witnesses(tri, enumerate_vertex_solutions(tri))
            if found is None:
                assert not witnesses, name
                continue
            coords, area = found
            assert coords in witnesses
            for other in witnesses:
                other_area = pl_area(tri, other)
                assert not other_area.less_than(area), name
                if other_area.tol_equal(area):
                    assert coords <= other

    def test_minimal_against_brute_force(self, small_corpus):
        """The selected sphere is minimal among ALL admissible solutions of
        weight up to the selection's weight (coordinates <= 4), not merely
        among vertex solutions."""
        for name, tri in small_corpus.items():
            found = find_essential_sphere(tri)
            if found is None:
                continue
            coords, area = found
            pool = brute_force_solutions(tri, cmax=4, max_weight=area.weight)
            for other in pool:
                if not any(other):
                    continue
                surface = reconstruct(tri, other)
                if not (
                    surface.connected
                    and surface.euler_characteristic == 2
                    and not surface.vertex_linking
                ):
                    continue
                other_area = pl_area(tri, other)
                assert not other_area.less_than(area), (name, other)


class TestDecompose:
    def test_bd4(self, bd4):
        report = decompose(bd4, oracle_check=True)
        assert report.crushes <= bd4.size
        assert all(p.certificate.certified for p in report.pieces)
        assert all(p.h1.trivial for p in report.pieces)
        assert report.ledger.balanced
        assert report.oracle.agreed

    def test_sums(self, sum_pairs):
        for name, (a, b) in sum_pairs.items():
            tri = connected_sum(a, b)
            report = decompose(tri, oracle_check=True)
            assert report.crushes <= tri.size, name
            assert all(p.certificate.certified for p in report.pieces), name
            assert report.ledger.balanced, name
            assert report.oracle.agreed, name
            assert report.c1 == report.c3 ** 2
            for s in report.spheres:
                assert s.diameter_bound_ok
                assert s.diameter <= report.c1

    def test_rp3_summand_survives(self):
        tri = connected_sum(corpus.bd4_simplex(), corpus.rp3_octahedral())
        report = decompose(tri, oracle_check=True)
        torsions = [p.h1 for p in report.pieces if not p.h1.trivial]
        assert len(torsions) == 1
        assert torsions[0].torsion == (2,)
        assert report.ledger.balanced

    def test_three_summands(self):
        double = connected_sum(corpus.bd4_simplex(), corpus.s3_two_tet())
        triple = connected_sum(double, corpus.rp3_octahedral())
        assert homology(triple, 1).torsion == (2,)
        report = decompose(triple, oracle_check=True)
        assert report.crushes <= triple.size
        assert report.ledger.balanced
        assert report.oracle.agreed
        assert all(p.certificate.certified for p in report.pieces)

    def test_disconnected_input(self, bd4):
        from kneser.triangulation import disjoint_union

        rp3 = corpus.rp3_octahedral()
        both = disjoint_union(bd4, rp3)
        report = decompose(both)
        assert len(report.ledger.input_h1) == 2
        assert report.ledger.balanced

    def test_deterministic(self, sum_pairs):
        a, b = sum_pairs["bd4+rp3"]
        tri = connected_sum(a, b)
        r1 = decompose(tri)
        r2 = decompose(tri)
        assert r1 == r2

    def test_sphere_records_live_in_pieces(self, sum_pairs):
        a, b = sum_pairs["bd4+bd4"]
        report = decompose(connected_sum(a, b))
        for s in report.spheres:
            assert len(s.coordinates) % 7 == 0
            assert s.support_size >= 1


class TestSimplify:
    def test_bd4_shrinks(self, bd4):
        out = simplify(bd4)
        assert out.size <= 4
        assert homology(out, 1).trivial
        assert out.closed and out.orientable

    def test_no_degree_three_edge_unchanged(self):
        rp3 = corpus.rp3_octahedral()
        sk = skeleton(rp3)
        if all(d != 3 for d in sk.edge_degrees):
            assert simplify(rp3) is rp3

    def test_homology_preserved_on_corpus(self, closed_corpus):
        for name, tri in closed_corpus.items():
            out = simplify(tri)
            assert out.size <= tri.size
            for k in (0, 1, 2):
                assert homology(out, k) == homology(tri, k), (name, k)
