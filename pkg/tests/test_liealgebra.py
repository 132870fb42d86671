from fractions import Fraction
from math import comb

import numpy as np
import pytest
from pytest import approx

from liealgebra.algebra import LieAlgebra, catalog_algebra, structure_constants_from_matrices
from liealgebra.chevalley import (
    GradedForm,
    ce_differential,
    ce_matrix,
    cohomology_dims,
    graded_differential,
    hom_project_algebra,
    hom_project_by_jet,
)
from liealgebra.representation import (
    Representation,
    adjoint,
    coadjoint,
    differentiate,
    from_matrices,
    symmetric_power,
    tensor,
    trivial,
)
from tensorcore.errors import DimensionError, StructureError
from tensorcore.tensors import AltSymTensor, basis_form

ALGEBRAS = ["su2", "so3", "sl2", "heis3", "abelian:3", "ut:3"]


def random_form(rng, n, p, k=0, value_dim=1, m=None):
    return AltSymTensor.from_function(
        n, p, k, value_dim,
        lambda alt, sym: [Fraction(int(x)) for x in rng.integers(-3, 4, size=value_dim)], m)


def random_graded(rng, n, p, dim_c, degrees):
    return GradedForm(n, p, dim_c, {k: random_form(rng, n, p, k, 1, dim_c) for k in degrees})


class TestCatalog:
    def test_su2_brackets(self):
        su2 = catalog_algebra("su2")
        e1, e2, e3 = (su2.basis_vector(i) for i in range(3))
        assert list(su2.bracket(e1, e2)) == list(e3)
        assert list(su2.bracket(e2, e3)) == list(e1)
        assert list(su2.bracket(e3, e1)) == list(e2)

    def test_abelian_is_zero(self):
        assert all(x == 0 for x in catalog_algebra("abelian:4").c.flat)

    def test_heisenberg(self):
        h = catalog_algebra("heis3")
        assert list(h.c[0, 1]) == [0, 0, 1]
        assert all(x == 0 for x in h.c[0, 2]) and all(x == 0 for x in h.c[1, 2])

    def test_unknown_and_bad_sizes(self):
        with pytest.raises(StructureError):
            catalog_algebra("e8")
        with pytest.raises(StructureError):
            catalog_algebra("abelian:x")
        with pytest.raises(StructureError):
            catalog_algebra("ut:1")

    def test_jacobi_violation_is_rejected(self):
        c = np.zeros((3, 3, 3), dtype=object)
        c[0, 1, 0], c[1, 0, 0] = 1, -1
        c[1, 2, 1], c[2, 1, 1] = 1, -1
        c[0, 2, 2], c[2, 0, 2] = 1, -1
        with pytest.raises(StructureError):
            LieAlgebra("bad", c)

    def test_matrix_bracket_convention(self):
        for name in ALGEBRAS:
            algebra = catalog_algebra(name)
            c = structure_constants_from_matrices(algebra.matrices)
            assert (c == algebra.c).all()

    def test_coords_roundtrip(self):
        sl2 = catalog_algebra("sl2")
        x = sl2.element_matrix([1.0, -2.0, 0.5])
        assert [float(v) for v in sl2.coords(x)] == approx([1.0, -2.0, 0.5])


class TestRepresentations:
    @pytest.mark.parametrize("name", ALGEBRAS)
    def test_shipped_reps_are_flat(self, name):
        algebra = catalog_algebra(name)
        for rep in (trivial(algebra, 2), adjoint(algebra), coadjoint(algebra)):
            assert rep.flat
        assert symmetric_power(adjoint(algebra), 2).flat
        assert tensor(adjoint(algebra), coadjoint(algebra)).flat

    def test_non_flat_matrices_are_rejected(self):
        su2 = catalog_algebra("su2")
        mats = [np.eye(2, dtype=int) for _ in range(3)]
        with pytest.raises(StructureError):
            from_matrices(su2, mats)
        # construction alone does not check
        assert not Representation(su2, mats).flat

    def test_symmetric_power_dimension(self):
        rep = adjoint(catalog_algebra("so3"))
        assert symmetric_power(rep, 0).dim == 1
        assert symmetric_power(rep, 2).dim == 6
        assert symmetric_power(rep, 3).dim == 10

    def test_differentiate_defining_rep(self):
        so3 = catalog_algebra("so3")
        rep = differentiate(so3, lambda g: g)
        for got, expected in zip(rep.rho, so3.matrices):
            assert got.astype(float) == approx(expected.astype(float))
        assert rep.flat

    def test_differentiate_conjugation_is_adjoint(self):
        su2 = catalog_algebra("su2")

        def conjugate(g):
            # to first order (1 - eps X) inverts (1 + eps X)
            ginv = 2 * np.eye(4) - g
            return np.column_stack([su2.coords(g @ m.astype(float) @ ginv) for m in su2.matrices])

        rep = differentiate(su2, conjugate)
        for got, expected in zip(rep.rho, adjoint(su2).rho):
            assert got.astype(float) == approx(expected.astype(float))


class TestChevalleyEilenberg:
    def test_zero_forms(self):
        sl2 = catalog_algebra("sl2")
        rep = adjoint(sl2)
        c = AltSymTensor(3, 0, 0, 3, coeffs={((), ()): [Fraction(1), Fraction(2), Fraction(-1)]})
        d = ce_differential(c, rep)
        for i in range(3):
            assert list(d.get((i,))) == list(rep.rho[i] @ c.get(()))

    def test_su2_de1(self):
        su2 = catalog_algebra("su2")
        d = ce_differential(basis_form(3, (0,)), trivial(su2))
        assert (d - (-1) * basis_form(3, (1, 2))).is_zero()

    @pytest.mark.parametrize("name", ALGEBRAS)
    def test_d_squared_vanishes(self, name):
        rng = np.random.default_rng(7)
        algebra = catalog_algebra(name)
        reps = [trivial(algebra), adjoint(algebra), coadjoint(algebra), symmetric_power(adjoint(algebra), 2)]
        for rep in reps:
            for p in range(algebra.n):
                alpha = random_form(rng, algebra.n, p, value_dim=rep.dim)
                assert ce_differential(ce_differential(alpha, rep), rep).is_zero()

    def test_matrix_composition_vanishes(self):
        heis = catalog_algebra("heis3")
        rep = adjoint(heis)
        for p in range(3):
            product = ce_matrix(heis, rep, p + 1) @ ce_matrix(heis, rep, p)
            assert all(x == 0 for x in product.flat)

    def test_dimension_mismatch(self):
        su2 = catalog_algebra("su2")
        with pytest.raises(DimensionError):
            ce_differential(AltSymTensor(3, 1, 0, 2), adjoint(su2))


class TestCohomology:
    def test_su2(self):
        su2 = catalog_algebra("su2")
        assert cohomology_dims(su2, trivial(su2)) == [1, 0, 0, 1]

    def test_heisenberg(self):
        h = catalog_algebra("heis3")
        assert cohomology_dims(h, trivial(h)) == [1, 2, 2, 1]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_abelian_binomials(self, n):
        algebra = catalog_algebra(f"abelian:{n}")
        assert cohomology_dims(algebra, trivial(algebra)) == [comb(n, p) for p in range(n + 1)]

    def test_semisimple_adjoint_is_acyclic(self):
        sl2 = catalog_algebra("sl2")
        assert cohomology_dims(sl2, adjoint(sl2)) == [0, 0, 0, 0]

    def test_symmetric_power_zero_is_trivial(self):
        so3 = catalog_algebra("so3")
        assert cohomology_dims(so3, coadjoint(so3), 0) == [1, 0, 0, 1]
        # S^2 of the 3-dim irreducible has exactly one trivial summand
        assert cohomology_dims(so3, coadjoint(so3), 2) == [1, 0, 0, 1]

    def test_non_flat_rejected(self):
        su2 = catalog_algebra("su2")
        with pytest.raises(StructureError):
            cohomology_dims(su2, Representation(su2, [np.eye(2, dtype=int)] * 3))


class TestHomogeneousProjection:
    def test_projector_fixes_homogeneous_forms(self):
        rng = np.random.default_rng(11)
        form = random_graded(rng, 3, 1, 3, [2])
        assert (hom_project_algebra(form, 2) - form).is_zero()
        assert hom_project_algebra(hom_project_algebra(form, 2), 2).pieces.keys() == {2}

    def test_missing_degree_projects_to_zero(self):
        rng = np.random.default_rng(12)
        form = random_graded(rng, 3, 1, 3, [0, 2])
        assert hom_project_algebra(form, 1).is_zero()

    def test_jet_route_matches_piece_extraction(self):
        rng = np.random.default_rng(13)
        form = random_graded(rng, 3, 1, 3, [0, 1, 2])
        xi = [Fraction(int(x), 3) for x in rng.integers(-4, 5, size=3)]
        for k in range(3):
            by_jet = hom_project_by_jet(form, k, xi)
            direct = hom_project_algebra(form, k).evaluate_at(xi)
            assert (by_jet - direct).is_zero()

    @pytest.mark.parametrize("name", ["su2", "heis3", "sl2"])
    def test_projection_commutes_with_differential(self, name):
        rng = np.random.default_rng(14)
        algebra = catalog_algebra(name)
        rep = adjoint(algebra)
        form = random_graded(rng, 3, 1, 3, [0, 1, 2])
        for k in range(3):
            left = hom_project_algebra(graded_differential(form, rep), k)
            right = graded_differential(hom_project_algebra(form, k), rep)
            assert (left - right).is_zero()
