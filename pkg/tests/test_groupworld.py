import numpy as np
import pytest

from groupworld.cochains import (
    Cochain,
    check_normalized,
    cup,
    hom_project_group,
    homogeneity_residual,
    sampled_max,
    simplicial_delta,
)
from groupworld.groupoids import dual_action, lie_group, linear_action
from groupworld.groups import adjoint_rep, catalog_group, character_rep, defining_rep
from groupworld.haar import haar, invariance_residual
from groupworld.kappa import block_splitting, gauge_splitting, kappa
from groupworld.tangent import lift_residual, tangent_group
from ruth.catalog import catalog_ruth
from ruth.group_side import RuthCochain, psi
from tensorcore.errors import DimensionError, NormalizationError, QuadratureError, StructureError


@pytest.fixture
def rng():
    return np.random.default_rng(7)


class TestGroups:
    @pytest.mark.parametrize("name", ["torus:2", "su2", "so3", "heis3", "ut:3"])
    def test_exp_invariants(self, name, rng):
        report = catalog_group(name).invariant_residuals(rng, samples=4)
        assert report["exp_zero"] < 1e-12
        assert report["one_parameter"] < 1e-9
        assert report["commutator"] < 1e-9

    def test_unknown_group(self):
        with pytest.raises(StructureError):
            catalog_group("e8")

    def test_u1_is_the_circle(self):
        assert catalog_group("u1").name == "torus:1"

    @pytest.mark.parametrize("rep", [
        lambda: adjoint_rep(catalog_group("su2")),
        lambda: character_rep(catalog_group("torus:2"), [2, -1]),
        lambda: defining_rep(catalog_group("so3")),
    ])
    def test_representations_are_homomorphisms(self, rep, rng):
        assert rep().homomorphism_residual(rng, samples=4) < 1e-9

    def test_characters_need_a_torus(self):
        with pytest.raises(StructureError):
            character_rep(catalog_group("su2"), [1])
        with pytest.raises(DimensionError):
            character_rep(catalog_group("torus:2"), [1])

    def test_adjoint_derivative_is_ad(self):
        group = catalog_group("su2")
        derived = adjoint_rep(group).derivative()
        for i in range(3):
            assert np.allclose(derived.rho[i].astype(float), group.algebra.ad(i).astype(float))


class TestCochains:
    def test_twisted_delta_squares_to_zero(self, rng):
        group = catalog_group("su2")
        lg = lie_group(group)
        f = Cochain(lg, 1, lambda pt: [pt.arrows[0].g[1, 0], pt.arrows[0].g[2, 0], pt.arrows[0].g[3, 0]],
                    3, adjoint_rep(group), "f")
        dd = simplicial_delta(simplicial_delta(f))
        assert sampled_max(dd, lg, 3, rng, samples=6) < 1e-12

    def test_delta_on_action_groupoid(self, rng):
        groupoid = dual_action(character_rep(catalog_group("torus:1"), [1]))
        f = Cochain(groupoid, 1, lambda pt: pt.base[0] * pt.arrows[0].g[1, 0] + pt.base[1] ** 2, 1, None, "f")
        dd = simplicial_delta(simplicial_delta(f))
        assert sampled_max(dd, groupoid, 3, rng, samples=6) < 1e-12

    def test_cup_leibniz(self, rng):
        groupoid = linear_action(character_rep(catalog_group("torus:1"), [1]))
        f1 = Cochain(groupoid, 1, lambda pt: pt.base[0] * pt.arrows[0].g[1, 0], 1, None, "f1")
        f2 = Cochain(groupoid, 1, lambda pt: pt.base[1] + pt.arrows[0].g[0, 0], 1, None, "f2")
        lhs = simplicial_delta(cup(f1, f2))
        rhs = cup(simplicial_delta(f1), f2) - cup(f1, simplicial_delta(f2))
        assert sampled_max(lhs - rhs, groupoid, 3, rng, samples=6) < 1e-12

    def test_cup_with_coefficients(self, rng):
        group = catalog_group("su2")
        lg = lie_group(group)
        scalar = Cochain(lg, 1, lambda pt: pt.arrows[0].g[0, 1], 1, None, "s")
        vector = Cochain(lg, 1, lambda pt: pt.arrows[0].g[1:, 0], 3, adjoint_rep(group), "v")
        product = cup(scalar, vector)
        assert product.value_dim == 3 and product.twist is vector.twist
        lhs = simplicial_delta(product)
        rhs = cup(simplicial_delta(scalar), vector) - cup(scalar, simplicial_delta(vector))
        assert sampled_max(lhs - rhs, lg, 3, rng, samples=4) < 1e-12

    def test_cup_needs_a_scalar(self):
        group = catalog_group("su2")
        lg = lie_group(group)
        v = Cochain(lg, 1, lambda pt: [0, 0, 0], 3, None, "v")
        with pytest.raises(DimensionError):
            cup(v, v)

    def test_normalization(self, rng):
        lg = lie_group(catalog_group("torus:1"))
        good = Cochain(lg, 2, lambda pt: pt.arrows[0].g[1, 0] * pt.arrows[1].g[1, 0], 1, None, "good")
        bad = Cochain(lg, 2, lambda pt: pt.arrows[0].g[0, 0], 1, None, "bad")
        assert check_normalized(good, rng, samples=4) < 1e-12
        with pytest.raises(NormalizationError):
            check_normalized(bad, rng, samples=4)

    def test_homogeneous_parts(self, rng):
        groupoid = linear_action(character_rep(catalog_group("torus:1"), [1]))

        def fn(pt):
            x, g = pt.base, pt.arrows[0].g
            return 1 + x[0] * g[1, 0] + x[0] * x[1] * g[0, 0]

        f = Cochain(groupoid, 1, fn, 1, None, "f")
        parts = [hom_project_group(f, k) for k in range(4)]
        for k, part in enumerate(parts):
            assert homogeneity_residual(part, k, rng, samples=4) < 1e-9
        for _ in range(4):
            pt = groupoid.random_point(rng, 1)
            x, g = pt.base, pt.arrows[0].g
            assert float(parts[2](pt)[0]) == pytest.approx(float(x[0] * x[1] * g[0, 0]))
            assert float(parts[3](pt)[0]) == pytest.approx(0.0)
            assert float(sum(part(pt)[0] for part in parts)) == pytest.approx(float(fn(pt)))

    def test_negative_degrees(self):
        lg = lie_group(catalog_group("torus:1"))
        with pytest.raises(DimensionError):
            Cochain(lg, -1, lambda pt: 0)
        with pytest.raises(DimensionError):
            hom_project_group(Cochain(lg, 0, lambda pt: 0), -1)


class TestHaar:
    def test_torus_rule(self):
        rule = haar(catalog_group("torus:2"), 8)
        assert len(rule) == 64
        assert float(rule.integrate(lambda g: 1.0)) == pytest.approx(1.0)
        assert float(rule.integrate(lambda g: g[0, 0])) == pytest.approx(0.0, abs=1e-14)
        assert float(rule.integrate(lambda g: g[0, 0] ** 2 * g[2, 2] ** 2)) == pytest.approx(0.25)

    def test_su2_moments(self):
        rule = haar(catalog_group("su2"), 6)
        assert float(np.sum(rule.weights)) == pytest.approx(1.0)
        assert float(rule.integrate(lambda g: g[0, 0])) == pytest.approx(0.0, abs=1e-13)
        assert float(rule.integrate(lambda g: g[0, 0] ** 2)) == pytest.approx(0.25)

    def test_so3_moments(self):
        rule = haar(catalog_group("so3"), 8)
        assert float(rule.integrate(lambda g: g[0, 0])) == pytest.approx(0.0, abs=1e-13)
        assert float(rule.integrate(lambda g: g[0, 0] ** 2)) == pytest.approx(1 / 3)

    def test_invariance(self, rng):
        group = catalog_group("su2")
        rule = haar(group, 6)
        h = group.random(rng)
        assert invariance_residual(rule, lambda g: g[0, 0] * g[1, 0] + g[2, 3] ** 2, h) < 1e-12

    def test_rejections(self):
        with pytest.raises(QuadratureError):
            haar(catalog_group("heis3"), 8)
        with pytest.raises(QuadratureError):
            haar(catalog_group("torus:1"), 0)


class TestKappa:
    def cocycle(self, name, p):
        """delta Psi(mu) for a degree p - 2 RUTH cochain: a closed VB p-cochain."""
        ruth = catalog_ruth(name)
        if p == 2:
            mu = RuthCochain(ruth, 0, lambda gs: np.full(ruth.dim_e, 0.5),
                             lambda gs: np.full(ruth.dim_c, gs[0][1, 0]), "mu")
        else:
            mu = RuthCochain(ruth, 1, lambda gs: np.full(ruth.dim_e, gs[0][1, 0]),
                             lambda gs: np.full(ruth.dim_c, gs[0][1, 0] * (gs[1][0, 0] - 1)), "mu")
        return ruth, simplicial_delta(psi(mu))

    @pytest.mark.parametrize("name,p", [("torus1-rep", 2), ("torus1-gauge", 2), ("torus1-gauge", 3)])
    def test_homotopy_identity(self, name, p, rng):
        ruth, phi = self.cocycle(name, p)
        rule = haar(ruth.group, 16)
        gap = simplicial_delta(kappa(phi, rule)) - phi * (-1) ** p
        assert sampled_max(gap, ruth.groupoid, p, rng, samples=4) < 1e-12

    def test_splitting_independence(self, rng):
        ruth, phi = self.cocycle("torus1-gauge", 2)
        rule = haar(ruth.group, 16)
        tilted = gauge_splitting(ruth.groupoid, lambda h: np.asarray(h, dtype=object) - np.eye(2))
        gap = kappa(phi, rule) - kappa(phi, rule, tilted)
        assert sampled_max(gap, ruth.groupoid, 1, rng, samples=4) < 1e-12

    def test_default_splitting_is_block(self, rng):
        ruth, phi = self.cocycle("torus1-gauge", 3)
        rule = haar(ruth.group, 8)
        gap = kappa(phi, rule) - kappa(phi, rule, block_splitting(ruth.groupoid))
        assert sampled_max(gap, ruth.groupoid, 2, rng, samples=4) == 0

    def test_degree_guard(self):
        ruth, phi = self.cocycle("torus1-gauge", 2)
        with pytest.raises(DimensionError):
            kappa(psi(RuthCochain(ruth, -1, None, lambda gs: [0, 0], "c")), haar(ruth.group, 4))


class TestTangent:
    @pytest.mark.parametrize("group,q", [("torus:1", 1), ("su2", 2)])
    def test_axioms_and_lifts(self, group, q, rng):
        g = catalog_group(group)
        rep = character_rep(g, [1]) if group.startswith("torus") else adjoint_rep(g)
        tg = tangent_group(rep, q)
        assert tg.check_axioms(rng, samples=4) < 1e-10
        assert lift_residual(tg, g.algebra.basis_vector(0), rng, samples=4) < 1e-10

    def test_copy_limit(self):
        with pytest.raises(DimensionError):
            tangent_group(character_rep(catalog_group("torus:1"), [1]), 3)
