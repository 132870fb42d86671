from fractions import Fraction

import numpy as np
import pytest

from groupworld.cochains import Cochain, simplicial_delta
from groupworld.groupoids import lie_group
from groupworld.groups import catalog_group, character_rep, trivial_rep
from groupworld.vb import VBArrow, is_vb_cochain
from liealgebra.algebra import catalog_algebra
from liealgebra.chevalley import ce_differential, cohomology_dims
from liealgebra.representation import adjoint, trivial
from ruth.algebra_side import (
    GradedCochain,
    OmegaElement,
    Ruth2TermAlg,
    graded_wedge,
    omega_wedge,
    random_element,
    ruth_cohomology_dims,
    ruth_differential_alg,
    ruth_differential_graded,
    ruth_ev,
    ruth_ev_inverse,
)
from ruth.catalog import catalog_ruth
from ruth.group_side import (
    Ruth2TermGrp,
    RuthCochain,
    differentiate,
    psi,
    ruth_differential_grp,
    scalar_group_cochain,
    star,
    star_residual,
    zero_ruth_cochain,
)
from tensorcore.errors import ConfigError, DimensionError, NormalizationError, StructureError
from tensorcore.tensors import AltSymTensor
from vanest.rep import ve_rep, ve_rep_agreement

SU2 = catalog_algebra("su2")


def adjoint_cone(curvature=None):
    """E = C = adjoint with d = id: the mapping cone of the identity."""
    ad = adjoint(SU2)
    return Ruth2TermAlg(SU2, 3, 3, np.eye(3, dtype=int), ad.rho, ad.rho, curvature, "cone")


def random_curvature(rng, n, dim_c, dim_e):
    return AltSymTensor.from_function(
        n, 2, 0, dim_c * dim_e, lambda alt, sym: [Fraction(int(x)) for x in rng.integers(-2, 3, dim_c * dim_e)])


def torus1_mu(ruth, p):
    if p == 0:
        return RuthCochain(ruth, 0, lambda gs: [0.3, -0.7],
                           lambda gs: [gs[0][1, 0], 2 * (gs[0][0, 0] - 1)], "mu0")
    return RuthCochain(ruth, 1, lambda gs: [gs[0][1, 0], 0.5 * gs[0][1, 0] + (gs[0][0, 0] - 1)],
                       lambda gs: [gs[0][1, 0] * gs[1][1, 0], (gs[0][0, 0] - 1) * gs[1][1, 0]], "mu1")


def torus2_mu(ruth):
    return RuthCochain(ruth, 0, lambda gs: [1.0, -0.4],
                       lambda gs: [gs[0][1, 0] + gs[0][3, 2], gs[0][3, 2] * gs[0][1, 0]], "nu0")


def su2_mu(ruth):
    return RuthCochain(ruth, 0, lambda gs: [0.2, 0.0, -0.5],
                       lambda gs: [gs[0][1, 0], gs[0][2, 0] - gs[0][3, 0], gs[0][0, 0] - 1], "su2mu")


def sample_gap(a: RuthCochain, b: RuthCochain, rng, samples=6) -> float:
    group = a.ruth.group
    worst = 0.0
    for _ in range(samples):
        if a.p >= 0:
            gs = [group.random(rng) for _ in range(a.p)]
            worst = max(worst, float(np.max(np.abs(np.asarray(a.mu_e(gs) - b.mu_e(gs), dtype=float)),
                                            initial=0.0)))
        gs = [group.random(rng) for _ in range(a.p + 1)]
        worst = max(worst, float(np.max(np.abs(np.asarray(a.mu_c(gs) - b.mu_c(gs), dtype=float)),
                                        initial=0.0)))
    return worst


class TestAlgebraSide:
    def test_decoupled_case_squares_to_zero(self):
        ad = adjoint(SU2)
        s = Ruth2TermAlg(SU2, 3, 3, np.zeros((3, 3), dtype=int), ad.rho, ad.rho)
        assert s.check() == 0
        omega = random_element(s, 0, np.random.default_rng(0))
        d = ruth_differential_alg(omega, s)
        assert d.omega_e.distance(ce_differential(omega.omega_e, s.nabla_e)) == 0
        assert d.omega_c.distance(-ce_differential(omega.omega_c, s.nabla_c)) == 0

    def test_degree_minus_one(self):
        s = adjoint_cone()
        c = AltSymTensor(3, 0, 0, 3, coeffs={((), ()): [1, 2, 3]})
        d = ruth_differential_alg(OmegaElement(-1, None, c), s)
        assert d.p == 0
        assert list(d.omega_e.get(())) == [1, 2, 3]

    def test_component_formula_matches_graded_model(self):
        rng = np.random.default_rng(1)
        for curvature in (None, random_curvature(rng, 3, 3, 3)):
            s = adjoint_cone(curvature)
            for p in range(-1, 3):
                omega = random_element(s, p, rng)
                assert ruth_differential_graded(omega, s).distance(ruth_differential_alg(omega, s)) == 0

    def test_random_square_is_zero(self):
        s = adjoint_cone()
        rng = np.random.default_rng(2)
        for p in range(-1, 3):
            omega = random_element(s, p, rng)
            assert ruth_differential_alg(ruth_differential_alg(omega, s), s).max_abs() == 0

    def test_inconsistent_curvature_is_rejected(self):
        s = adjoint_cone(random_curvature(np.random.default_rng(3), 3, 3, 3))
        with pytest.raises(StructureError):
            s.check()

    def test_intertwining(self):
        assert adjoint_cone().intertwining_residual() == 0

    def test_ev_round_trip_and_bookkeeping(self):
        s = adjoint_cone()
        rng = np.random.default_rng(4)
        omega = random_element(s, 1, rng)
        assert ruth_ev(ruth_ev_inverse(omega)).distance(omega) == 0
        only_core = GradedCochain(2, AltSymTensor(3, 2, 0, 3), omega.omega_e)
        assert ruth_ev(only_core).omega_c.is_zero()
        assert ruth_ev(only_core).omega_e.distance(-omega.omega_e) == 0

    def test_ev_reads_values_on_sections(self):
        rng = np.random.default_rng(12)

        def draw(p):
            return AltSymTensor.from_function(3, p, 0, 3, lambda a, b: [Fraction(int(x)) for x in rng.integers(-3, 4, 3)])

        alpha = GradedCochain(2, draw(2), draw(1))
        omega = ruth_ev(alpha)
        u0, u1, xi, eta = (np.array([Fraction(int(x)) for x in rng.integers(-4, 5, 3)], dtype=object) for _ in range(4))
        zero = np.zeros(3, dtype=object)
        chi0, chi1 = (u0, zero), (u1, zero)
        assert alpha.value([chi0, chi1], xi) == sum(xi * omega.omega_c.evaluate([u0, u1]))
        assert alpha.value([(zero, eta), chi1], zero) == sum(eta * omega.omega_e.evaluate([u1]))
        assert alpha.value([(zero, eta), chi1], zero) == -sum(eta * alpha.core.evaluate([u1]))

    def test_module_compatibility(self):
        s = adjoint_cone()
        rng = np.random.default_rng(5)
        beta = AltSymTensor.from_function(3, 1, 0, 1, lambda a, b: [Fraction(int(rng.integers(-3, 4)))])
        for p in (0, 1):
            alpha = ruth_ev_inverse(random_element(s, p, rng))
            lhs = ruth_ev(graded_wedge(alpha, beta))
            rhs = omega_wedge(ruth_ev(alpha), beta)
            assert lhs.distance(rhs) == 0

    def test_leibniz(self):
        rng = np.random.default_rng(6)
        s = adjoint_cone(random_curvature(rng, 3, 3, 3))
        scalar = trivial(SU2)
        beta = AltSymTensor.from_function(3, 1, 0, 1, lambda a, b: [Fraction(int(rng.integers(-3, 4)))])
        for p in (0, 1):
            omega = random_element(s, p, rng)
            lhs = ruth_differential_alg(omega_wedge(omega, beta), s)
            dbeta = ce_differential(beta, scalar)
            expected = omega_wedge(ruth_differential_alg(omega, s), beta)
            extra = omega_wedge(omega, dbeta)
            expected = expected + extra if p % 2 == 0 else expected - extra
            assert lhs.distance(expected) == 0

    def test_ordinary_representation_cohomology(self):
        rep = adjoint(catalog_algebra("heis3"))
        s = Ruth2TermAlg.from_representation(rep)
        dims = ruth_cohomology_dims(s)
        assert dims[:-1] == cohomology_dims(rep.algebra, rep)
        assert dims[-1] == 0

    def test_cone_of_identity_is_acyclic(self):
        assert ruth_cohomology_dims(adjoint_cone()) == [0, 0, 0, 0, 0]

    def test_dimension_errors(self):
        s = adjoint_cone()
        with pytest.raises(DimensionError):
            OmegaElement(0, None, AltSymTensor(3, 1, 0, 3))
        with pytest.raises(DimensionError):
            ruth_differential_alg(OmegaElement(-1, None, AltSymTensor(3, 0, 0, 2)), s)


class TestGroupSide:
    def test_catalog_axioms(self):
        rng = np.random.default_rng(10)
        for name in ("torus1-rep", "torus1-gauge", "torus2-gauge", "su2-gauge"):
            report = catalog_ruth(name).check(rng, samples=4)
            assert report["associativity"] < 1e-10
        with pytest.raises(ConfigError):
            catalog_ruth("nope")

    def test_psi_degree_zero(self):
        ruth = catalog_ruth("torus1-gauge")
        mu = torus1_mu(ruth, 0)
        g = ruth.group.random(np.random.default_rng(11))
        xi, eta = np.array([0.4, -1.1]), np.array([2.0, 0.5])
        arrow = ruth.groupoid.point([VBArrow(xi.astype(object), g, eta.astype(object))])
        expected = eta @ np.array([0.3, -0.7]) + xi @ np.array([g[1, 0], 2 * (g[0, 0] - 1)])
        assert float(psi(mu)(arrow)[0]) == pytest.approx(expected)

    def test_psi_of_zero(self):
        ruth = catalog_ruth("torus1-gauge")
        phi = psi(zero_ruth_cochain(ruth, 1))
        pt = ruth.groupoid.random_point(np.random.default_rng(12), 2)
        assert float(phi(pt)[0]) == 0

    def test_psi_lands_in_vb_cochains(self):
        ruth = catalog_ruth("torus1-gauge")
        report = is_vb_cochain(psi(torus1_mu(ruth, 1)), np.random.default_rng(13), samples=8, tol=1e-10)
        assert report["condition1"] and report["condition2"]

    def test_normalization_is_checked(self):
        ruth = catalog_ruth("torus1-gauge")
        bad = RuthCochain(ruth, 0, lambda gs: [0, 0], lambda gs: [1.0, gs[0][0, 0]], "bad")
        with pytest.raises(NormalizationError):
            psi(bad, rng=np.random.default_rng(14))

    def test_ordinary_representation_reduces_to_twisted_delta(self):
        ruth = catalog_ruth("torus1-rep")
        mu = RuthCochain(ruth, 1, lambda gs: [], lambda gs: [gs[0][1, 0] * gs[1][1, 0], gs[0][1, 0] * (gs[1][0, 0] - 1)], "c")
        d = ruth_differential_grp(mu)
        lg = lie_group(ruth.group)
        component = Cochain(lg, 2, lambda pt: mu.mu_c(a.g for a in pt.arrows), 2, ruth.delta_c_rep(), "c")
        delta = simplicial_delta(component)
        rng = np.random.default_rng(15)
        for _ in range(4):
            pt = lg.random_point(rng, 3)
            gs = [a.g for a in pt.arrows]
            assert np.allclose(np.asarray(d.mu_c(gs), dtype=float), -np.asarray(delta(pt), dtype=float))

    def test_degree_zero_formula(self):
        ruth = catalog_ruth("torus1-gauge")
        mu = torus1_mu(ruth, 0)
        d = ruth_differential_grp(mu, rng=np.random.default_rng(16))
        rng = np.random.default_rng(17)
        for _ in range(4):
            g1, g2 = ruth.group.random(rng), ruth.group.random(rng)
            mu_e = np.array([0.3, -0.7])
            expected_e = ruth.delta_e(g1) @ mu_e - mu_e + ruth.partial @ mu.mu_c([g1])
            assert np.allclose(np.asarray(d.mu_e([g1]), dtype=float), np.asarray(expected_e, dtype=float))
            delta_c = ruth.delta_c(g1) @ mu.mu_c([g2]) - mu.mu_c([g1 @ g2]) + mu.mu_c([g1])
            expected_c = -delta_c + ruth.omega(g1, g2) @ mu_e
            assert np.allclose(np.asarray(d.mu_c([g1, g2]), dtype=float), np.asarray(expected_c, dtype=float))

    def test_differential_squares_to_zero(self):
        rng = np.random.default_rng(18)
        for name, mu in (("torus1-gauge", lambda r: torus1_mu(r, 0)), ("torus1-gauge", lambda r: torus1_mu(r, 1)),
                         ("torus2-gauge", torus2_mu)):
            ruth = catalog_ruth(name)
            dd = ruth_differential_grp(ruth_differential_grp(mu(ruth)))
            assert sample_gap(dd, zero_ruth_cochain(ruth, dd.p), rng, samples=3) < 1e-9

    def test_star_and_leibniz(self):
        ruth = catalog_ruth("torus1-gauge")
        rng = np.random.default_rng(19)
        mu = torus1_mu(ruth, 0)
        f = scalar_group_cochain(ruth.group, 1, lambda g: g[1, 0] + 0.5 * (g[0, 0] - 1), "f")
        assert star_residual(mu, f, rng, samples=6) < 1e-12
        lhs = ruth_differential_grp(star(mu, f))
        rhs = star(ruth_differential_grp(mu), f) + star(mu, simplicial_delta(f))
        assert sample_gap(lhs, rhs, rng, samples=4) < 1e-9


class TestDifferentiation:
    def test_derived_data_is_consistent(self):
        for name in ("torus1-gauge", "torus2-gauge", "su2-gauge"):
            s = differentiate(catalog_ruth(name))
            assert s.check() < 1e-9

    def test_gauge_produces_curvature(self):
        s = differentiate(catalog_ruth("torus2-gauge"))
        assert s.curvature.max_abs() > 1e-3

    def test_trivial_data(self):
        group = catalog_group("torus:1")
        ruth = Ruth2TermGrp.from_representations(trivial_rep(group, 2), character_rep(group, [1]))
        s = differentiate(ruth)
        assert s.curvature.is_zero()
        assert s.intertwining_residual() == 0


class TestVanEstRep:
    @pytest.mark.parametrize("name,p", [("torus1-gauge", 0), ("torus1-gauge", 1), ("su2-gauge", 0)])
    def test_two_paths_agree(self, name, p):
        ruth = catalog_ruth(name)
        mu = su2_mu(ruth) if name.startswith("su2") else torus1_mu(ruth, p)
        assert ve_rep_agreement(mu) < 1e-9

    @pytest.mark.parametrize("name,p", [("torus1-gauge", 0), ("torus1-gauge", 1), ("torus2-gauge", 0)])
    def test_chain_map(self, name, p):
        ruth = catalog_ruth(name)
        mu = torus2_mu(ruth) if name == "torus2-gauge" else torus1_mu(ruth, p)
        s = differentiate(ruth)
        lhs = ve_rep(ruth_differential_grp(mu))
        rhs = ruth_differential_alg(ve_rep(mu), s)
        assert lhs.distance(rhs) < 1e-9
