from fractions import Fraction

import numpy as np
import pytest

from groupworld.groups import GroupRep, catalog_group, trivial_rep
from liealgebra.algebra import catalog_algebra
from liealgebra.chevalley import ce_differential
from liealgebra.representation import adjoint, coadjoint, symmetric_power, tensor, trivial
from tensorcore.errors import DimensionError, StructureError, TruncationError
from tensorcore.tensors import AltSymTensor, basis_form
from weil.complex import (
    LinearActionBase,
    WeilElement,
    evaluate_on_sections,
    from_ce_tensor,
    module_action,
    spencer_check,
    to_ce_tensor,
    weil_differential,
    weil_wedge,
)
from weil.polyform import PolyForm, random_form


@pytest.fixture
def rng():
    return np.random.default_rng(11)


def matrix_base(name, rep=None):
    """A catalog algebra acting on R^n through its own matrix basis."""
    algebra = catalog_algebra(name)
    rep = rep(algebra) if rep else trivial(algebra)
    return LinearActionBase(algebra, [-m for m in algebra.matrices], rep, f"{name}-defining")


def rotation_base():
    """T^2 acting on R^2 by the rotation through the sum of both angles."""
    group = catalog_group("torus:2")
    phi = GroupRep(group, 2, lambda g: g[0:2, 0:2] @ g[2:4, 2:4], "rot")
    return LinearActionBase.from_group_rep(phi, trivial_rep(group))


def line_base():
    """R acting on R^1 by u x d/dx."""
    algebra = catalog_algebra("abelian:1")
    return LinearActionBase(algebra, [np.array([[Fraction(1)]], dtype=object)], trivial(algebra), "line")


def monomial(n, J, exps, value=1, value_dim=1):
    return PolyForm(n, len(J), value_dim, {(J, exps): [value] * value_dim})


class TestPolyForm:
    def test_d_squares_to_zero(self, rng):
        for r in range(3):
            f = random_form(2, r, 2, 3, rng)
            assert f.d().d().is_zero()

    def test_cartan_identities(self, rng):
        a = np.array([[Fraction(1), Fraction(2)], [Fraction(0), Fraction(-1)]], dtype=object)
        for r in (0, 1, 2):
            f = random_form(2, r, 1, 2, rng)
            assert f.lie(a).d() == f.d().lie(a)
            if r >= 2:
                assert f.interior(a).interior(a).is_zero()

    def test_linear_field_bracket(self, rng):
        a = np.array([[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]], dtype=object)
        b = np.array([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]], dtype=object)
        f = random_form(2, 1, 1, 2, rng)
        lhs = f.lie(b).lie(a) - f.lie(a).lie(b)
        assert lhs == f.lie(b @ a - a @ b)

    def test_from_function(self):
        def fn(x, vectors):
            (v,) = vectors
            return [x[0] ** 2 * x[1] * v[0] + 3 * v[1]]

        f = PolyForm.from_function(2, 1, 1, fn)
        expected = monomial(2, (0,), (2, 1)) + monomial(2, (1,), (0, 0), 3)
        assert f == expected
        assert f.degree == 3

    def test_truncation_is_reported(self):
        with pytest.raises(TruncationError):
            PolyForm.from_function(1, 0, 1, lambda x, vs: [x[0] ** 7])
        with pytest.raises(TruncationError):
            monomial(1, (0,), (6,)).interior(np.array([[1]], dtype=object))

    def test_evaluate_is_alternating(self):
        f = monomial(2, (0, 1), (1, 0))
        e0, e1 = [1, 0], [0, 1]
        assert f.evaluate([2, 3], [e0, e1])[0] == 2
        assert f.evaluate([2, 3], [e1, e0])[0] == -2

    def test_wedge_graded_commutativity(self, rng):
        a = random_form(2, 1, 1, 2, rng)
        b = random_form(2, 1, 1, 2, rng)
        assert a.wedge(b) == b.wedge(a) * -1

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            monomial(2, (0,), (0, 0)) + monomial(2, (0, 1), (0, 0))
        with pytest.raises(DimensionError):
            PolyForm.constant(1, [1]).interior(np.array([[1]], dtype=object))


class TestLinearActionBase:
    def test_rotation_base_is_exact(self):
        base = rotation_base()
        assert base.n_M == 2 and base.exact
        base.check()
        rot = np.array([[0, 1], [-1, 0]], dtype=object)
        assert all(np.array_equal(a, rot) for a in base.anchor)

    @pytest.mark.parametrize("name", ["sl2", "so3", "heis3"])
    def test_matrix_bases(self, name):
        base = matrix_base(name)
        assert base.anchor_residual() == 0
        base.check()

    def test_wrong_anchor_sign(self):
        algebra = catalog_algebra("so3")
        base = LinearActionBase(algebra, algebra.matrices, trivial(algebra))
        with pytest.raises(StructureError):
            base.check()

    def test_point(self):
        base = LinearActionBase.point(catalog_algebra("su2"), adjoint(catalog_algebra("su2")))
        assert base.n_M == 0
        base.check()

    def test_dimension_guards(self):
        algebra = catalog_algebra("sl2")
        with pytest.raises(DimensionError):
            LinearActionBase(algebra, algebra.matrices[:2], trivial(algebra))
        with pytest.raises(DimensionError):
            LinearActionBase(algebra, [np.eye(4, dtype=object)] * 3, trivial(algebra))


class TestWeilDifferential:
    def test_line_example(self):
        base = line_base()
        c = WeilElement(base, 0, 1, {((), ()): monomial(1, (0,), (1,))})
        image = weil_differential(c)
        assert image.get((0,), ()) == monomial(1, (0,), (1,), 2)
        assert image.get((), (0,)) == monomial(1, (), (2,))

    def test_degree_zero(self, rng):
        base = matrix_base("sl2", adjoint)
        b = WeilElement.random(base, 0, 2, rng)
        image = weil_differential(b)
        form = b.get((), ())
        for i in range(3):
            assert image.get((i,), ()) == base.act(i, form)
            assert image.get((), (i,)) == form.interior(base.anchor[i])

    @pytest.mark.parametrize("make,p,q", [
        (lambda: LinearActionBase.point(catalog_algebra("su2"), adjoint(catalog_algebra("su2"))), 2, 1),
        (rotation_base, 1, 2),
        (lambda: matrix_base("sl2", adjoint), 1, 1),
        (lambda: matrix_base("sl2"), 2, 2),
        (lambda: matrix_base("heis3"), 1, 1),
        (lambda: matrix_base("so3"), 0, 2),
    ])
    def test_squares_to_zero(self, make, p, q, rng):
        base = make()
        c = WeilElement.random(base, p, q, rng, degree=1)
        assert weil_differential(weil_differential(c)).is_zero()

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
    def test_point_reduces_to_chevalley_eilenberg(self, p, q, rng):
        algebra = catalog_algebra("su2")
        rep = adjoint(algebra)
        base = LinearActionBase.point(algebra, rep)
        c = WeilElement.random(base, p, q, rng)
        coeffs = tensor(symmetric_power(coadjoint(algebra), q), rep)
        expected = ce_differential(to_ce_tensor(c), coeffs) * (-1) ** q
        assert (to_ce_tensor(weil_differential(c)) - expected).is_zero()

    def test_ce_lift_inverts_reduction(self, rng):
        algebra = catalog_algebra("sl2")
        base = LinearActionBase.point(algebra, trivial(algebra, 2))
        c = WeilElement.random(base, 2, 1, rng)
        assert (from_ce_tensor(base, to_ce_tensor(c), 1) - c).is_zero()

    def test_point_below_diagonal(self):
        base = LinearActionBase.point(catalog_algebra("su2"), trivial(catalog_algebra("su2")))
        with pytest.raises(DimensionError):
            to_ce_tensor(WeilElement(base, 0, 1))

    def test_overflow_is_reported(self):
        base = line_base()
        c = WeilElement(base, 0, 1, {((), ()): monomial(1, (0,), (6,))})
        with pytest.raises(TruncationError):
            weil_differential(c)

    def test_components_are_canonical(self, rng):
        base = matrix_base("sl2")
        c = WeilElement.random(base, 2, 1, rng)
        assert c.get((1, 0), ()) == c.get((0, 1), ()) * -1
        assert c.get((0, 0), ()).is_zero()
        with pytest.raises(DimensionError):
            c.get((0,), (0, 1))


class TestModuleAction:
    def test_representation_property(self, rng):
        base = matrix_base("sl2", adjoint)
        family = {(0,): random_form(2, 1, 3, 1, rng), (1,): random_form(2, 1, 3, 1, rng),
                  (2,): random_form(2, 1, 3, 1, rng)}
        c = base.algebra.c
        for i in range(3):
            for j in range(i + 1, 3):
                lhs = module_action(base, i, module_action(base, j, family))
                rhs = module_action(base, j, module_action(base, i, family))
                bracket = {key: base.zero(1) for key in family}
                for l in range(3):
                    if c[i, j, l] != 0:
                        for key, form in module_action(base, l, family).items():
                            bracket[key] = bracket[key] + form * c[i, j, l]
                for key in family:
                    assert lhs[key] - rhs[key] == bracket[key]


class TestWedge:
    def test_unit(self, rng):
        base = rotation_base()
        c = WeilElement.random(base, 1, 1, rng)
        one = AltSymTensor(2, 0, coeffs={((), ()): [1]})
        assert (weil_wedge(c, one) - c).is_zero()

    def test_unshuffle_sum(self, rng):
        base = matrix_base("so3")
        c = WeilElement.random(base, 1, 1, rng)
        beta = basis_form(3, (0,))
        product = weil_wedge(c, beta)
        # (c ^ e^0)_0(u_1, u_2) = c_0(u_1) e^0(u_2) - c_0(u_2) e^0(u_1)
        assert product.get((0, 1), ()) == -c.get((1,), ())
        assert product.get((1, 2), ()).is_zero()
        for v in range(3):
            assert product.get((0,), (v,)) == c.get((), (v,))

    @pytest.mark.parametrize("p,q,pp", [(1, 1, 1), (0, 2, 1), (1, 2, 2), (2, 1, 1)])
    def test_leibniz(self, p, q, pp, rng):
        base = matrix_base("sl2")
        c = WeilElement.random(base, p, q, rng, degree=1)
        beta = AltSymTensor.from_function(3, pp, 0, 1, lambda a, s: [Fraction(int(rng.integers(-2, 3)))])
        d_beta = ce_differential(beta, trivial(base.algebra))
        lhs = weil_differential(weil_wedge(c, beta))
        rhs = weil_wedge(weil_differential(c), beta) + weil_wedge(c, d_beta) * (-1) ** p
        assert (lhs - rhs).is_zero()


class TestSpencer:
    def test_exact_elements_are_spencer(self, rng):
        base = matrix_base("sl2")
        image = weil_differential(WeilElement.random(base, 0, 2, rng))
        c0 = {i: image.get((i,), ()) for i in range(3)}
        c1 = {j: image.get((), (j,)) for j in range(3)}
        report = spencer_check(c0, c1, base)
        assert report["spencer"]
        assert report["residuals"] == {0: 0.0, 1: 0.0, 2: 0.0}

    def test_component_formulas(self, rng):
        base = matrix_base("sl2")
        c0 = {i: random_form(2, 2, 1, 2, rng) for i in range(3)}
        c1 = {j: random_form(2, 1, 1, 2, rng) for j in range(3)}
        report = spencer_check(c0, c1, base)
        image = report["image"]
        assert not report["spencer"]
        a, c = base.anchor, base.algebra.c
        for u in range(3):
            for v in range(3):
                bracket = base.zero(1)
                for l in range(3):
                    if c[u, v, l] != 0:
                        bracket = bracket + c1[l] * c[u, v, l]
                expected = c0[u].interior(a[v]) - base.act(u, c1[v]) + bracket
                assert image.get((u,), (v,)) == expected
        for v1 in range(3):
            for v2 in range(3):
                expected = -c1[v2].interior(a[v1]) - c1[v1].interior(a[v2])
                assert image.get((), (v1, v2)) == expected
        # pairing each anchor with its own slot's c_1 is not what d_W produces off the diagonal
        repeated = -c1[1].interior(a[0]) - c1[1].interior(a[1])
        assert image.get((), (0, 1)) != repeated

    def test_degree_zero_forms(self):
        base = line_base()
        report = spencer_check({0: PolyForm.constant(1, [1])}, {}, base)
        assert set(report["residuals"]) == {0}
        with pytest.raises(DimensionError):
            spencer_check({0: PolyForm.constant(1, [1])}, {0: PolyForm.constant(1, [1])}, base)


class TestSections:
    def test_constant_sections(self, rng):
        base = rotation_base()
        c = WeilElement.random(base, 1, 1, rng)
        assert evaluate_on_sections(c, [[1, 0]], []) == c.get((0,), ())
        assert evaluate_on_sections(c, [[2, -1]], []) == c.get((0,), ()) * 2 - c.get((1,), ())

    def test_v_slots_are_function_linear(self, rng):
        base = rotation_base()
        c = WeilElement.random(base, 1, 1, rng)
        x0 = PolyForm.coordinate(2, 0)
        assert evaluate_on_sections(c, [], [[x0, 0]]) == x0.wedge(c.get((), (0,)))

    @pytest.mark.parametrize("make", [rotation_base, lambda: matrix_base("sl2", adjoint)])
    def test_leibniz_anomaly_matches_lie_derivative(self, make, rng):
        base = make()
        n = base.algebra.n
        b = WeilElement.random(base, 0, 1, rng, degree=1)
        form = b.get((), ())
        image = weil_differential(b)
        f = PolyForm.coordinate(2, 0) + PolyForm.coordinate(2, 1) * 3
        for a in range(n):
            section = [f if i == a else 0 for i in range(n)]
            field = base.anchor[a]
            # L_{f X} b + f N b, computed directly
            direct = f.wedge(form.interior(field)).d() + f.wedge(form.d().interior(field)) \
                + f.wedge(form.apply(base.rep.rho[a]))
            assert evaluate_on_sections(image, [section], []) == direct

    def test_section_shape(self, rng):
        base = rotation_base()
        c = WeilElement.random(base, 1, 1, rng)
        with pytest.raises(DimensionError):
            evaluate_on_sections(c, [[1, 0, 0]], [])
        with pytest.raises(DimensionError):
            evaluate_on_sections(c, [[1, 0]], [[1, 0]])
