"""Tests for bivector construction and the symbolic Poisson checks."""

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from poisson4.expr import Expr, Point4, parse
from poisson4.poisson import (
    Bivector,
    CasimirPair,
    ConformalFactorWarning,
    DroppedConstantWarning,
    bivector_from_json_dict,
    bivector_matrix_at,
    bivector_to_json_dict,
    casimir_check,
    flaschka_ratiu,
    gradient,
    hamiltonian_field,
    is_poisson,
    jacobiator,
    linear_part,
    rank_at,
)

CUSP = CasimirPair(parse("t"), parse("x^3 - 3*x*t + y^2 - z^2"))
WRINKLE = CasimirPair(
    parse("t^2 - x^2 + y^2 - z^2 + s*t"), parse("2*t*x + 2*y*z")
)


def non_poisson_example() -> Bivector:
    """dx^dy + x dz^dt: the standard rank-4 failure of the Jacobi identity."""
    return Bivector.from_upper({(0, 1): Expr.one(), (2, 3): parse("x")})


class TestGradient:
    def test_projection_casimir(self):
        assert tuple(map(str, gradient(parse("t")))) == ("0", "0", "0", "1")

    def test_constant(self):
        assert all(e.is_zero for e in gradient(parse("5")))

    def test_wrinkle_first_casimir(self):
        g = gradient(parse("t^2 - x^2 + y^2 - z^2 + s*t"))
        assert tuple(map(str, g)) == ("-2*x", "2*y", "-2*z", "2*t + s")


class TestFlaschkaRatiu:
    def test_cusp_matrix(self):
        b = flaschka_ratiu(CUSP)
        assert b.components[0][1] == parse("2*z")
        assert b.components[0][2] == parse("2*y")
        assert b.components[1][2] == parse("3*t - 3*x^2")
        # fourth row and column vanish: t is a Casimir coordinate
        assert all(b.components[i][3].is_zero for i in range(4))
        assert all(b.components[3][j].is_zero for j in range(4))

    def test_coordinate_pair_gives_unit_dz_dt(self):
        b = flaschka_ratiu(CasimirPair(parse("x"), parse("y")))
        assert b.components[2][3] == Expr.one()
        others = [
            (i, j)
            for (i, j) in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))
        ]
        assert all(b.components[i][j].is_zero for i, j in others)

    def test_wrinkle_matrix(self):
        b = flaschka_ratiu(WRINKLE)
        assert b.components[0][3] == parse("4*y^2 + 4*z^2")
        assert b.components[1][2] == parse("-2*s*t - 4*t^2 - 4*x^2")
        assert b.components[2][3] == parse("-4*t*y - 4*x*z")

    def test_zero_k_rejected(self):
        with pytest.raises(ValueError):
            flaschka_ratiu(CUSP, k=Expr.zero())

    def test_vanishing_k_warns(self):
        with pytest.warns(ConformalFactorWarning):
            flaschka_ratiu(CUSP, k=parse("x"))

    def test_positive_k_does_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            flaschka_ratiu(CUSP, k=parse("1 + x^2 + y^2 + z^2 + t^2"))

    def test_numeric_symbolic_agreement(self):
        # Independent route: assemble the four columns numerically and take
        # numpy's determinant.
        rng = np.random.default_rng(42)
        for _ in range(25):
            c1, c2 = _random_pair(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2))
            p = Point4(*rng.uniform(-2, 2, size=4), s=rng.uniform(-1, 1))
            g1 = [c1.differentiate(v).evaluate(p) for v in _vars()]
            g2 = [c2.differentiate(v).evaluate(p) for v in _vars()]
            for i in range(4):
                for j in range(i + 1, 4):
                    cols = np.zeros((4, 4))
                    cols[i, 0] = 1.0
                    cols[j, 1] = 1.0
                    cols[:, 2] = g1
                    cols[:, 3] = g2
                    want = np.linalg.det(cols)
                    got = b.components[i][j].evaluate(p)
                    assert math.isclose(got, want, rel_tol=1e-10, abs_tol=1e-9)


class TestJacobiator:
    def test_cusp_is_poisson(self):
        assert all(e.is_zero for e in jacobiator(flaschka_ratiu(CUSP)).values())

    def test_constant_bivector(self):
        b = Bivector.from_upper({(0, 1): Expr.one()})
        assert all(e.is_zero for e in jacobiator(b).values())

    def test_hand_expanded_failure(self):
        # Only pi^{yx} d_x pi^{zt} = (-1)(1) survives in J^{yzt}.
        j = jacobiator(non_poisson_example())
        assert j[(1, 2, 3)] == Expr.constant(-1)
        assert j[(0, 1, 2)].is_zero
        assert j[(0, 1, 3)].is_zero
        assert j[(0, 2, 3)].is_zero

    def test_verdict_with_witness(self):
        verdict = is_poisson(non_poisson_example())
        assert not verdict
        assert verdict.witness_triple == ("y", "z", "t")
        assert verdict.witness == Expr.constant(-1)

    def test_scaled_birth_is_poisson(self):
        birth = CasimirPair(parse("t"), parse("x^3 - 3*x*(t^2 - s) + y^2 - z^2"))
        k = parse("1 + x^2 + y^2 + z^2 + t^2")
        assert is_poisson(flaschka_ratiu(birth, k=k))

    def test_flip_is_poisson(self):
        flip = CasimirPair(parse("t"), parse("x^4 - x^2*s + x*t + y^2 - z^2"))
        assert is_poisson(flaschka_ratiu(flip))


class TestCasimirCheck:
    def test_both_casimirs_annihilated(self):
        b = flaschka_ratiu(CUSP)
        assert casimir_check(b, CUSP.c1)
        assert casimir_check(b, CUSP.c2)

    def test_non_casimir(self):
        assert not casimir_check(flaschka_ratiu(CUSP), parse("x"))

    def test_annihilation_for_random_pairs(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            c1, c2 = _random_pair(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2))
            assert casimir_check(b, c1)
            assert casimir_check(b, c2)
            # and any polynomial in the Casimirs is again a Casimir
            assert casimir_check(b, c1 * c2 + c2)


class TestRank:
    def test_cusp_critical_point(self):
        assert rank_at(flaschka_ratiu(CUSP), Point4(1, 0, 0, 1)) == 0

    def test_cusp_regular_point(self):
        assert rank_at(flaschka_ratiu(CUSP), Point4(0, 1, 0, 0)) == 2

    def test_wrinkle_regular_point(self):
        b = flaschka_ratiu(WRINKLE)
        assert rank_at(b, Point4(1, 1, 0, 0, s=0.0)) == 2

    def test_never_rank_four(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            c1, c2 = _random_pair(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2))
            p = Point4(*rng.uniform(-2, 2, size=4), s=rng.uniform(-1, 1))
            assert rank_at(b, p) <= 2

    def test_rank_is_conformal_invariant(self):
        rng = np.random.default_rng(17)
        k = parse("1 + x^2 + y^2 + z^2 + t^2")
        plain = flaschka_ratiu(CUSP)
        scaled = flaschka_ratiu(CUSP, k=k)
        for _ in range(50):
            p = Point4(*rng.uniform(-2, 2, size=4))
            assert rank_at(plain, p) == rank_at(scaled, p)

    def test_degenerate_k_warns(self):
        with pytest.warns(ConformalFactorWarning):
            b = flaschka_ratiu(CUSP, k=parse("x"))
        with pytest.warns(ConformalFactorWarning):
            rank_at(b, Point4(0, 1, 1, 1))


class TestHamiltonianField:
    def test_coordinate_hamiltonian(self):
        x_field = hamiltonian_field(flaschka_ratiu(CUSP), parse("x"))
        assert tuple(map(str, x_field)) == ("0", "-2*z", "-2*y", "0")

    def test_constant_hamiltonian(self):
        field = hamiltonian_field(flaschka_ratiu(CUSP), parse("9/4"))
        assert all(e.is_zero for e in field)

    def test_casimir_hamiltonian_vanishes(self):
        field = hamiltonian_field(flaschka_ratiu(CUSP), CUSP.c2)
        assert all(e.is_zero for e in field)

    def test_field_matches_pointwise_contraction(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            c1, c2 = _random_pair(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2))
            h = _random_polynomial(rng, degree=3)
            field = hamiltonian_field(b, h)
            p = Point4(*rng.uniform(-1.5, 1.5, size=4), s=rng.uniform(-1, 1))
            m = bivector_matrix_at(b, p)
            dh = np.array([h.differentiate(v).evaluate(p) for v in _vars()])
            want = m @ dh
            got = np.array([e.evaluate(p) for e in field])
            assert np.allclose(got, want, rtol=1e-10, atol=1e-9)


class TestLinearPart:
    def test_cusp_structure_constants(self):
        sc = linear_part(flaschka_ratiu(CUSP))
        assert sc.linear[(0, 1)] == parse("2*z")
        assert sc.linear[(0, 2)] == parse("2*y")
        assert sc.linear[(1, 2)] == parse("3*t")
        assert sc.constant(0, 1, "z") == Expr.constant(2)
        assert sc.constant(1, 0, "z") == Expr.constant(-2)
        assert not sc.dropped

    def test_wrinkle_at_zero_parameter(self):
        b = flaschka_ratiu(
            CasimirPair(
                WRINKLE.c1.substitute_s(0), WRINKLE.c2.substitute_s(0)
            )
        )
        assert linear_part(b).is_trivial()

    def test_wrinkle_symbolic_parameter_is_not_trivial(self):
        sc = linear_part(flaschka_ratiu(WRINKLE))
        assert sc.linear[(0, 1)] == parse("-2*s*y")

    def test_birth_drops_constant(self):
        birth = CasimirPair(parse("t"), parse("x^3 - 3*x*(t^2 - s) + y^2 - z^2"))
        with pytest.warns(DroppedConstantWarning):
            sc = linear_part(flaschka_ratiu(birth))
        assert sc.linear[(0, 1)] == parse("2*z")
        assert sc.linear[(0, 2)] == parse("2*y")
        assert sc.linear[(1, 2)].is_zero
        assert sc.dropped[(1, 2)] == parse("-3*s")

    def test_requires_unit_conformal(self):
        b = flaschka_ratiu(CUSP, k=parse("1 + x^2"))
        with pytest.raises(ValueError):
            linear_part(b)


class TestBivectorType:
    def test_antisymmetry_enforced(self):
        rows = [[Expr.zero()] * 4 for _ in range(4)]
        rows[0][1] = parse("x")
        rows[1][0] = parse("x")  # wrong sign
        with pytest.raises(ValueError):
            Bivector(rows)

    def test_json_round_trip(self):
        b = flaschka_ratiu(CUSP, k=parse("1 + t^2"))
        data = bivector_to_json_dict(b)
        assert list(data) == ["coords", "k", "matrix"]
        restored = bivector_from_json_dict(data)
        assert restored.components == b.components
        assert restored.conformal == b.conformal

    def test_antisymmetry_for_random_pairs(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            c1, c2 = _random_pair(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2))
            for i in range(4):
                assert b.components[i][i].is_zero
                for j in range(4):
                    assert b.components[i][j] == -b.components[j][i]

    def test_jacobiator_vanishes_with_even_k(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            c1, c2 = _random_pair(rng)
            k = _random_even_k(rng)
            b = flaschka_ratiu(CasimirPair(c1, c2), k=k)
            assert is_poisson(b)


def _vars():
    from poisson4.expr import VARS

    return VARS


def _random_polynomial(rng, degree=4, max_terms=5) -> Expr:
    terms = {}
    for _ in range(rng.integers(1, max_terms + 1)):
        exps = [0, 0, 0, 0, 0]
        for _ in range(rng.integers(0, degree + 1)):
            exps[rng.integers(0, 5)] += 1
        coeff = Fraction(int(rng.integers(-4, 5)))
        if coeff:
            mono = tuple(exps)
            terms[mono] = terms.get(mono, 0) + coeff
    e = Expr(terms)
    return e if not e.is_zero else Expr.one()


def _random_pair(rng) -> tuple[Expr, Expr]:
    return _random_polynomial(rng), _random_polynomial(rng)


def _random_even_k(rng) -> Expr:
    # 1 + a sum of even monomials: positive on all of R^4, so non-vanishing.
    terms = {(0, 0, 0, 0, 0): Fraction(1)}
    for _ in range(rng.integers(1, 4)):
        exps = [0, 0, 0, 0, 0]
        exps[rng.integers(0, 4)] = 2 * int(rng.integers(1, 3))
        mono = tuple(exps)
        terms[mono] = terms.get(mono, 0) + Fraction(int(rng.integers(1, 4)))
    return Expr(terms)
