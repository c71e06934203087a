from fractions import Fraction

import pytest
import sympy

from curveorbit.errors import ZeroLeadingCoefficient
from curveorbit.orbitdeg import (TruncH, app_assemble, contribution_flex,
                                 contribution_node, contribution_raw,
                                 contribution_star_typeIII,
                                 contribution_type_I, contribution_type_II,
                                 exp_h, predegree_and_degree)

import oracles


def test_trunch_ring_axioms(rng):
    def rand():
        return TruncH({k: Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                       for k in range(9)})

    for _ in range(10):
        a, b, c = rand(), rand(), rand()
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * TruncH.one() == a
        assert a + TruncH({}) == a
        assert a - a == TruncH({})


def test_truncation_drops_high_terms():
    h = TruncH.monomial(5)
    assert (h * h).is_zero()  # H^10 truncates away
    assert (TruncH.monomial(4) * TruncH.monomial(4)).coefficient(8) == 1


def test_exp_h_matches_sympy(rng):
    for n in [1, 2, 7, -3, Fraction(1, 2)]:
        ours = exp_h(n)
        want = oracles.sympy_exp_trunc(sympy.Rational(n))
        for k in range(9):
            assert sympy.Rational(ours.coefficient(k)) == want[k]


def test_antiderivative():
    p = TruncH({0: 1, 1: 2, 7: 7})
    a = p.antiderivative()
    assert a.coefficient(0) == 0
    assert a.coefficient(1) == 1
    assert a.coefficient(2) == 1
    assert a.coefficient(8) == Fraction(7, 8)


def test_two_lines_app_and_degrees():
    for m1, m2 in [(1, 1), (2, 3), (1, 5), (4, 4)]:
        n = m1 + m2
        cs = [contribution_type_I(m1, [m2], n),
              contribution_type_I(m2, [m1], n)]
        app = app_assemble(n, cs)
        expect = (TruncH({0: 1, 1: m1, 2: Fraction(m1 * m1, 2)})
                  * TruncH({0: 1, 1: m2, 2: Fraction(m2 * m2, 2)}))
        assert app == expect
        stab = 2 if m1 == m2 else 1
        pre, deg = predegree_and_degree(app, 4, stab)
        assert pre == 6 * m1 ** 2 * m2 ** 2
        assert deg == Fraction(6 * m1 ** 2 * m2 ** 2, stab)


def test_star_of_lines_degree():
    for d, A in [(3, 6), (4, 4), (5, 1), (7, 1)]:
        cs = [contribution_type_I(1, [d - 1], d)] * d
        cs.append(contribution_star_typeIII(d))
        app = app_assemble(d, cs)
        assert app.degree() == 5  # orbit dimension caps at 5 for a star
        pre, deg = predegree_and_degree(app, 5, A)
        assert deg == Fraction((d - 2) * (d - 1) * d * (d * d + 3 * d - 3), A)


def test_contribution_formulas_fixed_values():
    assert contribution_flex(1) == TruncH({6: Fraction(-1, 48),
                                           7: Fraction(3, 70),
                                           8: Fraction(-197, 4480)})
    two_nodes = contribution_node(1, 1) + contribution_node(1, 1)
    assert two_nodes == TruncH({6: Fraction(-1, 6),
                                7: Fraction(101, 280),
                                8: Fraction(-25, 64)})
    assert contribution_type_II(1, 7, 7) == TruncH({
        5: Fraction(-7, 10), 6: Fraction(371, 180),
        7: Fraction(-71, 30), 8: Fraction(49, 30)})
    assert contribution_type_I(0, [3], 4).is_zero()
    assert contribution_type_II(0, 5, 5).is_zero()


def test_type_I_small_expansion():
    # single intersection of multiplicity m2 on a line of multiplicity m1
    c = contribution_type_I(1, [1], 2)
    assert c.coefficient(3) == Fraction(-1, 6)
    assert c.coefficient(4) == Fraction(1, 8)
    assert c.coefficient(5) == Fraction(-1, 20)


def test_septic_app_and_degree():
    cs = [contribution_type_II(1, 7, 7),
          contribution_flex(1),
          contribution_node(1, 1), contribution_node(1, 1),
          contribution_raw([0, 0, 0, Fraction(-577, 30),
                            Fraction(5779, 70), Fraction(-6353, 35)]),
          contribution_raw([0, 0, 0, Fraction(-3059, 240),
                            Fraction(2199, 40), Fraction(-15775, 128)])]
    app = app_assemble(7, cs)
    assert app.coeffs == [Fraction(v) for v in
                          [1, 7, Fraction(49, 2), Fraction(343, 6),
                           Fraction(2401, 24), Fraction(16723, 120),
                           Fraction(6163, 48), Fraction(119417, 1680),
                           Fraction(145139, 13440)]]
    pre, deg = predegree_and_degree(app, 8, 1)
    assert pre == 435417 and deg == 435417


def test_line_union_smooth_curve_closed_form():
    def closed_form(m1, m2, d2):
        return (d2 - 2) * d2 * m2 ** 6 * (
            28 * (d2 ** 4 + 2 * d2 ** 3 + 4 * d2 ** 2 - 22 * d2 - 33)
            * m1 ** 2
            + 8 * (d2 ** 5 + 2 * d2 ** 4 + 4 * d2 ** 3 + 8 * d2 ** 2
                   - 411 * d2 + 744) * m1 * m2
            + (d2 ** 6 + 2 * d2 ** 5 + 4 * d2 ** 4 + 8 * d2 ** 3
               - 1356 * d2 ** 2 + 5280 * d2 - 5319) * m2 ** 2)

    for m1, m2, d2 in [(1, 1, 3), (2, 1, 3), (1, 2, 4), (3, 2, 5),
                       (2, 3, 6)]:
        n = m1 + m2 * d2
        cs = [contribution_type_I(m1, [m2] * d2, n),
              contribution_type_II(m2, d2, n)]
        cs += [contribution_flex(m2)] * (3 * d2 * (d2 - 2))
        cs += [contribution_node(m1, m2)] * d2
        app = app_assemble(n, cs)
        pre, _ = predegree_and_degree(app, 8, 1)
        assert pre == closed_form(m1, m2, d2)


def test_reduced_nodal_identity():
    def nodal_pred(d, n):
        return (d ** 8 - 1372 * d ** 4 + 7992 * d ** 3 - 15879 * d ** 2
                + 10638 * d - 24 * n * (35 * d ** 2 - 174 * d + 213))

    for d1, d2 in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)]:
        d = d1 + d2
        nodes = d1 * d2
        cs = [contribution_type_II(1, d1, d), contribution_type_II(1, d2, d)]
        cs += [contribution_flex(1)] * (3 * d1 * (d1 - 2)
                                        + 3 * d2 * (d2 - 2))
        cs += [contribution_node(1, 1)] * (2 * d1 * d2)
        app = app_assemble(d, cs)
        pre, _ = predegree_and_degree(app, 8, 1)
        assert pre == nodal_pred(d, nodes)


def test_zero_leading_coefficient():
    app = TruncH({0: 1, 1: 3})
    with pytest.raises(ZeroLeadingCoefficient):
        predegree_and_degree(app, 5, 1)


def test_app_string_shape():
    app = app_assemble(2, [])
    assert str(app).startswith("1 + 2*H + 2*H^2")
