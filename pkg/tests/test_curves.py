from fractions import Fraction

import pytest

from curveorbit import linalg
from curveorbit.curves import (XYZ, Flag, PlaneCurve, as_point,
                               covector_to_form, flag_normalizer,
                               form_to_covector, hessian_flex_test, point_eq,
                               point_str, singular_points_search,
                               substitute_linear, tangent_cone, tangent_line)
from curveorbit.errors import DegenerateFlag, PointNotOnCurve
from curveorbit.poly import poly_ring
from curveorbit.scalars import QQ

from conftest import poly


def test_as_point_and_eq():
    p = as_point([2, 4, 6])
    q = as_point([1, 2, 3])
    assert point_eq(p, q)
    assert point_str(q) == "(1 : 2 : 3)"
    assert not point_eq(p, as_point([1, 2, 4]))
    with pytest.raises(ValueError):
        as_point([0, 0, 0])


def test_covector_form_round_trip():
    x, y, z = poly_ring(XYZ)
    form = x - 4 * y + 2 * z
    cov = form_to_covector(form)
    assert covector_to_form(cov).monic() == form.monic()
    with pytest.raises(ValueError):
        form_to_covector(x ** 2)


def test_plane_curve_basics(septic):
    assert septic.degree == 7
    assert septic.contains(as_point([1, 0, 0]))
    assert septic.contains(as_point([0, 0, 1]))
    assert septic.contains(as_point([1, 1, 0]))
    assert not septic.contains(as_point([1, 1, 1]))


def test_factored_curve(quintic):
    assert quintic.degree == 5
    assert len(quintic.linear_factors()) == 1
    assert len(quintic.nonlinear_factors()) == 1
    line, mult = quintic.linear_factors()[0]
    assert mult == 1 and line.degree() == 1


def test_multiplicity_collapses_in_form():
    f = poly({(0, 1, 0): 1})
    c = PlaneCurve([(f, 3)])
    assert c.degree == 3
    assert c.form == f ** 3


def test_flag_and_normalizer(septic):
    p = as_point([1, 0, 0])
    l = [QQ.zero(), QQ.zero(), QQ.one()]  # the line z = 0
    flag = Flag(p, l)
    M = flag_normalizer(flag)
    # first column is the point
    col0 = [M[r][0] for r in range(3)]
    assert point_eq(col0, p)
    # the pulled-back flag line is z = 0
    pulled = linalg.vec_mat(l, M)
    assert pulled[0].is_zero() and pulled[1].is_zero()
    assert not linalg.det(M).is_zero()


def test_flag_requires_incidence():
    p = as_point([1, 0, 0])
    l = [QQ.one(), QQ.zero(), QQ.zero()]  # the line x = 0 misses p
    with pytest.raises(DegenerateFlag):
        Flag(p, l)


def test_tangent_line_smooth(quintic):
    p = as_point([1, 1, 1])
    # F(1,1,1) = 1*(1+1)^2 - 4 = 0, a smooth point of the quartic factor
    assert quintic.contains(p)
    l = tangent_line(quintic, p)
    form = covector_to_form(l)
    assert form.eval({"x": p[0], "y": p[1], "z": p[2]}).is_zero()


def test_tangent_line_rejects_singular(septic):
    with pytest.raises(Exception):
        tangent_line(septic, as_point([1, 0, 0]))


def test_tangent_cone_septic_origin(septic):
    info = tangent_cone(septic, as_point([1, 0, 0]))
    assert info["mult"] == 4
    # cone = z^4 in the chart at (1:0:0): a single line with multiplicity 4
    assert info["lines"] is not None and len(info["lines"]) == 1
    cov, mult = info["lines"][0]
    assert mult == 4
    assert covector_to_form(cov).monic() == poly({(0, 0, 1): 1})
    assert info["cone"].degree() == 4


def test_tangent_cone_three_lines(quintic):
    # at (0:0:1) the quintic has cone x y (x - 4 y): three distinct lines
    info = tangent_cone(quintic, as_point([0, 0, 1]))
    assert info["mult"] == 3
    assert info["lines"] is not None and len(info["lines"]) == 3
    mults = sorted(m for _, m in info["lines"])
    assert mults == [1, 1, 1]
    cone = info["cone"]
    expected = poly({(2, 1, 0): 1, (1, 2, 0): -4})
    assert cone.monic() == expected.monic()


def test_tangent_cone_node(nodal_sextic):
    info = tangent_cone(nodal_sextic, as_point([1, 0, 0]))
    assert info["mult"] == 2
    assert len(info["lines"]) == 2  # y = 0 and z = 0, the two branch tangents
    assert sorted(m for _, m in info["lines"]) == [1, 1]


def test_tangent_cone_rejects_off_curve(septic):
    with pytest.raises(PointNotOnCurve):
        tangent_cone(septic, as_point([1, 1, 1]))


def test_hessian_flex_test(septic):
    assert hessian_flex_test(septic, as_point([1, 0, 0])) == "Singular"
    flex = as_point([Fraction(7 ** 7), Fraction(2 ** 8 * 7 ** 3),
                     Fraction(2 ** 12 * 3)])
    assert septic.contains(flex)
    assert hessian_flex_test(septic, flex) == "Flex"
    assert hessian_flex_test(septic, as_point([1, 1, 0])) == "Smooth"


def test_singular_points_search(nodal_sextic):
    pts = singular_points_search(nodal_sextic, height_bound=3)
    assert any(point_eq(p, as_point([1, 0, 0])) for p in pts)


def test_substitute_linear_is_right_action(septic, rng):
    # (F . M) . N == F . (M N)
    def rand_mat():
        while True:
            M = [[QQ.scalar(rng.randint(-3, 3)) for _ in range(3)]
                 for _ in range(3)]
            if not linalg.det(M).is_zero():
                return M

    F = septic.form
    for _ in range(5):
        M, N = rand_mat(), rand_mat()
        left = substitute_linear(substitute_linear(F, M), N)
        right = substitute_linear(F, linalg.mat_mul(M, N))
        assert left == right
