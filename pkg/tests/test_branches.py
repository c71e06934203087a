from fractions import Fraction

import pytest
import sympy

from curveorbit.branches import (Truncation, are_siblings, branch_weight,
                                 characteristics, newton_polygon,
                                 puiseux_branches, sibling_classes,
                                 side_is_excluded, side_limit,
                                 truncation_weight)
from curveorbit.curves import Flag, PlaneCurve, as_point
from curveorbit.errors import PointNotOnCurve
from curveorbit.scalars import QQ

import oracles
from conftest import poly


def z_flag(point):
    return Flag(as_point(point), [QQ.zero(), QQ.zero(), QQ.one()])


def x_flag(point):
    return Flag(as_point(point), [QQ.one(), QQ.zero(), QQ.zero()])


def test_newton_polygon_quintic(quintic):
    pg = newton_polygon(quintic, z_flag([1, 0, 0]))
    assert sorted(pg.support) == [(1, 2), (2, 2), (3, 1), (5, 0)]
    assert pg.vertices == [(1, 2), (5, 0)]
    sides = pg.sides
    assert len(sides) == 1
    s = sides[0]
    assert (s.j0, s.k0, s.j1, s.k1) == (1, 2, 5, 0)
    assert (s.b, s.c, s.S) == (1, 2, 2)
    assert s.slope == Fraction(-1, 2)
    assert s.weight() == 5
    assert (s.r, s.q, s.qbar) == (1, 0, 0)


def test_newton_polygon_septic(septic):
    pg = newton_polygon(septic, z_flag([1, 0, 0]))
    assert sorted(pg.support) == [(0, 4), (3, 2), (5, 1), (6, 0), (7, 0)]
    # one side of slope -2/3 from (0,4) to (6,0)
    inrange = pg.sides_in_range()
    assert len(inrange) == 1
    s = inrange[0]
    assert (s.j0, s.k0, s.j1, s.k1) == (0, 4, 6, 0)
    assert (s.b, s.c, s.S) == (2, 3, 2)
    assert s.weight() == 12
    assert not side_is_excluded(s)


def test_polygon_sides_match_bruteforce(septic, quintic, nodal_sextic):
    cases = [
        (septic, z_flag([1, 0, 0])),
        (quintic, z_flag([1, 0, 0])),
        (nodal_sextic, z_flag([1, 0, 0])),
        (septic, x_flag([0, 0, 1])),
    ]
    for curve, flag in cases:
        pg = newton_polygon(curve, flag)
        expected = oracles.polygon_sides_bruteforce(list(pg.support))
        got = sorted((s.j0, s.k0) for s in pg.sides)
        want = sorted(p for (p, q, on) in expected)
        assert got == want
        for s in pg.sides:
            for (p, q, on) in expected:
                if (s.j0, s.k0) == p:
                    assert (s.j1, s.k1) == q
                    assert tuple(sorted(s.points)) == on


def test_sides_in_range_criterion(septic, quintic):
    # in range means 0 < b < c once (b, c) is reduced
    for curve in (septic, quintic):
        pg = newton_polygon(curve, z_flag([1, 0, 0]))
        for s in pg.sides:
            assert (s in pg.sides_in_range()) == (0 < s.b < s.c)


def test_conic_exclusion():
    # y^2 = xz doubled: one side of slope -1/2 made of a perfect square;
    # its limit is the conic pair itself, not a new component
    conic = poly({(0, 2, 0): 1, (1, 0, 1): -1})
    curve = PlaneCurve([(conic, 2)])
    pg = newton_polygon(curve, z_flag([1, 0, 0]))
    inrange = pg.sides_in_range()
    assert len(inrange) == 1
    assert side_is_excluded(inrange[0])


def test_side_limit_is_side_form(septic):
    pg = newton_polygon(septic, z_flag([1, 0, 0]))
    s = pg.sides_in_range()[0]
    form = s.side_form()
    # x^3 z^4 - 2 x^2 y^3 z^2 + x y^6 lies on the side lattice
    assert form == poly({(3, 0, 4): 1, (2, 3, 2): -2, (1, 6, 0): 1})
    lim, info = side_limit(septic, s)
    assert lim == form.monic()
    assert info["S"] == 2 and info["b"] == 2 and info["c"] == 3
    assert info["qbar"] == 1 and info["r"] == 0 and info["q"] == 0
    # shape: x^qbar y^r z^q prod over rho of (y^3 + rho x z^2); the
    # factored shape must multiply back to the side form
    shape = poly({(info["qbar"], info["r"], info["q"]): 1})
    for rho_val in info["rho"]:
        shape = shape * (poly({(0, 3, 0): 1})
                         + poly({(1, 0, 2): 1}) * rho_val)
    assert shape.monic() == lim
    assert [str(rv) for rv in info["rho"]] == ["-1", "-1"]


def test_puiseux_branches_quintic(quintic):
    blist = puiseux_branches(quintic, z_flag([1, 0, 0]),
                             allow_extension=True)
    tangent = [b for b in blist if b.tangent]
    assert len(tangent) == 2
    for b in tangent:
        lead = b.terms[0]
        assert lead[0] == 2 and lead[1] == -1  # z = -y^2 + ...
    seconds = sorted(str(b.terms[1][1]) for b in tangent)
    assert seconds == ["-2", "2"]
    assert all(b.terms[1][0] == Fraction(5, 2) for b in tangent)


def test_puiseux_branches_verify_in_sympy(septic):
    blist = puiseux_branches(septic, z_flag([1, 0, 0]),
                             allow_extension=True)
    tangent = [b for b in blist if b.tangent]
    assert len(tangent) == 4
    y, z, I = sympy.symbols("y"), sympy.symbols("z"), sympy.I
    # local chart x = 1
    phi = (z ** 2 - y ** 3) ** 2 - 4 * y ** 5 * z - y ** 7
    for b in tangent:
        series = sympy.S(0)
        for lam, gam in b.terms:
            g = sympy.sympify(str(gam).replace("i", "I").replace("^", "**"))
            series += g * y ** sympy.Rational(lam)
        # these branches happen to be exact finite series
        residual = sympy.expand(sympy.radsimp(phi.subs(z, series)))
        assert sympy.simplify(residual) == 0


def test_characteristics_and_weights(septic):
    blist = puiseux_branches(septic, z_flag([1, 0, 0]),
                             allow_extension=True)
    chars = characteristics(blist)
    assert len(chars) == 1
    C, groups = chars[0]
    assert C == Fraction(7, 4)
    assert len(groups) == 2
    for g in groups:
        assert g.S == 2
        assert g.distinct_gamma_count() == 2
        trunc = Truncation.from_group(g)
        assert (trunc.a, trunc.b, trunc.c) == (8, 9, 14)
        assert trunc.ell == 2 and trunc.h == 4
        assert trunc.ell * trunc.h == trunc.a
        # W = sum of per-branch weights: 2 same-truncation branches at C,
        # 2 branches splitting at the first disagreement 3/2
        W = truncation_weight(blist, trunc)
        assert W == Fraction(13, 2)
        for b in blist:
            w = branch_weight(b, trunc)
            assert w in (Fraction(1), Fraction(3, 2), C)


def test_sibling_classes_septic(septic):
    blist = puiseux_branches(septic, z_flag([1, 0, 0]),
                             allow_extension=True)
    chars = characteristics(blist)
    truncs = [Truncation.from_group(g) for _, gs in chars for g in gs]
    assert len(truncs) == 2
    classes = sibling_classes(truncs)
    assert classes == [[0, 1]]
    assert are_siblings(truncs[0], truncs[1])
    assert are_siblings(truncs[0], truncs[0])


def test_sibling_decision_matches_sympy_oracle(septic):
    blist = puiseux_branches(septic, z_flag([1, 0, 0]),
                             allow_extension=True)
    chars = characteristics(blist)
    truncs = [Truncation.from_group(g) for _, gs in chars for g in gs]
    t1, t2 = truncs
    pairs = []
    for (l, g1), (_, g2) in zip(t1.terms, t2.terms):
        u = g2 / g1
        us = sympy.sympify(str(u).replace("i", "I").replace("^", "**"))
        pairs.append((int(t1.a * l), us))
    assert oracles.sibling_exists_sympy(t1.a, pairs) == \
        are_siblings(t1, t2)


def test_branches_reject_off_point(quintic):
    with pytest.raises(PointNotOnCurve):
        puiseux_branches(quintic, z_flag([1, 5, 0]))
