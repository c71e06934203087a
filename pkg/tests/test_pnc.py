from fractions import Fraction

import pytest

from curveorbit.curves import PlaneCurve, as_point, point_eq
from curveorbit.errors import DegenerateTuple, InfiniteStabilizer
from curveorbit.germs import flat_limit
from curveorbit.pnc import (affine_automorphism_count, assemble_pnc,
                            limits_equivalent, pgl2_stabilizer_count,
                            type_I_components, type_II_components,
                            u_automorphism_count)
from curveorbit.scalars import QQ

import oracles
from conftest import poly


SEPTIC_POINTS = [
    (as_point([1, 0, 0]), None),
    (as_point([0, 0, 1]), None),
    (as_point([1, -4, -8]), None),
    (as_point([Fraction(7 ** 7), Fraction(2 ** 8 * 7 ** 3),
               Fraction(2 ** 12 * 3)]), None),
]


def q(v):
    return QQ.scalar(v)


@pytest.fixture(scope="module")
def septic_result():
    f = poly({(3, 0, 4): 1, (2, 3, 2): -2, (1, 6, 0): 1,
              (1, 5, 1): -4, (0, 7, 0): -1})
    curve = PlaneCurve([(f, 1)])
    return assemble_pnc(curve, points=SEPTIC_POINTS, allow_extension=True)


# ---------------------------------------------------------------------------
# symmetry counters against the brute-force oracles


def test_pgl2_three_points_is_s3(rng):
    for _ in range(6):
        vals = rng.sample(range(-9, 10), 3)
        pts = [(q(v), q(1)) for v in vals]
        assert pgl2_stabilizer_count(pts) == 6
        fr = [(Fraction(v), Fraction(1)) for v in vals]
        assert oracles.mobius_stabilizer_order(fr, [1, 1, 1]) == 6


def test_pgl2_harmonic_quadruple():
    pts = [(q(0), q(1)), (q(1), q(0)), (q(1), q(1)), (q(-1), q(1))]
    assert pgl2_stabilizer_count(pts) == 8
    fr = [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)),
          (Fraction(1), Fraction(1)), (Fraction(-1), Fraction(1))]
    assert oracles.mobius_stabilizer_order(fr, [1, 1, 1, 1]) == 8


def test_pgl2_weighted_tuple_breaks_symmetry(rng):
    # a repeated point with higher multiplicity can only map to itself
    pts = [(q(0), q(1)), (q(1), q(1)), (q(2), q(1))]
    mults = [2, 1, 1]
    lib = pgl2_stabilizer_count(pts, mults)
    orc = oracles.mobius_stabilizer_order(
        [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(1)),
         (Fraction(2), Fraction(1))], mults)
    assert lib == orc == 2


def test_pgl2_infinite_stabilizer():
    with pytest.raises(InfiniteStabilizer):
        pgl2_stabilizer_count([(q(0), q(1)), (q(1), q(0))])


def test_pgl2_random_tuples_match_oracle(rng):
    for _ in range(4):
        vals = rng.sample(range(-6, 7), 4)
        pts = [(q(v), q(1)) for v in vals]
        fr = [(Fraction(v), Fraction(1)) for v in vals]
        assert pgl2_stabilizer_count(pts) == \
            oracles.mobius_stabilizer_order(fr, [1] * 4)


def test_affine_count_pm_one():
    assert affine_automorphism_count([q(1), q(-1)]) == 4
    assert oracles.affine_map_count([Fraction(1), Fraction(-1)]) == 2


def test_affine_count_random_match(rng):
    for _ in range(6):
        vals = [q(v) for v in rng.sample(range(-8, 9), rng.choice([2, 3]))]
        fr = [Fraction(str(v)) for v in vals]
        assert affine_automorphism_count(vals) == \
            2 * oracles.affine_map_count(fr)
    with pytest.raises(DegenerateTuple):
        affine_automorphism_count([q(3), q(3)])


def test_u_count():
    assert u_automorphism_count([q(-1), q(-1)]) == 1
    assert u_automorphism_count([q(1), q(-1)]) == 2
    assert oracles.u_map_count([Fraction(-1), Fraction(-1)]) == 1
    assert oracles.u_map_count([Fraction(1), Fraction(-1)]) == 2


def test_u_count_random_match(rng):
    for _ in range(6):
        vals = [q(v) for v in rng.sample([-4, -3, -2, -1, 1, 2, 3, 4],
                                         rng.choice([2, 3]))]
        fr = [Fraction(str(v)) for v in vals]
        assert u_automorphism_count(vals) == oracles.u_map_count(fr)
    with pytest.raises(DegenerateTuple):
        u_automorphism_count([q(0), q(1)])


# ---------------------------------------------------------------------------
# component builders


def test_type_I_on_quintic(quintic):
    comps = type_I_components(quintic)
    assert len(comps) == 1
    c = comps[0]
    assert c.ptype == "I" and c.multiplicity == 1
    assert c.flat.weight == 1
    # a fan: double kernel star around the residual line, in the germ frame
    assert c.limit == poly({(2, 2, 1): 1})


def test_type_II_on_quintic(quintic):
    comps = type_II_components(quintic)
    assert len(comps) == 1
    c = comps[0]
    assert c.ptype == "II" and c.multiplicity == 2
    # the limit of a type II germ is a smooth conic (plus kernel line power)
    assert c.flat.weight >= 1
    w = c.detail["witness"]
    assert quintic.contains(w)


def test_type_II_witness_hint_respected(nodal_sextic):
    # (1:8:2) is on y x^2 = z^3 only ((1:1:1) would lie on both factors)
    w = as_point([1, 8, 2])
    comps = type_II_components(nodal_sextic, witnesses=[w])
    marked = [c for c in comps if point_eq(c.detail["witness"], w)]
    assert len(marked) == 1


def test_septic_assembly(septic_result):
    res = septic_result
    assert res.warnings == []
    by_type = {}
    for c in res.components:
        by_type.setdefault(c.ptype, []).append(c)
    assert sorted(c.multiplicity for c in by_type["II"]) == [2]
    assert sorted(c.multiplicity for c in by_type["IV"]) == [3, 6, 12, 21]
    assert sorted(c.multiplicity for c in by_type["V"]) == [52]
    assert "I" not in by_type and "III" not in by_type
    assert res.total_multiplicity() == 96


def test_septic_merged_node(septic_result):
    res = septic_result
    six = [c for c in res.components if c.multiplicity == 6]
    assert len(six) == 1
    assert len(six[0].merged_from) == 2
    # all other components are unmerged
    for c in res.components:
        if c is not six[0]:
            assert c.merged_from == []


def test_septic_type_V_data(septic_result):
    res = septic_result
    v, = [c for c in res.components if c.ptype == "V"]
    assert v.multiplicity == 52
    d = v.detail
    assert d["ell"] == 2
    assert d["W"] == Fraction(13, 2)
    assert d["stabilizer"] == 4
    assert d["abc"] == (8, 9, 14)
    assert d["C"] == Fraction(7, 4)
    assert v.flat.weight == d["abc"][0] * d["W"]
    assert len(d["siblings"]) == 2


def test_septic_flex_versus_node_points(septic_result):
    res = septic_result
    flex = as_point([Fraction(7 ** 7), Fraction(2 ** 8 * 7 ** 3),
                     Fraction(2 ** 12 * 3)])
    at_flex = [c for c in res.components
               if c.point is not None and point_eq(c.point, flex)]
    assert len(at_flex) == 1 and at_flex[0].multiplicity == 3
    node = as_point([1, -4, -8])
    at_node = [c for c in res.components
               if c.point is not None and point_eq(c.point, node)]
    assert len(at_node) == 1 and at_node[0].multiplicity == 6


def test_nodal_sextic_merge(nodal_sextic):
    res = assemble_pnc(nodal_sextic,
                       points=[(as_point([1, 0, 0]), None)],
                       allow_extension=True)
    ivs = [c for c in res.components if c.ptype == "IV"]
    assert len(ivs) == 1
    assert ivs[0].multiplicity == 8
    assert len(ivs[0].merged_from) == 2
    assert ivs[0].detail["side_weight"] * ivs[0].detail["stabilizer"] == 4


def test_limits_equivalent_swap(nodal_sextic):
    res = assemble_pnc(nodal_sextic,
                       points=[(as_point([1, 0, 0]), None)],
                       allow_extension=True)
    iv = [c for c in res.components if c.ptype == "IV"][0]
    # merged component still carries a concrete germ whose own flat limit
    # matches the recorded one
    again = flat_limit(nodal_sextic, iv.germ)
    assert again.weight == iv.flat.weight
    assert again.limit == iv.flat.limit


def test_auto_point_search_warns(nodal_sextic):
    res = assemble_pnc(nodal_sextic, allow_extension=True)
    assert any("search" in w for w in res.warnings)
    assert any(c.ptype == "IV" and c.multiplicity == 8
               for c in res.components)


def test_star_curve_type_III():
    # x y (x + y) (x - y): four concurrent lines through (0:0:1)
    lines = [poly({(1, 0, 0): 1}), poly({(0, 1, 0): 1}),
             poly({(1, 0, 0): 1, (0, 1, 0): 1}),
             poly({(1, 0, 0): 1, (0, 1, 0): -1})]
    star = PlaneCurve([(l, 1) for l in lines])
    res = assemble_pnc(star, points=[(as_point([0, 0, 1]), None)])
    iii = [c for c in res.components if c.ptype == "III"]
    assert len(iii) == 1
    # the four cone directions 0, inf, -1, 1 form a harmonic tuple: A = 8
    assert iii[0].detail["stabilizer"] == 8
    assert iii[0].multiplicity == 4 * 8
    ones = [c for c in res.components if c.ptype == "I"]
    assert len(ones) == 4
