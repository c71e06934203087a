"""Newton polygons, Newton-Puiseux branches, characteristics, truncations.

All expansions happen in a flag-normalized frame: the flag point sits at
(1:0:0) and the flag line is {z = 0}.  Branches are fractional-exponent
series z = sum gamma_lambda * y^lambda (or y = g(z) for branches tangent
to y = 0, handled by the transposed expansion).
"""

from fractions import Fraction
from math import comb, gcd, lcm

from . import curves, linalg
from .curves import Flag, PlaneCurve, substitute_linear
from .errors import (PointNotOnCurve, PrecisionExhausted,
                     RootNotRepresentable)
from .poly import Poly
from .scalars import (QQ, Scalar, nth_roots, root_of_unity_order,
                      univariate_roots)

XYZ = ("x", "y", "z")


# ---------------------------------------------------------------------------
# support and lower hulls


def _cross(a, b, p):
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


def _lower_hull(points):
    """Vertices of the lower convex hull, left to right."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


def _negative_sides(support):
    """Maximal negative-slope segments of the lower hull of the support.

    Returns a list of (p0, p1, points_on_side) with p0 lexicographically
    smaller; works with fractional first coordinates.
    """
    if len(support) < 2:
        return []
    hull = _lower_hull(support)
    sides = []
    for a, b in zip(hull, hull[1:]):
        if b[1] >= a[1]:
            break  # slopes are increasing; once non-negative, stop
        on = [p for p in support if _cross(a, b, p) == 0
              and a[0] <= p[0] <= b[0]]
        sides.append((a, b, sorted(on)))
    return sides


def _affine_support(form, d=None):
    """{(j, k): coeff} for the chart x = 1 of a form in x, y, z."""
    supp = {}
    for e, c in form.terms.items():
        supp[(e[1], e[2])] = c
    return supp


# ---------------------------------------------------------------------------
# Newton polygon of a curve at a flag


class NewtonSide:
    """One negative-slope side of a Newton polygon."""

    def __init__(self, polygon, p0, p1, points):
        self.polygon = polygon
        self.j0, self.k0 = p0
        self.j1, self.k1 = p1
        self.points = points          # support points on the side
        dj = self.j1 - self.j0
        dk = self.k0 - self.k1
        self.S = gcd(dj, dk)
        self.c = dj // self.S
        self.b = dk // self.S
        g = gcd(self.b, self.c)
        self.b //= g
        self.c //= g
        self.S = dj // self.c
        self.slope = Fraction(-self.b, self.c)
        # shape exponents: side form = x^qbar y^r z^q prod(y^c + rho x^(c-b) z^b)
        self.r = self.j0
        self.q = self.k1
        self.qbar = polygon.degree - self.r - self.q - self.S * self.c

    def weight(self):
        """min(b*j + c*k) over the support; attained on this side."""
        return self.b * self.j0 + self.c * self.k0

    def psi_coefficients(self):
        """Coefficients of psi(w) = sum c_n w^n along the side lattice."""
        supp = self.polygon.support
        tower = self.polygon.tower
        out = []
        for n in range(self.S + 1):
            j = self.j1 - n * self.c
            k = self.k1 + n * self.b
            out.append(supp.get((j, k), tower.zero()))
        return out

    def side_form(self):
        """The side-restricted curve, homogenized in the flag frame."""
        d = self.polygon.degree
        terms = {}
        for (j, k) in self.points:
            terms[(d - j - k, j, k)] = self.polygon.support[(j, k)]
        return Poly(XYZ, terms, tower=self.polygon.tower)

    def rho(self, allow_extension=False):
        """The S-tuple of rho values in the side's conic-shape form."""
        coeffs = self.psi_coefficients()
        roots = univariate_roots(coeffs, allow_extension=allow_extension)
        return [-w for w in roots]

    def rho_is_constant(self):
        """True if psi is a perfect S-th power of a linear factor
        (no root extraction needed)."""
        coeffs = self.psi_coefficients()
        cS = coeffs[self.S]
        if self.S == 0:
            return True
        cand = coeffs[self.S - 1] / (self.S * cS)
        for n in range(self.S + 1):
            expect = cS * comb(self.S, n) * cand**(self.S - n)
            if not coeffs[n] == expect:
                return False
        return True

    def __str__(self):
        return (f"side ({self.j0},{self.k0})-({self.j1},{self.k1}) "
                f"slope -{self.b}/{self.c} S={self.S}")


class NewtonPolygonData:
    """Support, vertices and negative-slope sides of F at a flag."""

    def __init__(self, flag, normalizer, degree, support, tower):
        self.flag = flag
        self.normalizer = normalizer
        self.degree = degree
        self.support = support
        self.tower = tower
        raw = _negative_sides(list(support))
        self.sides = [NewtonSide(self, a, b, on) for a, b, on in raw]
        if self.sides:
            verts = [(self.sides[0].j0, self.sides[0].k0)]
            for s in self.sides:
                verts.append((s.j1, s.k1))
        else:
            verts = [min(support)]
        self.vertices = verts

    def sides_in_range(self):
        """Sides with slope strictly between -1 and 0."""
        return [s for s in self.sides if s.b < s.c]

    def __str__(self):
        return "; ".join(str(s) for s in self.sides) or "no sides"


def newton_polygon(curve, flag):
    p = flag.point
    if not curve.contains(p):
        raise PointNotOnCurve(
            f"{curves.point_str(p)} is not on the curve")
    M = curves.flag_normalizer(flag)
    local = substitute_linear(curve.form, M)
    support = _affine_support(local)
    tower = local.tower
    return NewtonPolygonData(flag, M, curve.degree, support, tower)


def side_limit(curve, side, allow_extension=False):
    """Side-restricted limit form and its shape decomposition."""
    if not (0 < side.b < side.c):
        raise ValueError("side slope must be strictly between -1 and 0")
    form, _ = side.side_form().normalized()
    rho = side.rho(allow_extension=allow_extension)
    info = {
        "qbar": side.qbar,
        "r": side.r,
        "q": side.q,
        "S": side.S,
        "b": side.b,
        "c": side.c,
        "rho": rho,
    }
    return form, info


def side_is_excluded(side):
    """The conic-union exclusion: slope -1/2, bare conic powers only."""
    return (side.b == 1 and side.c == 2 and side.r == 0 and side.q == 0
            and side.rho_is_constant())


# ---------------------------------------------------------------------------
# Puiseux branches


class PuiseuxBranch:
    """A truncated fractional-power series branch at the flag point.

    orientation 'z_of_y' means z = sum gamma y^lambda (empty terms: the
    branch is the flag line z = 0 itself); 'y_of_z' means y = g(z) for
    branches tangent to y = 0 (empty terms: the line y = 0).
    """

    def __init__(self, terms, orientation, factor_index, copies=1,
                 precision=None):
        self.terms = [(Fraction(l), g) for l, g in terms]
        self.orientation = orientation
        self.factor_index = factor_index
        self.copies = copies
        self.precision = precision
        for (l1, _), (l2, _) in zip(self.terms, self.terms[1:]):
            assert l1 < l2

    @property
    def tangent(self):
        """Tangent to the flag line z = 0."""
        if self.orientation != "z_of_y":
            return False
        return not self.terms or self.terms[0][0] > 1

    def first_exponent(self):
        return self.terms[0][0] if self.terms else None

    def coefficient_at(self, exponent):
        for l, g in self.terms:
            if l == exponent:
                return g
        tower = self.terms[0][1].tower if self.terms else QQ
        return tower.zero()

    def truncated_terms(self, C):
        return [(l, g) for l, g in self.terms if l < C]

    def series_str(self):
        dep, ind = ("z", "y") if self.orientation == "z_of_y" else ("y", "z")
        if not self.terms:
            return f"{dep} = 0"
        chunks = []
        for l, g in self.terms:
            gs = str(g)
            if "+" in gs[1:] or "-" in gs[1:]:
                gs = f"({gs})"
            chunks.append(f"{gs}*{ind}^{l}" if l != 1 else f"{gs}*{ind}")
        return f"{dep} = " + "+".join(chunks).replace("+-", "-")

    def __str__(self):
        return self.series_str()

    def __repr__(self):
        return f"PuiseuxBranch({self.series_str()})"


class _Ctx:
    """Threads the (possibly growing) coefficient tower through expansion."""

    def __init__(self, tower, allow_extension):
        self.tower = tower
        self.allow_extension = allow_extension

    def absorb(self, scalar):
        if len(scalar.tower.gens) > len(self.tower.gens):
            self.tower = scalar.tower
        return self.tower.scalar(scalar)


class _NeedsMorePrecision(Exception):
    pass


def _branch_count(supp):
    """Number of vanishing-z branches with multiplicity: the k-coordinate
    of the leftmost support vertex."""
    jmin = min(j for (j, k) in supp)
    return max(k for (j, k) in supp if j == jmin)


def _substitute_branch_step(supp, mu, gamma, ctx):
    """Support of g(y, z1) where z = y^mu * (gamma + z1)."""
    out = {}
    for (j, k), cval in supp.items():
        cval = ctx.absorb(cval)
        base_j = j + mu * k
        for l in range(k + 1):
            coeff = cval * comb(k, l) * gamma**(k - l)
            key = (base_j, l)
            if key in out:
                acc = out[key] + coeff
                if acc.is_zero():
                    del out[key]
                else:
                    out[key] = acc
            elif not coeff.is_zero():
                out[key] = coeff
    return out


def _side_gammas(side_points, supp, ctx):
    """Initial coefficients for one side: list of (gamma, multiplicity).

    Solves the side polynomial phi(gamma) = sum c_k gamma^k by splitting
    off the lattice gap: phi = gamma^kmin * psi(gamma^g).
    """
    ks = sorted({k for (_, k) in side_points})
    kmin = ks[0]
    g = 0
    for k in ks[1:]:
        g = gcd(g, k - kmin)
    coeffs = []
    point_by_k = {k: (j, k) for (j, k) in side_points}
    for n in range((ks[-1] - kmin) // g + 1):
        k = kmin + n * g
        if k in point_by_k:
            coeffs.append(ctx.absorb(supp[point_by_k[k]]))
        else:
            coeffs.append(ctx.tower.zero())
    roots = univariate_roots(coeffs, allow_extension=ctx.allow_extension)
    grouped = []
    for w in roots:
        w = ctx.absorb(w)
        for entry in grouped:
            if entry[0] == w:
                entry[1] += 1
                break
        else:
            grouped.append([w, 1])
    out = []
    for w, mult in grouped:
        if w.is_zero():
            continue  # cannot happen: side endpoints have nonzero coeffs
        if g == 1:
            out.append((w, mult))
            continue
        gs = nth_roots(w, g, allow_extension=ctx.allow_extension)
        if len(gs) != g:
            raise RootNotRepresentable(
                f"only {len(gs)} of {g} conjugate side roots representable")
        for gamma in gs:
            out.append((ctx.absorb(gamma), mult))
    return out


def _expand(supp, target, ctx, first_filter=None):
    """All branches z(y) -> 0 of the support, as lists of (exp, coeff).

    target is the absolute exponent cutoff.  first_filter optionally
    restricts which sides are used at this level (top-level orientation
    split); deeper levels use every negative-slope side.
    """
    branches = []
    kmin = min(k for (_, k) in supp)
    if kmin > 0:
        branches.extend([[] for _ in range(kmin)])
        supp = {(j, k - kmin): c for (j, k), c in supp.items()}
        if all(k == 0 for (_, k) in supp):
            return branches
    for a, b, on in _negative_sides(list(supp)):
        dj = b[0] - a[0]
        dk = a[1] - b[1]
        mu = Fraction(dj, dk)  # branch exponent for this side
        if first_filter is not None and not first_filter(mu):
            continue
        if mu > target:
            # bundle not separated within precision; emit truncated copies
            count = a[1] - b[1]
            branches.extend([[] for _ in range(count)])
            continue
        for gamma, mult in _side_gammas(on, supp, ctx):
            sub = _substitute_branch_step(supp, mu, gamma, ctx)
            for cont in _expand(sub, target - mu, ctx):
                branches.append([(mu, gamma)]
                                + [(mu + l, g) for (l, g) in cont])
    return branches


def _transpose_support(supp):
    return {(k, j): c for (j, k), c in supp.items()}


def puiseux_branches(curve, flag, precision=None, allow_extension=False):
    """All formal branches of the curve at the flag point.

    Branches are truncated at the precision exponent (default 2d+2) and
    returned in a deterministic order.  Factors of the curve are expanded
    independently; a factor of multiplicity m contributes m copies of each
    of its branches (copies field).
    """
    p = flag.point
    if not curve.contains(p):
        raise PointNotOnCurve(f"{curves.point_str(p)} is not on the curve")
    prec = Fraction(precision) if precision is not None else \
        Fraction(2 * curve.degree + 2)
    attempts = 0
    while True:
        try:
            return _puiseux_once(curve, flag, prec, allow_extension)
        except _NeedsMorePrecision:
            attempts += 1
            if attempts > 3:
                raise PrecisionExhausted(
                    f"branches not separated at precision {prec}")
            prec *= 2


def _puiseux_once(curve, flag, precision, allow_extension):
    M = curves.flag_normalizer(flag)
    ctx = _Ctx(curve.tower, allow_extension)
    out = []
    for idx, (form, mult) in enumerate(curve.factors):
        local = substitute_linear(form, M)
        if not local.eval({"x": local.tower.one(), "y": local.tower.zero(),
                           "z": local.tower.zero()}).is_zero():
            continue  # factor does not pass through the flag point
        supp = {key: ctx.absorb(c) for key, c in _affine_support(local).items()}
        # split off the axis factors z^* and y^*
        z_mult = min(k for (_, k) in supp)
        if z_mult:
            supp = {(j, k - z_mult): c for (j, k), c in supp.items()}
            for _ in range(z_mult):
                out.append(PuiseuxBranch([], "z_of_y", idx, copies=mult,
                                         precision=precision))
        y_mult = min(j for (j, _) in supp)
        if y_mult:
            supp = {(j - y_mult, k): c for (j, k), c in supp.items()}
            for _ in range(y_mult):
                out.append(PuiseuxBranch([], "y_of_z", idx, copies=mult,
                                         precision=precision))
        if all(k == 0 for (_, k) in supp) and all(j == 0 for (j, _) in supp):
            continue
        # z(y) branches: first-level exponent mu >= 1 (slope in [-1, 0))
        if any(k > 0 for (_, k) in supp):
            for terms in _expand(supp, precision, ctx,
                                 first_filter=lambda mu: mu >= 1):
                out.append(PuiseuxBranch(terms, "z_of_y", idx, copies=mult,
                                         precision=precision))
        # y(z) branches: transposed expansion, first exponent > 1 strictly
        if any(j > 0 for (j, _) in supp):
            tsupp = _transpose_support(supp)
            for terms in _expand(tsupp, precision, ctx,
                                 first_filter=lambda mu: mu > 1):
                out.append(PuiseuxBranch(terms, "y_of_z", idx, copies=mult,
                                         precision=precision))
    _check_separation(out)
    return out


def _check_separation(branches):
    """Branches from distinct factors must differ within the precision."""
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            b1, b2 = branches[i], branches[j]
            if b1.factor_index == b2.factor_index:
                continue
            if b1.orientation != b2.orientation:
                continue
            if _terms_equal(b1.terms, b2.terms):
                raise _NeedsMorePrecision()


def _terms_equal(t1, t2):
    if len(t1) != len(t2):
        return False
    for (l1, g1), (l2, g2) in zip(t1, t2):
        if l1 != l2 or not g1 == g2:
            return False
    return True


def first_disagreement(terms1, terms2):
    """Smallest exponent where the two series differ, or None."""
    m1 = {l: g for l, g in terms1}
    m2 = {l: g for l, g in terms2}
    exps = sorted(set(m1) | set(m2))
    for l in exps:
        g1 = m1.get(l)
        g2 = m2.get(l)
        if g1 is None or g2 is None:
            return l
        if not g1 == g2:
            return l
    return None


# ---------------------------------------------------------------------------
# characteristics, truncations, siblings


class CharacteristicGroup:
    """Branches sharing one truncation below a characteristic C."""

    def __init__(self, C, truncation_terms, branches):
        self.C = C
        self.truncation_terms = truncation_terms
        self.branches = branches
        self.gammas = []
        for b in branches:
            g = b.coefficient_at(C)
            self.gammas.extend([g] * b.copies)
        self.S = sum(b.copies for b in branches)

    def distinct_gamma_count(self):
        out = []
        for g in self.gammas:
            if not any(g == h for h in out):
                out.append(g)
        return len(out)


def characteristics(branches):
    """All characteristics C with their truncation groups.

    Input: branches tangent to the flag line (others are ignored).
    Output: list of (C, [CharacteristicGroup...]) sorted by C.
    """
    tangs = [b for b in branches if b.tangent]
    cvals = []
    for i in range(len(tangs)):
        for j in range(i + 1, len(tangs)):
            b1, b2 = tangs[i], tangs[j]
            dis = first_disagreement(b1.terms, b2.terms)
            if dis is None:
                continue
            l0 = b1.first_exponent()
            if l0 is None or dis <= l0:
                continue
            if dis not in cvals:
                cvals.append(dis)
    out = []
    for C in sorted(cvals):
        groups = []
        for b in tangs:
            l0 = b.first_exponent()
            if l0 is None or not l0 < C:
                continue
            trunc = b.truncated_terms(C)
            for grp in groups:
                if _terms_equal(grp[0], trunc):
                    grp[1].append(b)
                    break
            else:
                groups.append((trunc, [b]))
        out.append((C, [CharacteristicGroup(C, t, bs) for t, bs in groups]))
    return out


class Truncation:
    """A truncation f_(C) with its derived integer data a, b, c, ell, h."""

    def __init__(self, C, terms, group=None):
        self.C = Fraction(C)
        self.terms = [(Fraction(l), g) for l, g in terms]
        if not self.terms:
            raise ValueError("a truncation needs at least the lambda_0 term")
        self.group = group
        self.lam0 = self.terms[0][0]
        self.B = (self.C - self.lam0) / 2 + 1
        dens = [self.B.denominator, self.C.denominator]
        dens += [l.denominator for l, _ in self.terms]
        self.a = lcm(*dens)
        self.b = int(self.a * self.B)
        self.c = int(self.a * self.C)
        self.ell = lcm(*[l.denominator for l, _ in self.terms])
        self.h = gcd(self.a, *[int(self.a * l) for l, _ in self.terms])
        assert self.ell * self.h == self.a, "ell * h must equal a"
        assert self.a < self.b < self.c

    @classmethod
    def from_group(cls, group):
        return cls(group.C, group.truncation_terms, group=group)

    def coefficient_at(self, exponent):
        for l, g in self.terms:
            if l == exponent:
                return g
        return self.terms[0][1].tower.zero()

    def series_str(self):
        chunks = []
        for l, g in self.terms:
            gs = str(g)
            if "+" in gs[1:] or "-" in gs[1:]:
                gs = f"({gs})"
            chunks.append(f"{gs}*y^{l}")
        return "+".join(chunks).replace("+-", "-")

    def __str__(self):
        return f"f_(C={self.C}) = {self.series_str()}"


def branch_weight(branch, trunc):
    """w_beta: 1 if not tangent, C if same truncation, else the first
    disagreement exponent with f_(C)."""
    if not branch.tangent:
        return Fraction(1)
    dis = first_disagreement(branch.truncated_terms(trunc.C), trunc.terms)
    if dis is None:
        return trunc.C
    return dis


def truncation_weight(all_branches, trunc):
    """W = sum of w_beta over all branches at the flag, with copies."""
    W = Fraction(0)
    for b in all_branches:
        W += b.copies * branch_weight(b, trunc)
    return W


def _cyclic_group_of(units):
    """All products of the given roots of unity (a finite cyclic group)."""
    one = units[0].tower.one() if units else QQ.one()
    elems = [one]
    frontier = [one]
    while frontier:
        new = []
        for e in frontier:
            for u in units:
                p = e * u
                if not any(p == q for q in elems):
                    elems.append(p)
                    new.append(p)
        frontier = new
        if len(elems) > 512:
            raise ArithmeticError("root-of-unity group did not close")
    return elems


def are_siblings(t1, t2, max_order=None):
    """Decide the sibling relation between two truncations.

    Siblings: same (a, b, c) and gamma'_l = xi^(a*l) * gamma_l for some
    a-th root of unity xi (not necessarily in the tower).  Decided by the
    consistency of the concrete ratio system.
    """
    if (t1.a, t1.b, t1.c) != (t2.a, t2.b, t2.c):
        return False
    if [l for l, _ in t1.terms] != [l for l, _ in t2.terms]:
        return False
    a = t1.a
    bound = max_order or a
    pairs = []
    for (l, g1), (_, g2) in zip(t1.terms, t2.terms):
        u = g2 / g1
        order = root_of_unity_order(u, bound)
        if order is None or a % order != 0:
            return False
        pairs.append((int(a * l), u))
    group = _cyclic_group_of([u for _, u in pairs])
    D = len(group)
    gen = None
    for g in group:
        if root_of_unity_order(g, D) == D:
            gen = g
            break
    assert gen is not None
    logs = []
    for e, u in pairs:
        s = None
        p = gen.tower.one()
        for k in range(D):
            if p == u:
                s = k
                break
            p = p * gen
        assert s is not None
        logs.append((e, s))
    for x in range(a):
        if all((e * x * D - s * a) % (a * D) == 0 for e, s in logs):
            return True
    return False


def sibling_classes(truncations, max_order=None):
    """Partition a list of Truncations into sibling classes (index lists)."""
    n = len(truncations)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and are_siblings(truncations[i],
                                                   truncations[j],
                                                   max_order=max_order):
                parent[find(j)] = find(i)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return [classes[k] for k in sorted(classes)]
