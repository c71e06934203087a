"""Matrix germs, flat limits, standard form and germ classification.

A matrix germ is a 3x3 matrix of polynomials in t with det not
identically zero.  Composing a plane curve with a germ and extracting
the lowest t-coefficient gives the flat limit; the standard form
machinery rewrites an arbitrary germ as (constant) * (lower-triangular
standard germ) * (constant) * (germ that is the identity at t=0), which
is what the classification needs.
"""

from fractions import Fraction

from . import branches as branches_mod
from . import curves, linalg
from .curves import XYZ, Flag, PlaneCurve, substitute_linear
from .errors import (CurveOrbitError, RootNotRepresentable,
                     TruncationTooSmall)
from .poly import Poly
from .scalars import QQ, Scalar, nth_roots

TVAR = ("t",)


# ---------------------------------------------------------------------------
# polynomial-in-t helpers


def t_poly(tower, coeffs):
    """Poly in t from {exponent: coefficient}."""
    return Poly(TVAR, {(k,): c for k, c in coeffs.items()}, tower=tower)


def t_monomial(tower, k, coeff=1):
    return Poly(TVAR, {(k,): tower.scalar(coeff)}, tower=tower)


def t_constant(tower, c):
    return Poly(TVAR, {(0,): tower.scalar(c)}, tower=tower)


def valuation(p):
    """Order of vanishing at t=0 (None for the zero polynomial)."""
    if p.is_zero():
        return None
    return min(e[0] for e in p.terms)


def coeff_at(p, k):
    return p.terms.get((k,), p.tower.zero())


def trunc(p, T):
    return Poly(TVAR, {e: c for e, c in p.terms.items() if e[0] < T},
                tower=p.tower)


def series_inverse(u, T):
    """Inverse of a unit power series mod t^T."""
    u0 = coeff_at(u, 0)
    if u0.is_zero():
        raise ValueError("not a unit series")
    inv0 = u0.inverse()
    out = {0: inv0}
    for n in range(1, T):
        acc = u0.tower.zero()
        for j in range(1, n + 1):
            uj = coeff_at(u, j)
            if not uj.is_zero() and (n - j) in out:
                acc = acc + uj * out[n - j]
        c = -inv0 * acc
        if not c.is_zero():
            out[n] = c
    return t_poly(u.tower, out)


def series_compose(f, g, T):
    """f(g(t)) mod t^T for polynomial f and series g with g(0)=0."""
    gv = valuation(g)
    assert g.is_zero() or gv >= 1
    acc = Poly.zero(TVAR, tower=f.tower)
    maxdeg = f.degree_in("t") if not f.is_zero() else 0
    for k in range(maxdeg, -1, -1):
        acc = trunc(acc * g, T) + t_constant(f.tower, coeff_at(f, k))
    return trunc(acc, T)


def series_derivative(p):
    return p.derivative("t")


# ---------------------------------------------------------------------------
# the germ class


def _coerce_entry(e, tower):
    if isinstance(e, Poly):
        if e.vars != TVAR:
            raise ValueError("germ entries must be polynomials in t")
        if e.tower.gens != tower.gens:
            return Poly(TVAR, {k: tower.scalar(v) for k, v in e.terms.items()},
                        tower=tower)
        return e
    return t_constant(tower, e)


class MatrixGerm:
    """A 3x3 matrix of polynomials in t with det not identically 0."""

    def __init__(self, rows):
        towers = [QQ]
        for row in rows:
            for e in row:
                if isinstance(e, Poly):
                    towers.append(e.tower)
                elif isinstance(e, Scalar):
                    towers.append(e.tower)
        self.tower = max(towers, key=lambda t: len(t.gens))
        self.rows = [[_coerce_entry(e, self.tower) for e in row] for row in rows]
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("a germ is a 3x3 matrix")
        d = self.det_poly()
        if d.is_zero():
            raise ValueError("germ determinant vanishes identically")
        self._det = d

    def det_poly(self):
        r = self.rows
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))

    def det_valuation(self):
        return valuation(self._det)

    def center(self):
        """The matrix at t = 0, as Scalars."""
        return [[coeff_at(e, 0) for e in row] for row in self.rows]

    def center_rank(self):
        return linalg.rank(self.center())

    def kernel_line(self):
        """For a rank-1 center: the covector of the line it kills."""
        c = self.center()
        for row in c:
            if not all(v.is_zero() for v in row):
                return linalg.normalize_projective(row)
        raise ValueError("zero center has no kernel line")

    def image_point(self):
        """For a rank-1 center: the image point."""
        c = self.center()
        for j in range(3):
            col = [c[i][j] for i in range(3)]
            if not all(v.is_zero() for v in col):
                return linalg.normalize_projective(col)
        raise ValueError("zero center has no image point")

    def image_line(self):
        """For a rank-2 center: the covector of the image line."""
        c = self.center()
        cols = [[c[i][j] for i in range(3)] for j in range(3)]
        for a in range(3):
            for b in range(a + 1, 3):
                cov = linalg.cross3(cols[a], cols[b])
                if not all(v.is_zero() for v in cov):
                    return linalg.normalize_projective(cov)
        raise ValueError("center rank < 2 has no image line")

    def _common_tower(self, Mrows):
        towers = [self.tower]
        for row in Mrows:
            for e in row:
                if isinstance(e, (Poly, Scalar)):
                    towers.append(e.tower)
        return max(towers, key=lambda t: len(t.gens))

    def _lift_rows(self, tower):
        if tower.gens == self.tower.gens:
            return self.rows
        return [[Poly(TVAR, {k: tower.scalar(v) for k, v in e.terms.items()},
                      tower=tower) for e in row] for row in self.rows]

    def compose_left(self, M):
        """(constant matrix M) * germ."""
        Mrows, _ = linalg.coerce_matrix(M)
        tower = self._common_tower(Mrows)
        conv = [[_coerce_entry(e, tower) for e in row] for row in Mrows]
        return MatrixGerm(linalg.mat_mul(conv, self._lift_rows(tower)))

    def compose_right(self, M):
        Mrows, _ = linalg.coerce_matrix(M)
        tower = self._common_tower(Mrows)
        conv = [[_coerce_entry(e, tower) for e in row] for row in Mrows]
        return MatrixGerm(linalg.mat_mul(self._lift_rows(tower), conv))

    def reparametrize(self, theta, T):
        """Entrywise substitution t -> theta(t), truncated mod t^T."""
        rows = [[series_compose(e, theta, T) for e in row] for row in self.rows]
        return MatrixGerm(rows)

    def scale_columns(self, units, T):
        rows = [[trunc(self.rows[i][j] * units[j], T) for j in range(3)]
                for i in range(3)]
        return MatrixGerm(rows)

    def __str__(self):
        return ", ".join(str(e) for row in self.rows for e in row)

    def __repr__(self):
        return f"MatrixGerm({self})"


def diag_germ(e0, e1, e2, tower=None):
    tower = tower or QQ
    z = Poly.zero(TVAR, tower=tower)
    return MatrixGerm([
        [t_monomial(tower, e0), z, z],
        [z, t_monomial(tower, e1), z],
        [z, z, t_monomial(tower, e2)],
    ])


# ---------------------------------------------------------------------------
# flat limits


class FlatLimit:
    """Lowest t-order part of a curve composed with a germ."""

    def __init__(self, weight, limit, scale, germ, curve):
        self.weight = weight          # the t-order
        self.limit = limit            # normalized form in x, y, z
        self.scale = scale            # leading coefficient that was divided out
        self.germ = germ
        self.curve = curve

    def __str__(self):
        return f"t^{self.weight} * ({self.scale}) * ({self.limit})"


def flat_limit(curve, germ):
    """Compose the curve with the germ and extract the lowest t-part."""
    if isinstance(curve, PlaneCurve):
        form = curve.form
    else:
        form = curve
    vars4 = ("x", "y", "z", "t")
    tower = max([form.tower, germ.tower], key=lambda t: len(t.gens))
    gens = [Poly.variable(vars4, v, tower=tower) for v in vars4]

    def lift(tp):
        return Poly(vars4, {(0, 0, 0, e[0]): c for e, c in tp.terms.items()},
                    tower=tower)

    images = {}
    for i, name in enumerate(XYZ):
        img = Poly.zero(vars4, tower=tower)
        for j in range(3):
            ent = germ.rows[i][j]
            if not ent.is_zero():
                img = img + lift(ent) * gens[j]
        images[name] = img
    composed = form.subs(images, result_vars=vars4)
    if composed.is_zero():
        raise CurveOrbitError("curve composed with germ vanishes identically")
    w = min(e[3] for e in composed.terms)
    limit_terms = {e[:3]: c for e, c in composed.terms.items() if e[3] == w}
    limit = Poly(XYZ, limit_terms, tower=tower)
    normalized, lead = limit.normalized()
    return FlatLimit(w, normalized, lead, germ, curve)


def detect_kernel_star(flat):
    """Is the limit a star of lines through a point of the germ's kernel?

    Requires a rank-1 germ center.  Returns (bool, center_point_or_None).
    """
    germ = flat.germ
    if germ.center_rank() != 1:
        raise ValueError("kernel star detection needs a rank-1 center")
    kernel_cov = germ.kernel_line()
    G = flat.limit
    d = G.degree()
    # all partial derivatives of order d-1 are linear forms
    covectors = []
    forms = [G]
    for _ in range(d - 1):
        forms = [f.derivative(v) for f in forms for v in XYZ]
    for f in forms:
        if f.is_zero():
            continue
        cov = [f.coefficient((1, 0, 0)), f.coefficient((0, 1, 0)),
               f.coefficient((0, 0, 1))]
        covectors.append(cov)
    r = linalg.rank(covectors)
    if r >= 3:
        return False, None
    if r <= 1:
        # the limit is a d-fold line; it always meets the kernel line
        return True, None
    # unique candidate center: intersection of two independent covectors
    basis = []
    for cov in covectors:
        trial = basis + [cov]
        if linalg.rank(trial) == len(trial):
            basis.append(cov)
        if len(basis) == 2:
            break
    q = linalg.cross3(basis[0], basis[1])
    q = linalg.normalize_projective(q)
    on_kernel = linalg._dot(kernel_cov, q).is_zero()
    return on_kernel, q


# ---------------------------------------------------------------------------
# standard form


class StandardGerm:
    """Germ of the shape rows (1,0,0), (q, t^b, 0), (r, s*t^b, t^c)."""

    def __init__(self, b, c, q, r, s, tower=None):
        if not (0 <= b <= c):
            raise ValueError("need 0 <= b <= c")
        self.b = b
        self.c = c
        towers = [tower or QQ] + [p.tower for p in (q, r, s)
                                  if isinstance(p, Poly)]
        self.tower = max(towers, key=lambda t: len(t.gens))
        zero = Poly.zero(TVAR, tower=self.tower)
        self.q = q if isinstance(q, Poly) else zero
        self.r = r if isinstance(r, Poly) else zero
        self.s = s if isinstance(s, Poly) else zero
        for name, p, bound in (("q", self.q, b), ("r", self.r, c),
                               ("s", self.s, c - b)):
            if p.is_zero():
                continue
            if valuation(p) < 1:
                raise ValueError(f"{name} must vanish at t=0")
            if p.degree_in("t") >= bound:
                raise ValueError(f"{name} must have degree < {bound}")

    def matrix(self):
        tower = self.tower
        z = Poly.zero(TVAR, tower=tower)
        one = t_constant(tower, 1)
        return MatrixGerm([
            [one, z, z],
            [self.q, t_monomial(tower, self.b), z],
            [self.r, self.s * t_monomial(tower, self.b),
             t_monomial(tower, self.c)],
        ])

    def __str__(self):
        return str(self.matrix())


def _is_monic_monomial(p, k):
    return len(p.terms) == 1 and (k,) in p.terms and p.terms[(k,)] == 1


def _check_already_standard(germ):
    """Return a StandardGerm if the germ is already in standard form."""
    r = germ.rows
    if not _is_monic_monomial(r[0][0], 0):
        return None
    if not (r[0][1].is_zero() and r[0][2].is_zero() and r[1][2].is_zero()):
        return None
    if r[1][1].is_zero() or len(r[1][1].terms) != 1:
        return None
    if r[2][2].is_zero() or len(r[2][2].terms) != 1:
        return None
    b = valuation(r[1][1])
    c = valuation(r[2][2])
    if not (_is_monic_monomial(r[1][1], b) and _is_monic_monomial(r[2][2], c)):
        return None
    if not 0 <= b <= c:
        return None
    q = r[1][0]
    rr = r[2][0]
    s_tb = r[2][1]
    if not s_tb.is_zero():
        if valuation(s_tb) < b:
            return None
        s = Poly(TVAR, {(e[0] - b,): cc for e, cc in s_tb.terms.items()},
                 tower=s_tb.tower)
    else:
        s = s_tb
    try:
        std = StandardGerm(b, c, q, rr, s, tower=germ.tower)
    except ValueError:
        return None
    if b == c:
        if not s.is_zero():
            return None
        if not rr.is_zero():
            vq = valuation(q) if not q.is_zero() else None
            if vq is None or vq >= valuation(rr):
                return None
    return std


def _smith(germ, T):
    """U, (d0, d1, d2), V with germ = U * diag(t^di) * V mod t^T.

    U and V are unit matrix series mod t^T (U(0), V(0) invertible).
    Raises TruncationTooSmall if a pivot cannot be found mod t^T.
    """
    tower = germ.tower
    W = [[trunc(e, T) for e in row] for row in germ.rows]
    zero = Poly.zero(TVAR, tower=tower)
    one = t_constant(tower, 1)
    U = [[one if i == j else zero for j in range(3)] for i in range(3)]
    V = [[one if i == j else zero for j in range(3)] for i in range(3)]
    exps = [0, 0, 0]

    def row_swap(i1, i2):
        W[i1], W[i2] = W[i2], W[i1]
        for k in range(3):
            U[k][i1], U[k][i2] = U[k][i2], U[k][i1]

    def col_swap(j1, j2):
        for k in range(3):
            W[k][j1], W[k][j2] = W[k][j2], W[k][j1]
        V[j1], V[j2] = V[j2], V[j1]

    for k in range(3):
        piv = None
        pv = None
        for i in range(k, 3):
            for j in range(k, 3):
                v = valuation(W[i][j])
                if v is not None and (pv is None or v < pv):
                    piv, pv = (i, j), v
        if piv is None:
            raise TruncationTooSmall(
                f"remaining block vanishes mod t^{T}; increase truncation")
        if piv[0] != k:
            row_swap(k, piv[0])
        if piv[1] != k:
            col_swap(k, piv[1])
        a = pv
        # scale row k so the pivot becomes exactly t^a
        unit = Poly(TVAR, {(e[0] - a,): c for e, c in W[k][k].terms.items()},
                    tower=W[k][k].tower)
        uinv = series_inverse(unit, T)
        W[k] = [trunc(e * uinv, T) for e in W[k]]
        W[k][k] = t_monomial(tower, a)
        for i in range(3):
            U[i][k] = trunc(U[i][k] * unit, T)
        # clear the rest of column k
        for i in range(k + 1, 3):
            if W[i][k].is_zero():
                continue
            f = Poly(TVAR, {(e[0] - a,): c for e, c in W[i][k].terms.items()},
                     tower=W[i][k].tower)
            W[i] = [trunc(wi - f * wk, T) for wi, wk in zip(W[i], W[k])]
            W[i][k] = Poly.zero(TVAR, tower=tower)
            for m in range(3):
                U[m][k] = trunc(U[m][k] + f * U[m][i], T)
        # clear the rest of row k
        for j in range(k + 1, 3):
            if W[k][j].is_zero():
                continue
            f = Poly(TVAR, {(e[0] - a,): c for e, c in W[k][j].terms.items()},
                     tower=W[k][j].tower)
            for m in range(3):
                W[m][j] = trunc(W[m][j] - f * W[m][k], T)
            W[k][j] = Poly.zero(TVAR, tower=tower)
            for m in range(3):
                V[k][m] = trunc(V[k][m] + f * V[j][m], T)
        exps[k] = a
    assert exps[0] <= exps[1] <= exps[2]
    return U, tuple(exps), V


def _mat_at_zero(M):
    return [[coeff_at(e, 0) for e in row] for row in M]


def _mat_trunc_mul(A, B, T):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = Poly.zero(TVAR, tower=A[i][0].tower)
            for k in range(3):
                acc = acc + A[i][k] * B[k][j]
            row.append(trunc(acc, T))
        out.append(row)
    return out


def _scalar_to_tpoly_matrix(M, tower):
    return [[t_constant(tower, e) for e in row] for row in M]


def standardize_germ(germ, truncation_order=None):
    """Rewrite a rank <= 2 germ as Q * sigma * P * (unit germ).

    Returns (Q, sigma, P) with Q, P constant invertible matrices (lists of
    Scalars) and sigma a StandardGerm, such that composing the original
    germ equals composing Q * sigma.matrix() * P with a germ that is the
    identity at t=0 (so all flat limits agree).

    If the germ is already in standard form, Q and P are the identity and
    sigma wraps the germ unchanged.
    """
    # scale so the minimal valuation is 0 and its first coefficient is 1
    w = min(v for v in (valuation(e) for row in germ.rows for e in row)
            if v is not None)
    lead = None
    for row in germ.rows:
        for e in row:
            if valuation(e) == w:
                lead = coeff_at(e, w)
                break
        if lead is not None:
            break
    scaled = MatrixGerm(
        [[Poly(TVAR, {(e[0] - w,): c / lead for e, c in ent.terms.items()},
               tower=ent.tower) if not ent.is_zero() else ent
          for ent in row] for row in germ.rows])

    std = _check_already_standard(scaled)
    if std is not None:
        tower = scaled.tower
        ident = linalg.identity_matrix(tower, 3)
        return ident, std, ident

    wdet = scaled.det_valuation()
    T = truncation_order or (2 * wdet + 6)
    retried = truncation_order is not None
    while True:
        try:
            return _standardize_inner(scaled, T)
        except TruncationTooSmall:
            if retried:
                raise
            retried = True
            T = 4 * (wdet + 2)


def _standardize_inner(germ, T):
    tower = germ.tower
    U, exps, V = _smith(germ, T)
    a, b, c = exps
    if a != 0:
        raise CurveOrbitError(
            "germ has no unit entry after scaling; not a rank <= 2 limit setup")
    if c >= T:
        raise TruncationTooSmall(f"diagonal exponent {c} >= truncation {T}")
    U0 = _mat_at_zero(U)
    U0inv = linalg.inverse(U0)
    h1 = _mat_trunc_mul(_scalar_to_tpoly_matrix(U0inv, tower), U, T)
    # h1 = [[v1, d2, d3], [a2, v2, e3], [a3, b3, v3]], h1 == Id mod t
    v1 = h1[0][0]
    d2 = h1[0][1]
    a2 = h1[1][0]
    v2 = h1[1][1]
    a3 = h1[2][0]
    b3 = h1[2][1]
    v1inv = series_inverse(v1, T)
    q = trunc(a2 * v1inv, b)
    delta = trunc(a2 - q * v1, T)  # == 0 mod t^b
    if not delta.is_zero():
        assert valuation(delta) >= b
    # solve [[v1, delta], [d2, v2 - q*d2]] (r, s)^T == (a3, b3) mod t^c
    m11, m12 = v1, delta
    m21, m22 = d2, trunc(v2 - q * d2, T)
    det = trunc(m11 * m22 - m12 * m21, T)
    detinv = series_inverse(det, T)
    r_series = trunc((m22 * a3 - m12 * b3) * detinv, T)
    s_series = trunc((m11 * b3 - m21 * a3) * detinv, T)
    r = trunc(r_series, c)
    s = trunc(s_series, c - b)
    std = StandardGerm(b, c, q, r, s, tower=tower)
    # h in closed form, j = h^-1 h1, l = D^-1 j D; P = l(0) V(0)
    zero = Poly.zero(TVAR, tower=tower)
    one = t_constant(tower, 1)
    h = [[one, zero, zero], [q, one, zero],
         [r, trunc(s, T), one]]
    hinv = [[one, zero, zero], [-q, one, zero],
            [trunc(q * s - r, T), -s, one]]
    j = _mat_trunc_mul(hinv, h1, T)
    # check the divisibility that makes l = D^-1 j D holomorphic
    bounds = {(1, 0): b, (2, 0): c, (2, 1): c - b}
    for (i, k), bound in bounds.items():
        if not j[i][k].is_zero() and valuation(j[i][k]) < bound:
            raise CurveOrbitError("standard form congruences failed")
    l0 = [[tower.one() if i == k else tower.zero() for k in range(3)]
          for i in range(3)]
    dexp = (0, b, c)
    for (i, k), bound in bounds.items():
        l0[i][k] = coeff_at(j[i][k], dexp[i] - dexp[k])
    P = linalg.mat_mul(l0, _mat_at_zero(V))
    Q = _mat_at_zero(U)
    if b == c:
        Q, std, P = _normalize_equal_exponents(Q, std, P)
    return Q, std, P


def _normalize_equal_exponents(Q, std, P):
    """For b == c enforce s = 0 and val(q) < val(r) (or r = 0)."""
    tower = std.tower
    b = std.b
    q, r = std.q, std.r
    assert std.s.is_zero()

    def swap23(M):
        M = [row[:] for row in M]
        M[1], M[2] = M[2], M[1]
        for row in M:
            row[1], row[2] = row[2], row[1]
        return M

    vq = valuation(q) if not q.is_zero() else None
    vr = valuation(r) if not r.is_zero() else None
    if vr is not None and (vq is None or vr < vq):
        # swap rows/cols 2,3 of sigma; absorb the swap into Q and P
        sw = [[tower.one() if i == j else tower.zero() for j in range(3)]
              for i in range(3)]
        sw[1], sw[2] = sw[2], sw[1]
        Q = linalg.mat_mul(Q, sw)
        P = linalg.mat_mul(sw, P)
        q, r = r, q
        vq, vr = vr, vq
    while (not q.is_zero()) and (not r.is_zero()) and valuation(q) == valuation(r):
        u = coeff_at(r, valuation(r)) / coeff_at(q, valuation(q))
        # conjugate by N = I - u*E21 (row 2 -= u * row 1 inside sigma)
        N = [[tower.one() if i == j else tower.zero() for j in range(3)]
             for i in range(3)]
        N[2][1] = -u
        Ninv = [[tower.one() if i == j else tower.zero() for j in range(3)]
                for i in range(3)]
        Ninv[2][1] = u
        Q = linalg.mat_mul(Q, Ninv)
        P = linalg.mat_mul(N, P)
        r = r - q * u
    return Q, StandardGerm(b, std.c, q, r, std.s, tower=tower), P


# ---------------------------------------------------------------------------
# classification


class Classification:
    """Verdict of classify_germ: which limit family a germ leads to."""

    def __init__(self, kind, **data):
        self.kind = kind
        self.data = data

    def __getattr__(self, name):
        try:
            return self.data[name]
        except KeyError:
            raise AttributeError(name)

    def summary(self):
        parts = [self.kind]
        if "pnc_type" in self.data and self.data["pnc_type"]:
            parts.append(f"type {self.data['pnc_type']}")
        if "point" in self.data and self.data["point"] is not None:
            parts.append(f"at {curves.point_str(self.data['point'])}")
        if "C" in self.data:
            parts.append(f"C = {self.data['C']}")
        return ", ".join(parts)

    def __str__(self):
        return self.summary()


def _reparametrize_to_monomial(std, T, allow_extension=False):
    """Reparametrize so q becomes exactly t^a; rescale columns back.

    Returns (a, r_series, s_series) where the series are the entries of
    the reparametrized standard germ (mod t^T), or raises
    RootNotRepresentable if the needed root of the leading unit is missing.
    """
    tower = std.tower
    q = std.q
    a = valuation(q)
    u = Poly(TVAR, {(e[0] - a,): cc for e, cc in q.terms.items()},
             tower=tower)
    if _is_monic_monomial(q, a):
        return a, std.r, std.s
    u0 = coeff_at(u, 0)
    v0 = nth_roots(u0.inverse(), a, allow_extension=allow_extension)[0]
    tower2 = v0.tower
    u = Poly(TVAR, {e: tower2.scalar(cc) for e, cc in u.terms.items()},
             tower=tower2)
    v = t_constant(tower2, v0)
    t = Poly.variable(TVAR, "t", tower=tower2)
    # Newton iteration on Phi(v) = v^a * u(t*v) - 1
    for _ in range(T.bit_length() + 2):
        tv = trunc(t * v, T)
        utv = series_compose(u, tv, T)
        phi = trunc(v**a * utv - t_constant(tower2, 1), T)
        if phi.is_zero():
            break
        du = series_derivative(u)
        dphi = trunc(v**(a - 1) * utv * a + trunc(v**a, T)
                     * trunc(t * series_compose(du, tv, T), T), T)
        v = trunc(v - phi * series_inverse(dphi, T), T)
    tv = trunc(t * v, T)
    assert trunc(trunc(v**a, T) * series_compose(u, tv, T), T) == t_constant(tower2, 1)
    theta = tv
    r_new = series_compose(std.r, theta, T)
    s_new = series_compose(std.s, theta, T)
    return a, r_new, s_new


def _side_with_slope(polygon, b, c):
    from math import gcd

    g = gcd(b, c)
    b, c = b // g, c // g
    for side in polygon.sides_in_range():
        if side.b == b and side.c == c:
            return side
    return None


def classify_germ(curve, germ, allow_extension=False, precision=None):
    """Decide which limit family (if any) a germ marks for the curve.

    The germ must have singular center (rank 1 or 2).  Returns a
    Classification whose kind is one of 'type_I', 'one_ps', 'type_V',
    'rank_two', 'degenerate'.
    """
    rank = germ.center_rank()
    if rank >= 3:
        raise ValueError("germ center is invertible; composition is a "
                         "coordinate change, not a degeneration")
    flat = flat_limit(curve, germ)
    if rank == 2:
        image = germ.image_line()
        image_form = curves.covector_to_form(image)
        pt = curves.line_point(image)
        M = curves.flag_normalizer(Flag(pt, image))
        local = substitute_linear(curve.form, M)
        m = min(e[2] for e in local.terms)
        if m > 0:
            return Classification(
                "type_I", line=image, line_form=image_form,
                factor_mult=m, point=None, flat=flat)
        return Classification("rank_two", flat=flat,
                              reason="image line is not a component")
    # rank 1
    p = germ.image_point()
    if not curve.contains(p):
        return Classification("degenerate", point=p, flat=flat,
                              reason="center image point is off the curve")
    Q, std, P = standardize_germ(germ)
    b, c = std.b, std.c
    Qinv = linalg.inverse(Q)
    p_orig = linalg.normalize_projective([Q[i][0] for i in range(3)])
    line_orig = linalg.normalize_projective(Qinv[2])
    if std.q.is_zero() and std.r.is_zero() and std.s.is_zero():
        return _classify_one_ps(curve, germ, flat, Q, std, p_orig, line_orig,
                                allow_extension)
    if std.q.is_zero():
        # nonzero r or s with q = 0 never leads to a new limit
        return Classification("rank_two", flat=flat,
                              reason="standard form has q = 0 with r or s nonzero")
    if b == c:
        return Classification("rank_two", flat=flat,
                              reason="equal diagonal exponents with a translation part")
    T = 2 * c + 4
    a, r_series, s_series = _reparametrize_to_monomial(
        std, T, allow_extension=allow_extension)
    # branches of the curve pulled back by Q, at the flag ((1:0:0), z=0)
    local_curve = PlaneCurve([(substitute_linear(f, Q), m)
                              for f, m in curve.factors])
    flag = Flag([local_curve.tower.one(), local_curve.tower.zero(),
                 local_curve.tower.zero()],
                [local_curve.tower.zero(), local_curve.tower.zero(),
                 local_curve.tower.one()])
    target_precision = precision or (Fraction(c, a) + 1)
    blist = branches_mod.puiseux_branches(
        local_curve, flag, precision=target_precision,
        allow_extension=allow_extension)
    r_trunc = trunc(r_series, c)
    s_trunc = trunc(s_series, c - b)
    for branch in blist:
        if branch.orientation != "z_of_y":
            continue
        if not _branch_matches(branch, a, b, c, r_trunc, s_trunc):
            continue
        C = Fraction(c, a)
        lam0 = branch.first_exponent()
        if lam0 is None or not (C > lam0 > 1):
            continue
        if Fraction(b, a) != (C - lam0) / 2 + 1:
            continue
        truncation = branch.truncated_terms(C)
        return Classification(
            "type_V", point=p_orig, line=line_orig, C=C,
            truncation=truncation, lam0=lam0, a=a, b=b, c=c, flat=flat,
            branch=branch)
    return Classification("rank_two", flat=flat,
                          reason="no branch matches the translation part")


def _branch_matches(branch, a, b, c, r_trunc, s_trunc):
    """r == f(t^a) mod t^c and s == f'(t^a) mod t^(c-b) for branch f."""
    r_map = {e[0]: cc for e, cc in r_trunc.terms.items()}
    s_map = {e[0]: cc for e, cc in s_trunc.terms.items()}
    f_map = {}
    fp_map = {}
    for lam, gamma in branch.terms:
        e = a * lam
        if e < c:
            if e.denominator != 1:
                return False
            f_map[int(e)] = gamma
        ep = a * (lam - 1)
        if ep < c - b:
            if ep.denominator != 1:
                return False
            fp_map[int(ep)] = gamma * lam
    def maps_equal(m1, m2):
        for k in set(m1) | set(m2):
            v1 = m1.get(k)
            v2 = m2.get(k)
            if v1 is None or v2 is None:
                return False
            if not v1 == v2:
                return False
        return True
    return maps_equal(r_map, f_map) and maps_equal(s_map, fp_map)


def _classify_one_ps(curve, germ, flat, Q, std, p_orig, line_orig,
                     allow_extension):
    from math import gcd

    b, c = std.b, std.c
    if b == 0:
        # diag(1, 1, t^c): rank-2 center; should not reach here
        return Classification("rank_two", flat=flat,
                              reason="degenerate one-parameter subgroup")
    cone = curves.tangent_cone(curve, p_orig, allow_extension=allow_extension)
    if b == c:
        lines = cone["lines"]
        distinct = len(lines) if lines is not None else None
        if distinct is not None and distinct >= 3:
            return Classification(
                "one_ps", pnc_type="III", point=p_orig, line=None,
                b=1, c=1, cone=cone, flat=flat)
        return Classification(
            "one_ps", pnc_type=None, point=p_orig, line=None, b=1, c=1,
            cone=cone, flat=flat,
            reason="fewer than 3 distinct tangent cone lines")
    g = gcd(b, c)
    b0, c0 = b // g, c // g
    flag = Flag(p_orig, line_orig)
    polygon = branches_mod.newton_polygon(curve, flag)
    side = _side_with_slope(polygon, b0, c0)
    if side is None:
        return Classification(
            "one_ps", pnc_type=None, point=p_orig, line=line_orig,
            b=b0, c=c0, flat=flat,
            reason=f"no Newton polygon side of slope -{b0}/{c0}")
    excluded = branches_mod.side_is_excluded(side)
    return Classification(
        "one_ps", pnc_type="II" if excluded else "IV", point=p_orig,
        line=line_orig, b=b0, c=c0, side=side, flat=flat)
