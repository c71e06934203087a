"""Orbit-degree bookkeeping via truncated generating polynomials in H.

The degree of the orbit closure of a plane curve under the group of
projective transformations is computed from an "adjusted predegree
polynomial": a polynomial in a formal variable H, truncated after H^8
(the dimension of the group).  Every enumerated limit component
contributes a correction term; the assembled polynomial is

    exp(n*H) * (1 + sum of contributions)

where n is the weighted degree of the curve.  The coefficient of
H^dim, times dim!, is the predegree; dividing by the order of the
stabilizer gives the degree of the orbit closure.

The contribution formulas implemented here cover: a line component
(through its intersections with the residual curve), the dual-curve
component of a nonlinear factor, an ordinary flex, an ordinary node,
and the tangent-cone component of a star of lines.  Anything else can
be supplied as literal coefficients with `contribution_raw`.
"""

from fractions import Fraction
from math import factorial

from .errors import ZeroLeadingCoefficient

ORDER = 8


class TruncH:
    """Exact polynomial in H with all terms of degree > 8 dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        cs = [Fraction(0)] * (ORDER + 1)
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for k, v in items:
                if 0 <= k <= ORDER:
                    cs[k] = Fraction(v)
        self.coeffs = cs

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, k, c=1):
        return cls({k: c})

    def coefficient(self, k):
        return self.coeffs[k] if 0 <= k <= ORDER else Fraction(0)

    def degree(self):
        for k in range(ORDER, -1, -1):
            if self.coeffs[k] != 0:
                return k
        return -1

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    # -- ring operations ----------------------------------------------------

    def _as_trunc(self, other):
        if isinstance(other, TruncH):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncH({0: other})
        return None

    def __add__(self, other):
        o = self._as_trunc(other)
        if o is None:
            return NotImplemented
        return TruncH([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncH([-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._as_trunc(other)
        if o is None:
            return NotImplemented
        return TruncH([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._as_trunc(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._as_trunc(other)
        if o is None:
            return NotImplemented
        out = [Fraction(0)] * (ORDER + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if i + j > ORDER:
                    break
                out[i + j] += a * b
        return TruncH(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = TruncH.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def antiderivative(self):
        """Termwise antiderivative with constant term 0, truncated."""
        out = [Fraction(0)] * (ORDER + 1)
        for k in range(ORDER):
            out[k + 1] = self.coeffs[k] / (k + 1)
        return TruncH(out)

    def __eq__(self, other):
        o = self._as_trunc(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"TruncH({self})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "H" if k == 1 else f"H^{k}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def exp_h(c):
    """exp(c*H) truncated after H^8."""
    c = Fraction(c)
    return TruncH({k: c**k / factorial(k) for k in range(ORDER + 1)})


# ---------------------------------------------------------------------------
# contribution formulas


def contribution_type_I(m, intersection_mults, n):
    """Correction term of a line of multiplicity m in a curve of weighted
    degree n, meeting the residual curve with the given multiplicities.

    The antiderivative of -(m^3/2) exp(-nH) H^2 prod(1 + m_i H + m_i^2 H^2/2).
    """
    acc = exp_h(-n) * TruncH.monomial(2, Fraction(-(m**3), 2))
    for mi in intersection_mults:
        acc = acc * TruncH({0: 1, 1: mi, 2: Fraction(mi**2, 2)})
    return acc.antiderivative()


def contribution_type_II(m, delta, n):
    """Correction term of the dual-curve component of a nonlinear factor of
    degree delta and multiplicity m in a curve of weighted degree n."""
    s = -2 * m**5 * delta
    return TruncH({
        5: Fraction(s, 20),
        6: Fraction(-s * (5 * n + 18 * m), 360),
        7: Fraction(s * (9 * n + 8 * m) * m, 420),
        8: Fraction(-s * n * m**2, 60),
    })


def contribution_flex(m):
    """Correction term of an ordinary flex on a factor of multiplicity m."""
    return TruncH({
        6: Fraction(-(m**6), 48),
        7: Fraction(3 * m**7, 70),
        8: Fraction(-197 * m**8, 4480),
    })


def contribution_node(m1, m2):
    """Correction term of one polygon side at an ordinary intersection of
    two branches with multiplicities m1 and m2 (the side of the branch
    tangent to the second factor); a node of two nonlinear branches takes
    this twice, once per side."""
    front = m1 * m2**3 * (m1 + 2 * m2)
    return front * TruncH({
        6: Fraction(-(m1 + m2), 72),
        7: Fraction(20 * m1**2 + 45 * m1 * m2 + 36 * m2**2, 1680),
        8: Fraction(-(10 * m1**3 + 35 * m1**2 * m2
                      + 48 * m1 * m2**2 + 32 * m2**3), 1920),
    })


def contribution_star_typeIII(d):
    """Correction term of the tangent-cone component of a star of d
    reduced concurrent lines."""
    front = Fraction(-(d**2) * (d - 1) * (d - 2) * (d**2 + 3 * d - 3), 30)
    return front * TruncH({
        6: Fraction(1, 24),
        7: Fraction(-d, 28),
        8: Fraction(d * d, 64),
    })


def contribution_raw(coefficients):
    """Literal correction term from the coefficients of H^3 .. H^8."""
    coefficients = list(coefficients)
    if len(coefficients) > 6:
        raise ValueError("expected at most six coefficients (H^3 .. H^8)")
    return TruncH({3 + i: c for i, c in enumerate(coefficients)})


# ---------------------------------------------------------------------------
# assembly


def app_assemble(n, contributions):
    """The adjusted predegree polynomial exp(n*H)(1 + sum of corrections)."""
    total = TruncH.one()
    for c in contributions:
        total = total + c
    return exp_h(n) * total


def predegree_and_degree(app, orbit_dim, stabilizer_order):
    """(predegree, degree) read off an assembled polynomial.

    predegree = orbit_dim! times the coefficient of H^orbit_dim, which must
    be a nonzero integer multiple of 1/orbit_dim!; degree divides out the
    stabilizer order.
    """
    if not 0 <= orbit_dim <= ORDER:
        raise ValueError("orbit dimension out of range")
    c = app.coefficient(orbit_dim)
    if c == 0:
        raise ZeroLeadingCoefficient(
            f"coefficient of H^{orbit_dim} vanishes; the orbit closure has "
            f"smaller dimension")
    pre = factorial(orbit_dim) * c
    assert pre.denominator == 1, "predegree is not an integer"
    pre = int(pre)
    return pre, Fraction(pre, stabilizer_order)
