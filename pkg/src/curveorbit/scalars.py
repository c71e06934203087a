"""Exact arithmetic in towers of radical extensions of the rationals.

A Tower is a chain Q = K_0 < K_1 < ... < K_r where K_j = K_{j-1}(g_j) and
g_j satisfies g_j^(n_j) = c_j with c_j a nonzero element of K_{j-1}.  A
Scalar is stored as a dict mapping reduced exponent tuples (one exponent
per generator, each below its degree) to Fractions.  All arithmetic is
exact; equality is syntactic equality of the canonical form.
"""

from fractions import Fraction

from .errors import RootNotRepresentable, ZeroDivisor

RESERVED_NAMES = {"x", "y", "z", "t", "H"}

# safety valve for automatic tower extension: nth_roots refuses to extend
# for root degrees above this (the CLI exposes it as --max-order)
EXTENSION_ORDER_BOUND = 64


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"cannot coerce {v!r} to a rational number")


class Tower:
    """A chain of radical extensions of Q."""

    def __init__(self, gens=()):
        # each entry: (name, degree, c_items) where c_items is a sorted
        # tuple of (exponent_tuple, Fraction) over the earlier generators
        self.gens = tuple(gens)
        self.names = tuple(g[0] for g in self.gens)

    # -- construction ------------------------------------------------------

    def extend(self, name, degree, c):
        """Return the tower with one more generator g, g^degree = c."""
        if not isinstance(degree, int) or degree < 2:
            raise ValueError("radical degree must be an integer >= 2")
        if name in self.names or name in RESERVED_NAMES:
            raise ValueError(f"generator name {name!r} is taken or reserved")
        if not name.isidentifier():
            raise ValueError(f"generator name {name!r} is not an identifier")
        c = self.scalar(c)
        if c.is_zero():
            raise ValueError("radicand must be nonzero")
        c_items = tuple(sorted(c.terms.items()))
        return Tower(self.gens + ((name, degree, c_items),))

    def scalar(self, v):
        """Coerce an int, Fraction or Scalar into this tower."""
        if isinstance(v, Scalar):
            if v.tower.gens == self.gens:
                return v
            if _is_prefix(v.tower, self):
                return Scalar(self, _pad_terms(v.terms, len(self.gens)))
            raise TypeError("scalar belongs to an incompatible tower")
        f = _as_fraction(v)
        if f == 0:
            return Scalar(self, {})
        return Scalar(self, {self.zero_key(): f})

    def zero(self):
        return Scalar(self, {})

    def one(self):
        return self.scalar(1)

    def zero_key(self):
        return (0,) * len(self.gens)

    def generator(self, name):
        idx = self.names.index(name)
        key = [0] * len(self.gens)
        key[idx] = 1
        return Scalar(self, {tuple(key): Fraction(1)})

    def basis_keys(self):
        """All reduced exponent tuples, in lexicographic order."""
        keys = [()]
        for (_, n, _) in self.gens:
            keys = [k + (e,) for k in keys for e in range(n)]
        return sorted(keys)

    def dimension(self):
        d = 1
        for (_, n, _) in self.gens:
            d *= n
        return d

    def degree_of(self, name):
        for (g, n, _) in self.gens:
            if g == name:
                return n
        raise KeyError(name)

    def __eq__(self, other):
        return isinstance(other, Tower) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        if not self.gens:
            return "Tower(Q)"
        parts = [f"{name}^{n}" for (name, n, _) in self.gens]
        return "Tower(Q; " + ", ".join(parts) + ")"


QQ = Tower()


def _is_prefix(small, big):
    return small.gens == big.gens[: len(small.gens)]


def _pad_terms(terms, width):
    out = {}
    for key, coeff in terms.items():
        out[key + (0,) * (width - len(key))] = coeff
    return out


def _reduce(tower, terms):
    """Rewrite arbitrary exponent tuples into the reduced canonical form."""
    gens = tower.gens
    out = {}
    work = list(terms.items())
    while work:
        exps, coeff = work.pop()
        if coeff == 0:
            continue
        for k in range(len(gens) - 1, -1, -1):
            name, n, c_items = gens[k]
            if exps[k] >= n:
                rem = list(exps)
                rem[k] -= n
                for cexp, ccoeff in c_items:
                    ne = list(rem)
                    for j, e in enumerate(cexp):
                        ne[j] += e
                    work.append((tuple(ne), coeff * ccoeff))
                break
        else:
            acc = out.get(exps, Fraction(0)) + coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
    return out


class Scalar:
    """An element of a radical tower, in canonical reduced form."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower, terms):
        self.tower = tower
        self.terms = terms

    # -- coercion ----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Scalar):
            if other.tower.gens == self.tower.gens:
                return self, other
            if _is_prefix(other.tower, self.tower):
                return self, self.tower.scalar(other)
            if _is_prefix(self.tower, other.tower):
                return other.tower.scalar(self), other
            raise TypeError("scalars from incompatible towers")
        if not isinstance(other, (int, Fraction)):
            return None  # let the other operand's reflected op handle it
        return self, self.tower.scalar(other)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_rational(self):
        zk = self.tower.zero_key()
        return all(k == zk for k in self.terms)

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(self.tower.zero_key(), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = dict(a.terms)
        for k, v in b.terms.items():
            acc = terms.get(k, Fraction(0)) + v
            if acc == 0:
                terms.pop(k, None)
            else:
                terms[k] = acc
        return Scalar(a.tower, terms)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tower, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        raw = {}
        for k1, v1 in a.terms.items():
            for k2, v2 in b.terms.items():
                key = tuple(e1 + e2 for e1, e2 in zip(k1, k2))
                raw[key] = raw.get(key, Fraction(0)) + v1 * v2
        return Scalar(a.tower, _reduce(a.tower, raw))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisor("division by zero")
        if self.is_rational():
            return self.tower.scalar(1 / self.as_fraction())
        tower = self.tower
        basis = tower.basis_keys()
        index = {k: i for i, k in enumerate(basis)}
        n = len(basis)
        # columns of the multiplication-by-self matrix
        mat = [[Fraction(0)] * n for _ in range(n)]
        for j, bk in enumerate(basis):
            prod = self * Scalar(tower, {bk: Fraction(1)})
            for k, v in prod.terms.items():
                mat[index[k]][j] = v
        rhs = [Fraction(0)] * n
        rhs[index[tower.zero_key()]] = Fraction(1)
        sol = _solve_fraction_system(mat, rhs)
        if sol is None:
            raise ZeroDivisor(f"{self} is a zero divisor in {tower}")
        terms = {basis[i]: sol[i] for i in range(n) if sol[i] != 0}
        return Scalar(tower, terms)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if b.is_rational():
            f = b.as_fraction()
            if f == 0:
                raise ZeroDivisor("division by zero")
            return Scalar(a.tower, {k: v / f for k, v in a.terms.items()})
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b / a

    def __pow__(self, e):
        if not isinstance(e, int):
            raise TypeError("scalar powers must be integers")
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower.scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        try:
            a, b = self._pair(other)
        except TypeError:
            return False
        return a.terms == b.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    def __hash__(self):
        trimmed = []
        for k, v in self.terms.items():
            while k and k[-1] == 0:
                k = k[:-1]
            trimmed.append((k, v))
        return hash(frozenset(trimmed))

    # -- printing ------------------------------------------------------------

    def _monomial_str(self, key):
        parts = []
        for name, e in zip(self.tower.names, key):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms):
            coeff = self.terms[key]
            mono = self._monomial_str(key)
            if not mono:
                chunks.append(str(coeff))
            elif coeff == 1:
                chunks.append(mono)
            elif coeff == -1:
                chunks.append("-" + mono)
            else:
                chunks.append(f"{coeff}*{mono}")
        out = "+".join(chunks)
        return out.replace("+-", "-")

    def __repr__(self):
        return f"Scalar({self})"


def _solve_fraction_system(mat, rhs):
    """Solve a square Fraction system by Gaussian elimination.

    Returns the solution vector, or None if the matrix is singular.
    """
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# roots of unity


def root_of_unity_order(u, max_order):
    """Smallest k <= max_order with u^k == 1, or None."""
    if not isinstance(u, Scalar):
        raise TypeError("expected a Scalar")
    if u.is_zero():
        return None
    p = u
    for k in range(1, max_order + 1):
        if p == 1:
            return k
        p = p * u
    return None


def _fraction_nth_root(f, n):
    """Exact n-th root of a Fraction, or None."""
    if f == 0:
        return Fraction(0)
    if f < 0:
        if n % 2 == 0:
            return None
        r = _fraction_nth_root(-f, n)
        return None if r is None else -r

    def iroot(m):
        if m in (0, 1):
            return m
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1, r + 2):
            if cand >= 0 and cand**n == m:
                return cand
        # float guess can be far off for big m; fall back to binary search
        lo, hi = 0, 1 << ((m.bit_length() // n) + 2)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid**n
            if p == m:
                return mid
            if p < m:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    a = iroot(f.numerator)
    if a is None:
        return None
    b = iroot(f.denominator)
    if b is None:
        return None
    return Fraction(a, b)


def find_sqrt(tower, value):
    """A square root of `value` in `tower`, or None.

    Searches candidates of the form (rational) * (basis monomial) and, when
    the tower contains i, the Gaussian-rational rule for a + b*i.
    """
    value = tower.scalar(value)
    if value.is_zero():
        return tower.zero()
    if value.is_rational():
        r = _fraction_nth_root(value.as_fraction(), 2)
        if r is not None:
            return tower.scalar(r)
    for key in tower.basis_keys():
        mono = Scalar(tower, {key: Fraction(1)})
        sq = mono * mono
        if sq.is_zero():
            continue
        if not sq.is_rational():
            continue
        q = value / sq
        if q.is_rational():
            r = _fraction_nth_root(q.as_fraction(), 2)
            if r is not None:
                return tower.scalar(r) * mono
    # Gaussian rule: sqrt(a + b*i) with a, b rational
    if "i" in tower.names:
        i = tower.generator("i")
        idx = tower.names.index("i")
        a = Fraction(0)
        b = Fraction(0)
        gaussian = True
        for key, coeff in value.terms.items():
            stripped = list(key)
            e = stripped[idx]
            stripped[idx] = 0
            if any(stripped):
                gaussian = False
                break
            if e == 0:
                a = coeff
            elif e == 1:
                b = coeff
            else:
                gaussian = False
                break
        if gaussian and b != 0:
            s = _fraction_nth_root(a * a + b * b, 2)
            if s is not None:
                for disc in (a + s, a - s):
                    xx = disc / 2
                    xr = _fraction_nth_root(xx, 2)
                    if xr is not None and xr != 0:
                        yr = b / (2 * xr)
                        return tower.scalar(xr) + tower.scalar(yr) * i
    return None


def _primitive_root_of_unity(tower, d):
    """A primitive d-th root of unity in `tower`, or None.

    Covers the orders whose cyclotomic field is at most quadratic over a
    quadratic field: 1, 2, 3, 4, 6, 8, 12.
    """
    one = tower.one()
    if d == 1:
        return one
    if d == 2:
        return -one
    if d == 3:
        s = find_sqrt(tower, -3)
        return None if s is None else (s - 1) / 2
    if d == 4:
        return find_sqrt(tower, -1)
    if d == 6:
        s = find_sqrt(tower, -3)
        return None if s is None else (s + 1) / 2
    if d == 8:
        i = find_sqrt(tower, -1)
        s2 = find_sqrt(tower, 2)
        if i is None or s2 is None:
            return None
        return s2 * (one + i) / 2
    if d == 12:
        i = find_sqrt(tower, -1)
        s3 = find_sqrt(tower, 3)
        if i is None or s3 is None:
            return None
        return (s3 + i) / 2
    return None


def roots_of_unity(tower, n):
    """All n-th roots of unity available in `tower`, deterministic order."""
    found = [tower.one()]
    for d in range(2, n + 1):
        if n % d:
            continue
        zeta = _primitive_root_of_unity(tower, d)
        if zeta is None:
            continue
        p = zeta
        for _ in range(d - 1):
            if not any(p == q for q in found):
                found.append(p)
            p = p * zeta
    # close under products (catches orders like 24 = 8 * 3)
    changed = True
    while changed and len(found) < n:
        changed = False
        for p in list(found):
            for q in list(found):
                r = p * q
                if not any(r == s for s in found):
                    found.append(r)
                    changed = True
    return found


def _unity_extension_values(n):
    """Rationals whose square roots make all n-th roots of unity available,
    or None when n has a prime factor other than 2 and 3."""
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    b = 0
    while n % 3 == 0:
        n //= 3
        b += 1
    if n != 1:
        return None
    vals = []
    if a >= 2:
        vals.append(Fraction(-1))
    if a >= 3:
        vals.append(Fraction(2))
    if b >= 1:
        vals.append(Fraction(-3))
    return vals


def extend_for_roots_of_unity(tower, n):
    """Extend `tower` so that all n-th roots of unity exist, or return None
    when that is outside the supported radical chains."""
    vals = _unity_extension_values(n)
    if vals is None:
        return None
    for v in vals:
        if find_sqrt(tower, tower.scalar(v)) is not None:
            continue
        if v == -1 and "i" not in tower.names:
            name = "i"
        else:
            name = _fresh_radical_name(tower, tower.scalar(v), 2)
        tower = tower.extend(name, 2, v)
    return tower


def _find_one_root(tower, c, n):
    """One n-th root of c in `tower`, or None.  c is a nonzero Scalar."""
    if c.is_rational():
        r = _fraction_nth_root(c.as_fraction(), n)
        if r is not None:
            return tower.scalar(r)
    if n == 2:
        s = find_sqrt(tower, c)
        if s is not None:
            return s
    # candidates (rational) * (basis monomial)
    for key in tower.basis_keys():
        if not any(key):
            continue
        mono = Scalar(tower, {key: Fraction(1)})
        mn = mono**n
        if mn.is_zero():
            continue
        try:
            q = c / mn
        except ZeroDivisor:
            continue
        if q.is_rational():
            r = _fraction_nth_root(q.as_fraction(), n)
            if r is not None:
                return tower.scalar(r) * mono
    # composite degree: peel one prime at a time
    if n > 3:
        for p in range(2, n):
            if n % p == 0:
                inner = _find_one_root(tower, c, p)
                if inner is not None:
                    outer = _find_one_root(tower, inner, n // p)
                    if outer is not None:
                        return outer
                break
    return None


def _fresh_radical_name(tower, c, n):
    if n == 2 and c.is_rational():
        f = c.as_fraction()
        if f.denominator == 1:
            name = f"sqrt{f.numerator}" if f > 0 else f"sqrtm{-f.numerator}"
            if name not in tower.names and name not in RESERVED_NAMES:
                return name
    k = 0
    while True:
        name = f"r{k}"
        if name not in tower.names and name not in RESERVED_NAMES:
            return name
        k += 1


def _power_free_reduce(f, n):
    """Split a rational f as scale**n * core with core free of n-th powers.

    Only primes up to 10**6 are tried, so very large prime-power content may
    stay inside core; that only costs a clumsier generator name.
    """

    def split(m):
        s, r, p = 1, 1, 2
        while p * p <= m and p <= 10**6:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                s *= p ** (e // n)
                r *= p ** (e % n)
            p += 1 if p == 2 else 2
        return s, r * m

    sn, rn = split(abs(f.numerator))
    sd, rd = split(f.denominator)
    scale = Fraction(sn, sd)
    core = Fraction(rn, rd)
    if f < 0:
        if n % 2 == 1:
            scale = -scale
        else:
            core = -core
    return scale, core


def nth_roots(c, n, allow_extension=False):
    """All n-th roots of c available in (an extension of) its tower.

    Returns a list of Scalars.  With allow_extension the tower is extended
    by one radical generator when no root exists in it; the returned roots
    then live in the extended tower.  Raises RootNotRepresentable when no
    root exists and extension is not allowed.
    """
    if not isinstance(c, Scalar):
        raise TypeError("expected a Scalar")
    if not isinstance(n, int) or n < 1:
        raise ValueError("root degree must be a positive integer")
    tower = c.tower
    if n == 1:
        return [c]
    if c.is_zero():
        return [tower.zero()]
    root = _find_one_root(tower, c, n)
    if root is None:
        if not allow_extension:
            raise RootNotRepresentable(f"no {n}-th root of {c} in {tower}")
        if n > EXTENSION_ORDER_BOUND:
            raise RootNotRepresentable(
                f"root degree {n} exceeds the extension bound "
                f"{EXTENSION_ORDER_BOUND}")
        scale, core = Fraction(1), c
        if c.is_rational():
            sf, cf = _power_free_reduce(c.as_fraction(), n)
            scale, core = sf, tower.scalar(cf)
        if n == 2 and core == -1 and "i" not in tower.names:
            name = "i"
        else:
            name = _fresh_radical_name(tower, core, n)
        tower = tower.extend(name, n, core)
        root = tower.generator(name) * scale
    units = roots_of_unity(root.tower, n)
    if len(units) < n and allow_extension:
        bigger = extend_for_roots_of_unity(root.tower, n)
        if bigger is not None:
            root = bigger.scalar(root)
            units = roots_of_unity(bigger, n)
    out = []
    for u in units:
        r = root * u
        if not any(r == s for s in out):
            out.append(r)
    for r in out:
        assert r**n == c, "root verification failed"
    return out


# ---------------------------------------------------------------------------
# univariate root solving (scope: linear, quadratic, binomial, and rational
# root deflation)


def _rational_root_candidates(coeffs):
    """Rational root candidates for a polynomial with rational coefficients."""
    from math import lcm

    den = lcm(*[c.as_fraction().denominator for c in coeffs])
    ints = [int(c.as_fraction() * den) for c in coeffs]
    lead = ints[-1]
    # strip trailing zero content already handled by caller (ints[0] != 0)
    const = ints[0]
    if abs(const) > 10**8 or abs(lead) > 10**8:
        return []

    def divisors(m):
        m = abs(m)
        out = []
        k = 1
        while k * k <= m:
            if m % k == 0:
                out.append(k)
                out.append(m // k)
            k += 1
        return sorted(set(out))

    cands = []
    for p in divisors(const):
        for q in divisors(lead):
            for sign in (1, -1):
                f = Fraction(sign * p, q)
                if f not in cands:
                    cands.append(f)
    return cands


def univariate_roots(coeffs, allow_extension=False):
    """Roots (with multiplicity) of sum coeffs[k] * X^k over the tower.

    coeffs is a list of Scalars (index = exponent).  Raises
    RootNotRepresentable when the full root multiset cannot be produced
    with the supported solvers (linear, quadratic, binomial, rational
    root deflation).
    """
    coeffs = list(coeffs)
    if not coeffs or all(c.is_zero() for c in coeffs):
        raise ValueError("zero polynomial has no well-defined root multiset")
    tower = coeffs[-1].tower
    for c in coeffs:
        if isinstance(c, Scalar) and len(c.tower.gens) > len(tower.gens):
            tower = c.tower
    coeffs = [tower.scalar(c) for c in coeffs]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    roots = []
    # factor out X^v
    v = 0
    while coeffs[v].is_zero():
        v += 1
    roots.extend([tower.zero()] * v)
    coeffs = coeffs[v:]
    deg = len(coeffs) - 1
    if deg == 0:
        return roots
    if deg == 1:
        roots.append(-coeffs[0] / coeffs[1])
        return roots
    if deg == 2:
        a, b, c2 = coeffs[2], coeffs[1], coeffs[0]
        disc = b * b - 4 * a * c2
        if disc.is_zero():
            r = -b / (2 * a)
            roots.extend([r, r])
            return roots
        sq = nth_roots(disc, 2, allow_extension=allow_extension)[0]
        roots.append((-b + sq) / (2 * a))
        roots.append((-b - sq) / (2 * a))
        return roots
    if all(c.is_zero() for c in coeffs[1:-1]):
        # binomial: X^deg = -c0/clead
        target = -coeffs[0] / coeffs[-1]
        rs = nth_roots(target, deg, allow_extension=allow_extension)
        if len(rs) != deg:
            raise RootNotRepresentable(
                f"only {len(rs)} of {deg} roots of X^{deg} = {target} available"
            )
        roots.extend(rs)
        return roots
    # rational root deflation
    if all(c.is_rational() for c in coeffs):
        for cand in _rational_root_candidates(coeffs):
            r = tower.scalar(cand)
            val = tower.zero()
            for c in reversed(coeffs):
                val = val * r + c
            if val.is_zero():
                # synthetic division by (X - r)
                quot = []
                acc = coeffs[deg]
                for k in range(deg - 1, -1, -1):
                    quot.append(acc)
                    acc = coeffs[k] + acc * r
                quot.reverse()
                roots.append(r)
                roots.extend(univariate_roots(quot, allow_extension=allow_extension))
                return roots
    raise RootNotRepresentable(
        "polynomial is outside the supported solver scope "
        "(linear, quadratic, binomial, rational-root deflation)"
    )
