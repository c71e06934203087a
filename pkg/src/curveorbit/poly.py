"""Sparse multivariate polynomials with tower-scalar coefficients.

A Poly carries a tuple of variable names and a dict mapping exponent
tuples to Scalars.  The monomial order used for leading terms and for
printing is graded lexicographic with the variables in their declared
order (so for ('x', 'y', 'z') the order is total degree first, then
x > y > z).
"""

from fractions import Fraction

from .scalars import QQ, Scalar


def _common_tower(towers):
    best = QQ
    for t in towers:
        if len(t.gens) > len(best.gens):
            best = t
    return best


class Poly:
    __slots__ = ("vars", "tower", "terms")

    def __init__(self, vars, terms, tower=None):
        self.vars = tuple(vars)
        towers = [tower] if tower is not None else []
        towers += [c.tower for c in terms.values() if isinstance(c, Scalar)]
        self.tower = _common_tower(towers)
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise ValueError("exponent tuple width mismatch")
            coeff = self.tower.scalar(coeff)
            if not coeff.is_zero():
                if exps in clean:
                    s = clean[exps] + coeff
                    if s.is_zero():
                        del clean[exps]
                    else:
                        clean[exps] = s
                else:
                    clean[exps] = coeff
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, vars, tower=None):
        return cls(vars, {}, tower=tower)

    @classmethod
    def constant(cls, vars, value, tower=None):
        if tower is None and isinstance(value, Scalar):
            tower = value.tower
        if tower is None:
            tower = QQ
        return cls(vars, {(0,) * len(vars): tower.scalar(value)}, tower=tower)

    @classmethod
    def variable(cls, vars, name, tower=None):
        vars = tuple(vars)
        idx = vars.index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(vars)))
        if tower is None:
            tower = QQ
        return cls(vars, {exps: tower.one()}, tower=tower)

    # -- basic queries --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        if not self.terms:
            return -1
        idx = self.vars.index(name)
        return max(e[idx] for e in self.terms)

    def min_degree_in(self, name):
        if not self.terms:
            return None
        idx = self.vars.index(name)
        return min(e[idx] for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.tower.zero())

    def num_terms(self):
        return len(self.terms)

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {other.vars} vs {self.vars}")
            return other
        return Poly.constant(self.vars, other,
                             tower=other.tower if isinstance(other, Scalar) else self.tower)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = terms[e] + c
                if s.is_zero():
                    del terms[e]
                else:
                    terms[e] = s
            else:
                terms[e] = c
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()},
                    tower=self.tower)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if isinstance(other, Scalar) and other.is_zero():
                return Poly.zero(self.vars)
            if not isinstance(other, Scalar) and other == 0:
                return Poly.zero(self.vars)
            return Poly(self.vars,
                        {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if e in out:
                    out[e] = out[e] + c1 * c2
                else:
                    out[e] = c1 * c2
        return Poly(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Poly):
            raise TypeError("polynomial division is not supported here")
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return self * (self.tower.one() / scalar)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.constant(self.vars, 1, tower=self.tower)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Poly.constant(self.vars, other, tower=self.tower)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.vars != other.vars:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        return hash((self.vars, frozenset((e, c) for e, c in self.terms.items())))

    # -- calculus / substitution --------------------------------------------------

    def derivative(self, name):
        idx = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[idx] == 0:
                continue
            ne = list(e)
            ne[idx] -= 1
            out[tuple(ne)] = c * e[idx]
        return Poly(self.vars, out, tower=self.tower)

    def eval(self, values):
        """Evaluate at a point; values maps every variable to a Scalar."""
        tower = _common_tower([self.tower] +
                              [v.tower for v in values.values()
                               if isinstance(v, Scalar)])
        vals = [tower.scalar(values[name]) for name in self.vars]
        acc = tower.zero()
        for e, c in self.terms.items():
            term = tower.scalar(c)
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            acc = acc + term
        return acc

    def subs(self, mapping, result_vars=None):
        """Substitute polynomials (or scalars) for variables.

        Variables not in `mapping` must appear in result_vars and map to
        themselves.
        """
        if result_vars is None:
            result_vars = self.vars
        result_vars = tuple(result_vars)
        images = []
        for name in self.vars:
            if name in mapping:
                img = mapping[name]
                if not isinstance(img, Poly):
                    img = Poly.constant(result_vars, img)
                elif img.vars != result_vars:
                    raise ValueError("substitution image has wrong variables")
            else:
                img = Poly.variable(result_vars, name, tower=self.tower)
            images.append(img)
        acc = Poly.zero(result_vars, tower=self.tower)
        # cache powers per variable
        powers = [{0: Poly.constant(result_vars, 1, tower=self.tower)}
                  for _ in images]
        def power(i, k):
            cache = powers[i]
            if k not in cache:
                half = power(i, k // 2)
                p = half * half
                if k & 1:
                    p = p * images[i]
                cache[k] = p
            return cache[k]
        for e, c in self.terms.items():
            term = Poly.constant(result_vars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def split_by(self, name):
        """Dict exponent -> Poly in the remaining variables."""
        idx = self.vars.index(name)
        rest = tuple(v for v in self.vars if v != name)
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            re = tuple(x for i, x in enumerate(e) if i != idx)
            out.setdefault(k, {})[re] = c
        return {k: Poly(rest, terms, tower=self.tower)
                for k, terms in sorted(out.items())}

    def homogeneous_part(self, k):
        return Poly(self.vars,
                    {e: c for e, c in self.terms.items() if sum(e) == k},
                    tower=self.tower)

    # -- normal form --------------------------------------------------------

    def leading_term(self):
        """(exponent tuple, coefficient) for the graded-lex maximum."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda ex: (sum(ex), ex))
        return e, self.terms[e]

    def normalized(self):
        """(self / leading coefficient, leading coefficient)."""
        if self.is_zero():
            return self, self.tower.zero()
        _, lead = self.leading_term()
        if lead == 1:
            return self, lead
        return self * lead.inverse(), lead

    def monic(self):
        return self.normalized()[0]

    # -- printing --------------------------------------------------------

    def _monomial_str(self, exps):
        parts = []
        for name, e in zip(self.vars, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda ex: (sum(ex), ex), reverse=True)
        chunks = []
        for e in order:
            c = self.terms[e]
            mono = self._monomial_str(e)
            cs = str(c)
            if not mono:
                chunks.append(cs)
            elif cs == "1":
                chunks.append(mono)
            elif cs == "-1":
                chunks.append("-" + mono)
            elif "+" in cs[1:] or "-" in cs[1:]:
                chunks.append(f"({cs})*{mono}")
            else:
                chunks.append(f"{cs}*{mono}")
        return "+".join(chunks).replace("+-", "-")

    def __repr__(self):
        return f"Poly({self})"


def poly_ring(vars, tower=None):
    """Convenience: the variable polynomials plus a constant-maker."""
    vars = tuple(vars)
    gens = [Poly.variable(vars, v, tower=tower) for v in vars]
    return gens
