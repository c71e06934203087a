"""Text formats for curves, points, germs, and contribution lists.

All files share one scalar grammar: integers, fractions `p/q`, the
imaginary unit `i`, and radical symbols introduced by declaration lines

    radical sqrt2^2 = 2

which extend the coefficient tower by a generator (here `sqrt2`) with
the stated power relation.  `i` may be used without declaration; the
tower is extended automatically.  Comments run from `#` to end of line.

Curve files list factors with multiplicities:

    factor: x*(x*z^2 - y^3)^2 - y^5*(4*x*z + y^2) ^ 1

The trailing ` ^ <integer>` (whitespace around the caret) is the factor
multiplicity and defaults to 1; carets inside the polynomial are written
without surrounding whitespace.

Point files list points, optional tangent-line hints (attached to the
preceding point), and optional witness points for smooth-point
constructions:

    point: (1 : 0 : 0)
    tangent: z
    witness: (1 : 1 : 1)

Germ files give the nine matrix entries row-major, separated by commas,
as polynomials in t:

    1, 0, 0, t^8, t^9, 0, t^12, 3/2*t^13, t^14

Contribution files list one correction term per line, either literal
coefficients of H^3..H^8 or a named formula with its arguments:

    contrib: 0 0 0 -577/30 5779/70 -6353/35
    type_I: <m> <n> <mult> <mult> ...
    type_II: <m> <degree> <n>
    flex: <m>
    node: <m1> <m2>
    star: <d>
"""

import re
from fractions import Fraction

from . import orbitdeg
from .curves import XYZ, PlaneCurve, as_point
from .errors import ParseError
from .germs import MatrixGerm, TVAR
from .poly import Poly
from .scalars import QQ

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^():,=])")


def _tokenize(text, line):
    """Tokens (kind, text, line, col) for one logical line of input."""
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos + 1)
        kind = "INT" if m.group(1) else "NAME" if m.group(2) else "OP"
        out.append((kind, m.group(0), line, pos + 1))
        pos = m.end()
    out.append(("EOF", "", line, len(text) + 1))
    return out


class _ExprParser:
    """Recursive-descent parser for polynomial expressions.

    Produces a Poly in `vars` over `tower`; any name that is neither a
    variable nor a tower generator is an error.
    """

    def __init__(self, tokens, vars, tower):
        self.tokens = tokens
        self.pos = 0
        self.vars = vars
        self.tower = tower

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])

    def expect_op(self, op):
        tok = self.next()
        if tok[0] != "OP" or tok[1] != op:
            self.error(f"expected {op!r}", tok)
        return tok

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "EOF":
            self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("OP", "+"), ("OP", "-")):
            op = self.next()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[:2] in (("OP", "*"), ("OP", "/")):
            op_tok = self.next()
            rhs = self.factor()
            if op_tok[1] == "*":
                value = value * rhs
            else:
                if rhs.degree() > 0:
                    self.error("can only divide by a constant", op_tok)
                const = rhs.coefficient((0,) * len(self.vars))
                value = value * self.tower.scalar(const).inverse()
        return value

    def factor(self):
        if self.peek()[:2] == ("OP", "-"):
            self.next()
            return -self.factor()
        if self.peek()[:2] == ("OP", "+"):
            self.next()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("OP", "^"):
            self.next()
            tok = self.next()
            if tok[0] != "INT":
                self.error("exponent must be a nonnegative integer", tok)
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.next()
        if tok[0] == "INT":
            return Poly.constant(self.vars, Fraction(tok[1]), self.tower)
        if tok[0] == "NAME":
            if tok[1] in self.vars:
                return Poly.variable(self.vars, tok[1], self.tower)
            if tok[1] in self.tower.names:
                return Poly.constant(self.vars,
                                     self.tower.generator(tok[1]), self.tower)
            self.error(f"unknown symbol {tok[1]!r}", tok)
        if tok[:2] == ("OP", "("):
            value = self.expr()
            self.expect_op(")")
            return value
        self.error(f"unexpected {tok[1] or 'end of input'!r}", tok)


def _logical_lines(text):
    """(line number, content) pairs with comments and blanks removed."""
    for i, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield i, content


def _needs_i(payloads, tower):
    if "i" in tower.names:
        return False
    for line, content in payloads:
        for kind, txt, _, _ in _tokenize(content, line):
            if kind == "NAME" and txt == "i":
                return True
    return False


def _parse_radical(content, line, tower):
    toks = _tokenize(content, line)
    p = _ExprParser(toks, (), tower)
    name_tok = p.next()
    if name_tok[0] != "NAME":
        p.error("expected a radical name", name_tok)
    p.expect_op("^")
    deg_tok = p.next()
    if deg_tok[0] != "INT":
        p.error("expected the radical degree", deg_tok)
    p.expect_op("=")
    value = p.expr()
    if p.peek()[0] != "EOF":
        p.error(f"unexpected {p.peek()[1]!r}")
    const = tower.scalar(value.coefficient(()))
    try:
        return tower.extend(name_tok[1], int(deg_tok[1]), const)
    except ValueError as exc:
        raise ParseError(str(exc), line) from None


def _split_directives(text, tower):
    """Apply radical declarations; return (tower, remaining lines)."""
    body = []
    for line, content in _logical_lines(text):
        if content.startswith("radical"):
            payload = content[len("radical"):].strip()
            tower = _parse_radical(payload, line, tower)
        else:
            body.append((line, content))
    if _needs_i(body, tower):
        tower = tower.extend("i", 2, QQ.scalar(-1))
    return tower, body


def _parse_poly(content, line, vars, tower):
    return _ExprParser(_tokenize(content, line), vars, tower).parse()


_FACTOR_MULT_RE = re.compile(r"^(.*\S)\s+\^\s+(\d+)$")


def parse_curve(text, tower=None):
    """PlaneCurve from `factor:` lines, with radical declarations applied."""
    tower, body = _split_directives(text, tower or QQ)
    factors = []
    for line, content in body:
        if not content.startswith("factor:"):
            raise ParseError(f"expected a factor line, got {content!r}", line)
        payload = content[len("factor:"):].strip()
        mult = 1
        m = _FACTOR_MULT_RE.match(payload)
        if m:
            payload, mult = m.group(1), int(m.group(2))
        form = _parse_poly(payload, line, XYZ, tower)
        factors.append((form, mult))
    if not factors:
        raise ParseError("no factor lines found", 1)
    return PlaneCurve(factors)


def _parse_point_triple(payload, line, tower):
    toks = _tokenize(payload, line)
    p = _ExprParser(toks, (), tower)
    p.expect_op("(")
    coords = [p.expr()]
    for _ in range(2):
        p.expect_op(":")
        coords.append(p.expr())
    p.expect_op(")")
    if p.peek()[0] != "EOF":
        p.error(f"unexpected {p.peek()[1]!r}")
    return as_point([tower.scalar(c.coefficient(())) for c in coords], tower)


def _covector_of_linear_form(form, line):
    if form.degree() != 1 or not form.is_homogeneous():
        raise ParseError("tangent hint must be a linear form in x, y, z",
                         line)
    exps = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return [form.tower.scalar(form.coefficient(e)) for e in exps]


def parse_points(text, tower=None):
    """(points, witnesses) from `point:` / `tangent:` / `witness:` lines.

    points is a list of (point, tangent hints or None); tangent lines
    attach to the most recent point.
    """
    tower, body = _split_directives(text, tower or QQ)
    points = []
    witnesses = []
    for line, content in body:
        if content.startswith("point:"):
            pt = _parse_point_triple(content[len("point:"):].strip(), line,
                                     tower)
            points.append([pt, None])
        elif content.startswith("tangent:"):
            if not points:
                raise ParseError("tangent line before any point", line)
            form = _parse_poly(content[len("tangent:"):].strip(), line, XYZ,
                               tower)
            cov = _covector_of_linear_form(form, line)
            if points[-1][1] is None:
                points[-1][1] = []
            points[-1][1].append(cov)
        elif content.startswith("witness:"):
            witnesses.append(_parse_point_triple(
                content[len("witness:"):].strip(), line, tower))
        else:
            raise ParseError(f"expected point:, tangent:, or witness:, "
                             f"got {content!r}", line)
    return [(pt, hints) for pt, hints in points], witnesses


def parse_point(text, tower=None):
    """A projective point from a string like `(1 : -4 : -8)`."""
    return _parse_point_triple(text.strip(), 1, tower or QQ)


def parse_linear_form(text, tower=None):
    """A line covector from a linear form string like `y + 2*z`."""
    form = _parse_poly(text.strip(), 1, XYZ, tower or QQ)
    return _covector_of_linear_form(form, 1)


def parse_germ(text, tower=None):
    """MatrixGerm from nine comma-separated polynomials in t."""
    tower, body = _split_directives(text, tower or QQ)
    if not body:
        raise ParseError("empty germ file", 1)
    entries = []
    for line, content in body:
        toks = _tokenize(content, line)
        p = _ExprParser(toks, TVAR, tower)
        while p.peek()[0] != "EOF":
            entries.append(p.expr())
            if p.peek()[:2] == ("OP", ","):
                p.next()
            elif p.peek()[0] != "EOF":
                p.error(f"unexpected {p.peek()[1]!r}")
    if len(entries) != 9:
        raise ParseError(f"expected 9 germ entries, found {len(entries)}",
                         body[0][0])
    rows = [entries[0:3], entries[3:6], entries[6:9]]
    return MatrixGerm(rows)


def _parse_rationals(args, line, count=None, what="argument"):
    parts = args.split()
    if count is not None and len(parts) != count:
        raise ParseError(f"expected {count} {what}s, found {len(parts)}",
                         line)
    out = []
    for p in parts:
        try:
            out.append(Fraction(p))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {p!r}", line) from None
    return out


def _parse_ints(args, line, count=None):
    vals = _parse_rationals(args, line, count)
    for v in vals:
        if v.denominator != 1:
            raise ParseError(f"expected an integer, got {v}", line)
    return [int(v) for v in vals]


def parse_contributions(text):
    """List of correction terms from named-formula or literal lines."""
    out = []
    for line, content in _logical_lines(text):
        if ":" not in content:
            raise ParseError(f"expected '<keyword>: <args>', got {content!r}",
                             line)
        keyword, args = content.split(":", 1)
        keyword = keyword.strip()
        args = args.strip()
        if keyword == "contrib":
            coeffs = _parse_rationals(args, line)
            if not 1 <= len(coeffs) <= 6:
                raise ParseError("contrib takes 1 to 6 coefficients "
                                 "(H^3 .. H^8)", line)
            out.append(orbitdeg.contribution_raw(coeffs))
        elif keyword == "type_I":
            vals = _parse_ints(args, line)
            if len(vals) < 2:
                raise ParseError("type_I takes m, n, then intersection "
                                 "multiplicities", line)
            out.append(orbitdeg.contribution_type_I(vals[0], vals[2:],
                                                    vals[1]))
        elif keyword == "type_II":
            m, delta, n = _parse_ints(args, line, 3)
            out.append(orbitdeg.contribution_type_II(m, delta, n))
        elif keyword == "flex":
            (m,) = _parse_ints(args, line, 1)
            out.append(orbitdeg.contribution_flex(m))
        elif keyword == "node":
            m1, m2 = _parse_ints(args, line, 2)
            out.append(orbitdeg.contribution_node(m1, m2))
        elif keyword == "star":
            (d,) = _parse_ints(args, line, 1)
            out.append(orbitdeg.contribution_star_typeIII(d))
        else:
            raise ParseError(f"unknown contribution keyword {keyword!r}",
                             line)
    return out
