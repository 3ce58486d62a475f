"""Exact multivariate Laurent polynomials and rational expressions.

Terms are stored in a hash map keyed by integer exponent vectors; all
coefficients are arbitrary-precision Python ints.  The monomial order used
for division and serialization is graded lexicographic.
"""

from __future__ import annotations

import json
import re


class NonExactDivision(ArithmeticError):
    pass


class ZeroPolynomial(ValueError):
    pass


def _grlex_key(exps):
    return (sum(exps), exps)


class LaurentPolynomial:
    """Immutable Laurent polynomial over a fixed tuple of variable names."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        clean = {}
        for e, c in terms.items():
            if c:
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, c):
        n = len(variables)
        return cls(variables, {(0,) * n: c})

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls(variables, {tuple(exps): c})

    @classmethod
    def var(cls, variables, name, power=1):
        i = list(variables).index(name)
        e = [0] * len(variables)
        e[i] = power
        return cls(variables, {tuple(e): 1})

    # -- basics -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_one(self):
        z = (0,) * len(self.vars)
        return self.terms == {z: 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("variable mismatch: %r vs %r" % (self.vars, other.vars))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.const(self.vars, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPolynomial(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.const(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial(
                self.vars, {e: c * other for e, c in self.terms.items()}
            )
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if not self.is_monomial():
                raise NonExactDivision("negative power of a non-monomial")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise NonExactDivision("negative power of non-unit coefficient")
            return LaurentPolynomial(
                self.vars, {tuple(a * k for a in e): 1 if c == 1 or k % 2 == 0 else -1}
            )
        r = LaurentPolynomial.const(self.vars, 1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b if k > 1 else b
            k >>= 1
        return r

    def min_exponents(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no exponents")
        n = len(self.vars)
        mins = [None] * n
        for e in self.terms:
            for i in range(n):
                if mins[i] is None or e[i] < mins[i]:
                    mins[i] = e[i]
        return tuple(mins)

    def shift(self, delta):
        return LaurentPolynomial(
            self.vars,
            {tuple(a + d for a, d in zip(e, delta)): c for e, c in self.terms.items()},
        )

    def leading(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degrees(self):
        return [sum(e) for e in self.terms]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)


def lp_exact_div(p, q):
    """Exact division p / q; raises NonExactDivision on any remainder."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return p
    mp = p.min_exponents()
    mq = q.min_exponents()
    # shift both to genuine polynomials
    P = p.shift(tuple(-a for a in mp))
    Q = q.shift(tuple(-a for a in mq))
    qe, qc = Q.leading()
    quot = {}
    rem = dict(P.terms)
    while rem:
        re_ = max(rem, key=_grlex_key)
        rc = rem[re_]
        de = tuple(a - b for a, b in zip(re_, qe))
        if any(a < 0 for a in de) or rc % qc:
            raise NonExactDivision("non-exact division")
        dc = rc // qc
        quot[de] = dc
        for e2, c2 in Q.terms.items():
            e = tuple(a + b for a, b in zip(de, e2))
            nc = rem.get(e, 0) - dc * c2
            if nc:
                rem[e] = nc
            else:
                rem.pop(e, None)
    shift = tuple(a - b for a, b in zip(mp, mq))
    return LaurentPolynomial(p.vars, quot).shift(shift)


def lp_divides(q, p):
    try:
        lp_exact_div(p, q)
        return True
    except NonExactDivision:
        return False


def lp_substitute_monomial(p, mapping):
    """Substitute each variable by a Laurent monomial (LaurentPolynomial).

    All variables of p must have an image; images share one ambient
    variable tuple, which becomes the result's.
    """
    if not mapping:
        raise ValueError("empty substitution map")
    images = [mapping[v] for v in p.vars]
    tvars = images[0].vars
    ivecs = []
    icoefs = []
    for im in images:
        if im.vars != tvars:
            raise ValueError("substitution images have mismatched variables")
        if not im.is_monomial():
            raise ValueError("substitution image is not a monomial")
        (e, c), = im.terms.items()
        ivecs.append(e)
        icoefs.append(c)
    t = {}
    for e, c in p.terms.items():
        out = [0] * len(tvars)
        coef = c
        for a, vec, vc in zip(e, ivecs, icoefs):
            if a:
                for i, x in enumerate(vec):
                    out[i] += a * x
                if vc != 1:
                    if a < 0 and vc not in (1, -1):
                        raise NonExactDivision("negative power of non-unit coefficient")
                    coef *= vc ** a if a > 0 else vc ** (-a)
        key = tuple(out)
        t[key] = t.get(key, 0) + coef
    return LaurentPolynomial(tvars, t)


def lp_rename(p, new_vars, var_map=None):
    """Re-express p over a new ambient variable tuple by name."""
    idx = []
    for v in p.vars:
        name = var_map.get(v, v) if var_map else v
        idx.append(list(new_vars).index(name))
    t = {}
    for e, c in p.terms.items():
        out = [0] * len(new_vars)
        for a, i in zip(e, idx):
            out[i] += a
        t[tuple(out)] = t.get(tuple(out), 0) + c
    return LaurentPolynomial(new_vars, t)


def lp_denominator_vector(p, n):
    """d_i = -(minimal exponent of variable i over all terms), i < n."""
    if p.is_zero():
        raise ZeroPolynomial("denominator vector of zero")
    mins = p.min_exponents()
    return tuple(-mins[i] for i in range(n))


def lp_canonical_text(p):
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        factors = []
        for name, a in zip(p.vars, e):
            if a == 0:
                continue
            factors.append(name if a == 1 else "%s^%d" % (name, a))
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        text = "*".join(factors)
        if not parts:
            parts.append(text if c > 0 else "-" + text)
        else:
            parts.append(("+ " if c > 0 else "- ") + text)
    return " ".join(parts)


def lp_parse(text, variables):
    """Parse the lp_canonical_text format (also accepts free spacing)."""
    text = text.strip()
    if text == "0":
        return LaurentPolynomial.zero(variables)
    # split into signed terms; '-' inside exponents follows '^'
    tokens = re.findall(r"[+-]|[^+\s-]+", text.replace("^-", "^~"))
    poly = LaurentPolynomial.zero(variables)
    sign = 1
    for tok in tokens:
        if tok == "+":
            sign = 1
            continue
        if tok == "-":
            sign = -1
            continue
        tok = tok.replace("^~", "^-")
        coef = sign
        e = [0] * len(variables)
        for factor in tok.split("*"):
            if re.fullmatch(r"-?\d+", factor):
                coef *= int(factor)
                continue
            m = re.fullmatch(r"([A-Za-z_]\w*(?:\[[^\]]*\])?)(?:\^(-?\d+))?", factor)
            if not m:
                raise ValueError("cannot parse factor %r" % factor)
            name, power = m.group(1), int(m.group(2) or 1)
            e[list(variables).index(name)] += power
        poly = poly + LaurentPolynomial.monomial(variables, e, coef)
        sign = 1
    return poly


def lp_to_json(p):
    return json.dumps(
        [{"e": list(e), "c": str(c)} for e, c in p.sorted_terms()], separators=(",", ":")
    )


def lp_from_json(text, variables):
    data = json.loads(text)
    return LaurentPolynomial(
        variables, {tuple(item["e"]): int(item["c"]) for item in data}
    )


class RationalExpression:
    """Quotient of Laurent polynomials; equality via cross-multiplication.

    Normalization is deliberately gcd-free: we strip common monomial and
    integer content and trial-divide by any supplied factor hints.
    """

    __slots__ = ("num", "den", "factor_hints")

    def __init__(self, num, den, factor_hints=()):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den
        self.factor_hints = tuple(factor_hints)

    @classmethod
    def from_poly(cls, p, hints=()):
        return cls(p, LaurentPolynomial.const(p.vars, 1), hints)

    @property
    def vars(self):
        return self.num.vars

    def simplify(self):
        num, den = self.num, self.den
        if num.is_zero():
            return RationalExpression(
                num, LaurentPolynomial.const(num.vars, 1), self.factor_hints
            )
        # monomial content
        shift = tuple(
            -min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents())
        )
        if any(shift):
            num = num.shift(shift)
            den = den.shift(shift)
        # pure-monomial denominator: fold into numerator exponents
        if den.is_monomial():
            (e, c), = den.terms.items()
            if c in (1, -1) and any(e):
                num = num.shift(tuple(-a for a in e)) * c
                den = LaurentPolynomial.const(num.vars, 1)
        # integer content
        import math

        g = 0
        for c in num.terms.values():
            g = math.gcd(g, c)
        for c in den.terms.values():
            g = math.gcd(g, c)
        if g > 1:
            num = LaurentPolynomial(num.vars, {e: c // g for e, c in num.terms.items()})
            den = LaurentPolynomial(den.vars, {e: c // g for e, c in den.terms.items()})
        # hint trial-division
        changed = True
        while changed:
            changed = False
            for h in self.factor_hints:
                if h.vars != num.vars or h.is_monomial():
                    continue
                while (not den.is_one()) and lp_divides(h, num) and lp_divides(h, den):
                    num = lp_exact_div(num, h)
                    den = lp_exact_div(den, h)
                    changed = True
        return RationalExpression(num, den, self.factor_hints)

    def _hints(self, other):
        hints = list(self.factor_hints)
        for h in getattr(other, "factor_hints", ()):
            if h not in hints:
                hints.append(h)
        return hints

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = _coerce(other, self.vars)
        return RationalExpression(
            self.num * other.num, self.den * other.den, self._hints(other)
        ).simplify()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = _coerce(other, self.vars)
        if other.num.is_zero():
            raise ZeroDivisionError
        return RationalExpression(
            self.num * other.den, self.den * other.num, self._hints(other)
        ).simplify()

    def __add__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = _coerce(other, self.vars)
        return RationalExpression(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
            self._hints(other),
        ).simplify()

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = _coerce(other, self.vars)
        return RationalExpression(
            self.num * other.den - other.num * self.den,
            self.den * other.den,
            self._hints(other),
        ).simplify()

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError
        return RationalExpression(self.den, self.num, self.factor_hints).simplify()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalExpression(self.num ** k, self.den ** k, self.factor_hints)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = _coerce(other, self.vars)
        if not isinstance(other, RationalExpression):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        s = self.simplify()
        return hash((s.num, s.den))

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self):
        s = self.simplify()
        return s.den.is_one()

    def as_laurent(self):
        s = self.simplify()
        if not s.den.is_one():
            p = lp_exact_div(s.num, s.den)
            return p
        return s.num

    def text(self):
        s = self.simplify()
        n = lp_canonical_text(s.num)
        if s.den.is_one():
            return n
        d = lp_canonical_text(s.den)
        if len(s.num.terms) > 1:
            n = "(%s)" % n
        if len(s.den.terms) > 1:
            d = "(%s)" % d
        return "%s / %s" % (n, d)

    def __repr__(self):
        return "RationalExpression(%s)" % self.text()


def _coerce(value, variables):
    if isinstance(value, RationalExpression):
        return value
    if isinstance(value, int):
        value = LaurentPolynomial.const(variables, value)
    return RationalExpression.from_poly(value)
