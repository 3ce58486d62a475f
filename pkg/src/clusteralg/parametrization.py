"""Denominator-vector and g-vector parametrizations of cluster monomials."""

from __future__ import annotations

from fractions import Fraction

from .laurent import lp_denominator_vector
from .mutation import matrix, mutate_matrix
from .principal import CrossCheckFailure, PrincipalPattern, _pos
from .semifield import TropicalSemifield, trop_eval_positive_poly


class RankDeficient(ValueError):
    pass


class NotInM(ValueError):
    pass


def d_vector(B0, path, ell, pattern=None):
    """Denominator vector at (path, ell), by Laurent extraction and by the
    max-recurrence; the two routes must agree."""
    pat = pattern if pattern is not None else PrincipalPattern(B0)
    n = pat.n
    extracted = lp_denominator_vector(pat.state(path)["X"][ell - 1], n)
    # recurrence along the path
    d = [tuple(-1 if i == l else 0 for i in range(n)) for l in range(n)]
    Bt = pat.state(())["Btilde"]
    for k in path:
        kk = k - 1
        plus = [0] * n
        minus = [0] * n
        for i in range(n):
            b = Bt[i][kk]
            if b > 0:
                for r in range(n):
                    plus[r] += b * d[i][r]
            elif b < 0:
                for r in range(n):
                    minus[r] += (-b) * d[i][r]
        d[kk] = tuple(
            -d[kk][r] + max(plus[r], minus[r]) for r in range(n)
        )
        Bt = mutate_matrix(Bt, k)
    if extracted != d[ell - 1]:
        raise CrossCheckFailure("denominator-vector routes disagree")
    return extracted


def _integer_rank(rows):
    """Exact rank by fraction-free elimination over rationals."""
    M = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    cols = len(M[0]) if M else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(M)):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        rank += 1
    return rank


def _solve_integer(columns, target):
    """Solve sum_j c_j * columns[j] = target over the integers, or None."""
    m = len(target)
    n = len(columns)
    A = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(m)]
    r = 0
    pivots = []
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [a / A[r][c] for a in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    # consistency
    for i in range(r, m):
        if A[i][n]:
            return None
    sol = [Fraction(0)] * n
    for row, c in enumerate(pivots):
        sol[c] = A[row][n]
    if any(s.denominator != 1 for s in sol):
        return None
    return tuple(int(s) for s in sol)


def g_vector_general(Btilde, z):
    """g-vector of z (a RationalExpression over the m ambient variables at
    one vertex) via the unique primitive hatted-coefficient presentation."""
    Bt = matrix(Btilde)
    m = len(Bt)
    n = len(Bt[0])
    cols = [tuple(Bt[i][j] for i in range(m)) for j in range(n)]
    if _integer_rank(Bt) != n:
        raise RankDeficient("extended matrix does not have full rank")

    def reduce_part(poly):
        if poly.is_zero():
            raise NotInM("zero has no presentation")
        terms = list(poly.terms)
        base = terms[0]
        gammas = []
        for e in terms:
            diff = tuple(a - b for a, b in zip(e, base))
            sol = _solve_integer(cols, diff)
            if sol is None:
                raise NotInM("term exponents do not differ by coefficient columns")
            gammas.append(sol)
        mins = tuple(min(g[j] for g in gammas) for j in range(n))
        # base exponent of the primitive polynomial part
        off = list(base)
        for j in range(n):
            if mins[j]:
                for i in range(m):
                    off[i] += mins[j] * cols[j][i]
        return tuple(off)

    s = z.simplify()
    en = reduce_part(s.num)
    ed = reduce_part(s.den)
    return tuple(en[i] - ed[i] for i in range(n))


def monomial_vectors(B0, path, a, pattern=None):
    """(denominator vector, g-vector) of the cluster monomial with
    exponents a at the end of path."""
    pat = pattern if pattern is not None else PrincipalPattern(B0)
    n = pat.n
    if any(ai < 0 for ai in a):
        raise ValueError("cluster-monomial exponents must be nonnegative")
    d = [0] * n
    g = [0] * n
    for ell in range(1, n + 1):
        if not a[ell - 1]:
            continue
        dl = d_vector(B0, path, ell, pat)
        gl = pat.g_value(path, ell)
        for r in range(n):
            d[r] += a[ell - 1] * dl[r]
            g[r] += a[ell - 1] * gl[r]
    return tuple(d), tuple(g)


def d_g_relation_check(B0, path, ell, pattern=None):
    """Exact d+g tropical-F identity plus the conjectural pure-d form."""
    pat = pattern if pattern is not None else PrincipalPattern(B0)
    n = pat.n
    B0 = pat.B0
    st = pat.state(path)
    F = st["F"][ell - 1]
    g = st["g"][ell - 1]
    d = lp_denominator_vector(st["X"][ell - 1], n)
    S = TropicalSemifield(tuple("u%d" % (i + 1) for i in range(n)))
    assign = {
        pat.yvars[j]: S.monomial(tuple(B0[i][j] for i in range(n)))
        for j in range(n)
    }
    exact = trop_eval_positive_poly(F, assign).exps == tuple(
        -d[i] - g[i] for i in range(n)
    )
    conjectural = None
    if not st["X"][ell - 1].is_monomial():
        inv = {
            pat.yvars[j]: S.monomial(tuple(-1 if i == j else 0 for i in range(n)))
            for j in range(n)
        }
        conjectural = trop_eval_positive_poly(F, inv).exps == tuple(
            -d[i] for i in range(n)
        )
    return {"exact_d_plus_g": exact, "conjectural_d": conjectural}
