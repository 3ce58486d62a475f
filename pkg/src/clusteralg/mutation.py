"""Exchange matrices, extended matrices, labeled seeds, and mutation rules.

Matrices are immutable tuples of row tuples (m rows, n columns, m >= n);
the top n x n block is the exchange matrix proper, rows below it encode
geometric coefficients.  Directions are 1-based throughout.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .laurent import LaurentPolynomial, RationalExpression, lp_exact_div
from .semifield import TropicalSemifield


class NotSkewSymmetrizable(ValueError):
    pass


class SizeGuardExceeded(RuntimeError):
    pass


def _pos(a):
    return a if a > 0 else 0


def _sgn(a):
    return (a > 0) - (a < 0)


def matrix(rows):
    return tuple(tuple(int(v) for v in row) for row in rows)


def matrix_columns(M, n=None):
    n = n if n is not None else len(M[0])
    return [tuple(row[j] for row in M) for j in range(n)]


def principal_part(M, n):
    return tuple(row for row in M[:n])


def skew_symmetrizer(B):
    """Minimal positive integer d with d_i b_ij = -d_j b_ji, per component."""
    n = len(B)
    for i in range(n):
        if len(B[i]) != n:
            raise ValueError("exchange matrix must be square")
        if B[i][i] != 0:
            raise NotSkewSymmetrizable("nonzero diagonal entry")
        for j in range(n):
            if (B[i][j] == 0) != (B[j][i] == 0):
                raise NotSkewSymmetrizable("zero pattern is not symmetric")
            if B[i][j] * B[j][i] > 0:
                raise NotSkewSymmetrizable("entries b_ij, b_ji have equal signs")
    d = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        comp = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                w = d[i] * Fraction(B[i][j], -B[j][i])
                if d[j] is None:
                    d[j] = w
                    comp.append(j)
                    stack.append(j)
                elif d[j] != w:
                    raise NotSkewSymmetrizable("inconsistent symmetrizer weights")
        # scale the component to minimal positive integers
        lcm = 1
        for i in comp:
            q = d[i].denominator
            lcm = lcm * q // _gcd(lcm, q)
        vals = [int(d[i] * lcm) for i in comp]
        g = 0
        for v in vals:
            g = _gcd(g, v)
        for i, v in zip(comp, vals):
            d[i] = v // g
    d = tuple(int(x) for x in d)
    for i in range(n):
        for j in range(n):
            if d[i] * B[i][j] != -d[j] * B[j][i]:
                raise NotSkewSymmetrizable("symmetrizer check failed")
    return d


def _gcd(a, b):
    import math

    return math.gcd(a, b)


def mutate_matrix(M, k):
    """Matrix mutation in direction k (1-based), applied to all m rows.

    Both standard formulas are computed and asserted equal.
    """
    kk = k - 1
    m = len(M)
    n = len(M[0])
    out1 = []
    out2 = []
    for i in range(m):
        row1 = []
        row2 = []
        for j in range(n):
            b = M[i][j]
            if i == kk or j == kk:
                row1.append(-b)
                row2.append(-b)
            else:
                bik = M[i][kk]
                bkj = M[kk][j]
                row1.append(b + _sgn(bik) * _pos(bik * bkj))
                row2.append(b + _pos(-bik) * bkj + bik * _pos(bkj))
        out1.append(tuple(row1))
        out2.append(tuple(row2))
    if out1 != out2:
        raise AssertionError("matrix mutation formulas disagree")
    return tuple(out1)


class LabeledYSeed:
    __slots__ = ("y", "B", "S")

    def __init__(self, y, B, S):
        self.y = tuple(y)
        self.B = matrix(B)
        self.S = S
        if len(self.y) != len(self.B):
            raise ValueError("coefficient tuple length mismatch")


def mutate_y(ys, k):
    """Y-seed mutation: y'_k = 1/y_k; y'_j = y_j y_k^{[b_kj]+} (y_k+1)^{-b_kj}."""
    S = ys.S
    kk = k - 1
    yk = ys.y[kk]
    yk1 = S.oplus(yk, S.one())
    new = []
    for j, yj in enumerate(ys.y):
        if j == kk:
            new.append(S.inverse(yk))
        else:
            bkj = ys.B[kk][j]
            v = S.mul(yj, S.power(yk, _pos(bkj)))
            v = S.mul(v, S.power(yk1, -bkj))
            new.append(v)
    return LabeledYSeed(new, mutate_matrix(ys.B, k), S)


class LabeledSeedGeometric:
    """Cluster of Laurent polynomials in m ambient variables + extended matrix."""

    __slots__ = ("x", "Btilde", "n", "vars")

    def __init__(self, x, Btilde, n, variables):
        self.x = tuple(x)
        self.Btilde = matrix(Btilde)
        self.n = n
        self.vars = tuple(variables)
        if len(self.x) != n or len(self.Btilde[0]) != n:
            raise ValueError("cluster/matrix size mismatch")
        if len(self.Btilde) != len(self.vars):
            raise ValueError("ambient variable count mismatch")
        skew_symmetrizer(principal_part(self.Btilde, n))

    def frozen_monomial(self, i):
        """The ambient variable with index i (0-based) as a Laurent monomial."""
        e = [0] * len(self.vars)
        e[i] = 1
        return LaurentPolynomial.monomial(self.vars, e)

    def tropical_y(self):
        """Coefficient tuple read off the bottom rows, in Trop(frozen vars)."""
        frozen = self.vars[self.n:]
        S = TropicalSemifield(frozen)
        ys = []
        for j in range(self.n):
            ys.append(S.monomial(tuple(self.Btilde[i][j] for i in range(self.n, len(self.vars)))))
        return LabeledYSeed(ys, principal_part(self.Btilde, self.n), S)


def initial_geometric_seed(Btilde, variables=None):
    Bt = matrix(Btilde)
    m = len(Bt)
    n = len(Bt[0])
    if variables is None:
        variables = tuple("x%d" % (i + 1) for i in range(m))
    x = []
    for ell in range(n):
        e = [0] * m
        e[ell] = 1
        x.append(LaurentPolynomial.monomial(variables, e))
    return LabeledSeedGeometric(x, Bt, n, variables)


def mutate_seed_geometric(seed, k):
    """Geometric exchange: x'_k = (prod v^{[b_ik]+} + prod v^{[-b_ik]+}) / x_k."""
    kk = k - 1
    m = len(seed.vars)
    n = seed.n
    plus = LaurentPolynomial.const(seed.vars, 1)
    minus = LaurentPolynomial.const(seed.vars, 1)
    for i in range(m):
        b = seed.Btilde[i][kk]
        if b == 0:
            continue
        v = seed.x[i] if i < n else seed.frozen_monomial(i)
        if b > 0:
            plus = plus * v ** b
        else:
            minus = minus * v ** (-b)
    new_xk = lp_exact_div(plus + minus, seed.x[kk])
    x = list(seed.x)
    x[kk] = new_xk
    return LabeledSeedGeometric(x, mutate_matrix(seed.Btilde, k), n, seed.vars)


def mutate_seed_rational_oracle(x, ys, k, max_rank=3, max_steps=8, _step_budget=None):
    """General exchange relation over explicit rational functions.

    Desk-scale oracle: x'_k = (y_k prod x^{[b_ik]+} + prod x^{[-b_ik]+})
    / ((y_k + 1) x_k), coefficients mutated in the universal semifield.
    """
    n = len(ys.B)
    if n > max_rank:
        raise SizeGuardExceeded("oracle limited to rank <= %d" % max_rank)
    kk = k - 1
    S = ys.S
    yk = ys.y[kk]
    yk1 = S.oplus(yk, S.one())
    plus = yk
    minus = S.one()
    for i in range(n):
        b = ys.B[i][kk]
        if b > 0:
            plus = plus * x[i] ** b
        elif b < 0:
            minus = minus * x[i] ** (-b)
    new_xk = (plus + minus) / (yk1 * x[kk])
    out = list(x)
    out[kk] = new_xk
    return tuple(out), mutate_y(ys, k)


def oracle_walk(Btilde_or_B, path, S, max_rank=3, max_steps=8):
    """Iterate the rational-function oracle along a path from the initial seed."""
    if len(path) > max_steps:
        raise SizeGuardExceeded("oracle limited to paths of length <= %d" % max_steps)
    B = matrix(Btilde_or_B)
    n = len(B[0])
    B = principal_part(B, n)
    xs = tuple(S.generator("x%d" % (i + 1)) for i in range(n))
    y0 = tuple(S.generator("y%d" % (j + 1)) for j in range(n))
    ys = LabeledYSeed(y0, B, S)
    for k in path:
        xs, ys = mutate_seed_rational_oracle(xs, ys, k, max_rank=max_rank)
    return xs, ys


def cartan_counterpart_and_sign(B):
    """Cartan counterpart a_ij = -|b_ij| (a_ii = 2) and the bipartite sign.

    Returns (A, eps) with eps=None when the matrix is not bipartite.  Signs
    are forced by b_ij > 0 => eps(i) = +1, eps(j) = -1; unforced components
    (in particular isolated vertices) take +1 on their least index.
    """
    n = len(B)
    A = tuple(
        tuple(2 if i == j else -abs(B[i][j]) for j in range(n)) for i in range(n)
    )
    eps = [0] * n
    ok = True
    for root in range(n):
        if eps[root]:
            continue
        comp = [root]
        eps[root] = 1
        stack = [root]
        forced = 0
        while stack and ok:
            i = stack.pop()
            for j in range(n):
                if j == i or B[i][j] == 0:
                    continue
                want = -eps[i]
                if B[i][j] != 0:
                    if eps[j] == 0:
                        eps[j] = want
                        comp.append(j)
                        stack.append(j)
                    elif eps[j] != want:
                        ok = False
                        break
        if not ok:
            break
        # orient the two-coloring: forced by any positive entry, else +1 root
        flip = False
        for i in comp:
            for j in range(n):
                if B[i][j] > 0:
                    if eps[i] == -1:
                        flip = True
                    forced += 1
        if flip:
            for i in comp:
                eps[i] = -eps[i]
        # consistency of all forced signs
        for i in comp:
            for j in range(n):
                if B[i][j] > 0 and (eps[i] != 1 or eps[j] != -1):
                    ok = False
    if not ok:
        return A, None
    return A, tuple(eps)


# -- named types ----------------------------------------------------------

CARTAN = {}


def _path_cartan(n):
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n))
        for i in range(n)
    )


CARTAN["A1"] = _path_cartan(1)
CARTAN["A2"] = _path_cartan(2)
CARTAN["A3"] = _path_cartan(3)
CARTAN["A4"] = _path_cartan(4)
CARTAN["B2"] = ((2, -1), (-2, 2))
CARTAN["B3"] = ((2, -1, 0), (-1, 2, -1), (0, -2, 2))
CARTAN["C3"] = ((2, -1, 0), (-1, 2, -2), (0, -1, 2))
CARTAN["G2"] = ((2, -1), (-3, 2))
CARTAN["D4"] = (
    (2, -1, 0, 0),
    (-1, 2, -1, -1),
    (0, -1, 2, 0),
    (0, -1, 0, 2),
)
CARTAN["E8"] = None  # filled below
CARTAN["A1xA1"] = ((2, 0), (0, 2))


def _e_cartan(n):
    # nodes 1..n-1 form a path; node n attaches to node 3 (Bourbaki E-series)
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 2):
        A[i][i + 1] = A[i + 1][i] = -1
    A[2][n - 1] = A[n - 1][2] = -1
    return tuple(tuple(r) for r in A)


CARTAN["E6"] = _e_cartan(6)
CARTAN["E7"] = _e_cartan(7)
CARTAN["E8"] = _e_cartan(8)


def bipartite_sign_from_cartan(A):
    """Two-coloring of the Coxeter graph, +1 on least index per component."""
    n = len(A)
    eps = [0] * n
    for root in range(n):
        if eps[root]:
            continue
        eps[root] = 1
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and A[i][j] != 0:
                    if eps[j] == 0:
                        eps[j] = -eps[i]
                        stack.append(j)
                    elif eps[j] != -eps[i]:
                        raise ValueError("Coxeter graph is not bipartite")
    return tuple(eps)


def bipartite_matrix_from_cartan(A, eps=None):
    """b_ij = -eps(i) a_ij off the diagonal."""
    n = len(A)
    if eps is None:
        eps = bipartite_sign_from_cartan(A)
    return tuple(
        tuple(0 if i == j else -eps[i] * A[i][j] for j in range(n)) for i in range(n)
    )


def named_matrix(name):
    if name in CARTAN:
        return bipartite_matrix_from_cartan(CARTAN[name])
    raise KeyError("unknown type %r" % name)


def rank2_matrix(b, c):
    if b * c < 0:
        raise NotSkewSymmetrizable("b and c must have equal signs")
    return ((0, b), (-c, 0))


def principal_extension(B):
    n = len(B)
    rows = [tuple(row) for row in B]
    for j in range(n):
        rows.append(tuple(1 if i == j else 0 for i in range(n)))
    return tuple(rows)


def trivial_extension(B):
    return matrix(B)


def matrix_to_json(M, n=None):
    M = [list(row) for row in M]
    if n is None or n == len(M):
        return json.dumps({"B": M}, separators=(",", ":"))
    return json.dumps({"Btilde": M, "n": n}, separators=(",", ":"))


def matrix_from_json(text):
    data = json.loads(text)
    if "B" in data:
        M = matrix(data["B"])
        return M, len(M)
    M = matrix(data["Btilde"])
    return M, int(data["n"])
