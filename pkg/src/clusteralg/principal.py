"""Cluster patterns with principal coefficients.

Tracks, per tree vertex reached by a mutation path, the extended matrix,
the cluster variables X (Laurent in x1..xn, y1..yn), the F-polynomials
(in y1..yn), and the g-/c-vectors.  Every quantity is computed by two
independent routes and cross-checked.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import (
    LaurentPolynomial,
    RationalExpression,
    lp_canonical_text,
    lp_denominator_vector,
    lp_exact_div,
    lp_substitute_monomial,
)
from .mutation import (
    LabeledYSeed,
    matrix,
    mutate_matrix,
    mutate_y,
    principal_extension,
    principal_part,
    skew_symmetrizer,
)
from .semifield import (
    TropicalMonomial,
    TropicalSemifield,
    UniversalSemifield,
    sf_eval_poly,
    trop_eval_positive_poly,
)


class CrossCheckFailure(AssertionError):
    pass


def _pos(a):
    return a if a > 0 else 0


class PrincipalPattern:
    """Memoized principal-coefficient walk data keyed by path prefix."""

    def __init__(self, B0):
        self.B0 = matrix(B0)
        self.n = len(self.B0)
        skew_symmetrizer(self.B0)
        n = self.n
        self.xvars = tuple("x%d" % (i + 1) for i in range(n))
        self.yvars = tuple("y%d" % (j + 1) for j in range(n))
        self.vars = self.xvars + self.yvars
        Bt0 = principal_extension(self.B0)
        X0 = []
        for ell in range(n):
            e = [0] * (2 * n)
            e[ell] = 1
            X0.append(LaurentPolynomial.monomial(self.vars, e))
        F0 = tuple(LaurentPolynomial.const(self.yvars, 1) for _ in range(n))
        g0 = tuple(tuple(1 if i == ell else 0 for i in range(n)) for ell in range(n))
        self._states = {
            (): {"Btilde": Bt0, "X": tuple(X0), "F": F0, "g": g0}
        }
        self._b0cols = [tuple(self.B0[i][j] for i in range(n)) for j in range(n)]

    # -- walking ------------------------------------------------------
    def state(self, path):
        path = tuple(path)
        if path in self._states:
            return self._states[path]
        prev = self.state(path[:-1])
        st = self._step(prev, path[-1])
        self._states[path] = st
        return st

    def _step(self, st, k):
        n = self.n
        kk = k - 1
        Bt = st["Btilde"]
        Bt2 = mutate_matrix(Bt, k)
        # geometric exchange for X
        plus = LaurentPolynomial.const(self.vars, 1)
        minus = LaurentPolynomial.const(self.vars, 1)
        for i in range(2 * n):
            b = Bt[i][kk]
            if b == 0:
                continue
            if i < n:
                v = st["X"][i]
            else:
                e = [0] * (2 * n)
                e[i] = 1
                v = LaurentPolynomial.monomial(self.vars, e)
            if b > 0:
                plus = plus * v ** b
            else:
                minus = minus * v ** (-b)
        Xk = lp_exact_div(plus + minus, st["X"][kk])
        X = list(st["X"])
        X[kk] = Xk

        # F-polynomial: by specialization and independently by recurrence
        Fk_spec = self._specialize(Xk)
        Fp = LaurentPolynomial.const(self.yvars, 1)
        Fm = LaurentPolynomial.const(self.yvars, 1)
        for j in range(n):
            c = Bt[n + j][kk]
            yj = LaurentPolynomial.var(self.yvars, self.yvars[j])
            if c > 0:
                Fp = Fp * yj ** c
            elif c < 0:
                Fm = Fm * yj ** (-c)
        for i in range(n):
            b = Bt[i][kk]
            if b > 0:
                Fp = Fp * st["F"][i] ** b
            elif b < 0:
                Fm = Fm * st["F"][i] ** (-b)
        Fk_rec = lp_exact_div(Fp + Fm, st["F"][kk])
        if Fk_spec != Fk_rec:
            raise CrossCheckFailure("F-polynomial recurrence disagrees at k=%d" % k)
        F = list(st["F"])
        F[kk] = Fk_spec

        # g-vector: multidegree plus two recurrence variants
        gk_deg = self._multidegree(Xk)
        g = st["g"]
        gk1 = [-g[kk][i] for i in range(n)]
        gk2 = [-g[kk][i] for i in range(n)]
        for i in range(n):
            b = Bt[i][kk]
            if b > 0:
                for r in range(n):
                    gk1[r] += b * g[i][r]
            elif b < 0:
                for r in range(n):
                    gk2[r] += (-b) * g[i][r]
        for j in range(n):
            c = Bt[n + j][kk]
            col = self._b0cols[j]
            if c > 0:
                for r in range(n):
                    gk1[r] -= c * col[r]
            elif c < 0:
                for r in range(n):
                    gk2[r] -= (-c) * col[r]
        if not (tuple(gk1) == tuple(gk2) == gk_deg):
            raise CrossCheckFailure("g-vector recurrences disagree at k=%d" % k)
        # consistency identity: sum_i b_ik g_i = sum_j b_{n+j,k} b0_j
        lhs = [0] * n
        rhs = [0] * n
        for i in range(n):
            b = Bt[i][kk]
            if b:
                for r in range(n):
                    lhs[r] += b * g[i][r]
        for j in range(n):
            c = Bt[n + j][kk]
            if c:
                col = self._b0cols[j]
                for r in range(n):
                    rhs[r] += c * col[r]
        if lhs != rhs:
            raise CrossCheckFailure("degree-consistency identity fails at k=%d" % k)
        g2 = list(g)
        g2[kk] = gk_deg

        # structural invariants
        if any(e[n + j] < 0 for e in Xk.terms for j in range(n)):
            raise CrossCheckFailure("negative y-exponent in a cluster variable")
        if any(v != 0 for v in Fk_spec.min_exponents()):
            raise CrossCheckFailure("F-polynomial divisible by a y-variable")
        return {"Btilde": Bt2, "X": tuple(X), "F": tuple(F), "g": tuple(g2)}

    def _specialize(self, X):
        sub = {}
        for v in self.xvars:
            sub[v] = LaurentPolynomial.const(self.yvars, 1)
        for v in self.yvars:
            sub[v] = LaurentPolynomial.var(self.yvars, v)
        return lp_substitute_monomial(X, sub)

    def _multidegree(self, X):
        n = self.n
        deg = None
        for e in X.terms:
            d = list(e[:n])
            for j in range(n):
                a = e[n + j]
                if a:
                    col = self._b0cols[j]
                    for r in range(n):
                        d[r] -= a * col[r]
            d = tuple(d)
            if deg is None:
                deg = d
            elif deg != d:
                raise CrossCheckFailure("cluster variable is not homogeneous")
        return deg

    # -- accessors ----------------------------------------------------
    def c_vectors(self, path):
        st = self.state(path)
        n = self.n
        return tuple(
            tuple(st["Btilde"][n + j][ell] for j in range(n)) for ell in range(n)
        )

    def x_value(self, path, ell):
        return self.state(path)["X"][ell - 1]

    def f_value(self, path, ell):
        return self.state(path)["F"][ell - 1]

    def g_value(self, path, ell):
        return self.state(path)["g"][ell - 1]

    def d_value(self, path, ell):
        """Denominator vector of X in the x-variables."""
        return lp_denominator_vector(self.state(path)["X"][ell - 1], self.n)

    def y_hat(self, path):
        """The hatted coefficients at the vertex: monomials in x and y."""
        st = self.state(path)
        n = self.n
        out = []
        for j in range(n):
            e = [st["Btilde"][i][j] for i in range(2 * n)]
            out.append(LaurentPolynomial.monomial(self.vars, e))
        return tuple(out)


def y_factored(B0, path):
    """Coefficients at the end of path as (tropical part, F-exponent vector).

    Y_j = y^{c_j} * prod_i F_i^{b_ij}; cross-checked against a direct
    universal-semifield Y-walk.
    """
    pat = PrincipalPattern(B0)
    n = pat.n
    st = pat.state(path)
    S = TropicalSemifield(pat.yvars)
    out = []
    for j in range(n):
        c = tuple(st["Btilde"][n + r][j] for r in range(n))
        bexp = tuple(st["Btilde"][i][j] for i in range(n))
        out.append((S.monomial(c), bexp))
    # cross-check against the universal semifield walk
    U = UniversalSemifield(pat.yvars)
    ys = LabeledYSeed([U.generator(v) for v in pat.yvars], B0, U)
    for k in path:
        ys = mutate_y(ys, k)
    one = LaurentPolynomial.const(pat.yvars, 1)
    for j in range(n):
        trop, bexp = out[j]
        num = one
        den = one
        for r, a in enumerate(trop.exps):
            yv = LaurentPolynomial.var(pat.yvars, pat.yvars[r])
            if a > 0:
                num = num * yv ** a
            elif a < 0:
                den = den * yv ** (-a)
        for i, b in enumerate(bexp):
            if b > 0:
                num = num * st["F"][i] ** b
            elif b < 0:
                den = den * st["F"][i] ** (-b)
        expanded = RationalExpression(num, den)
        if expanded != ys.y[j]:
            raise CrossCheckFailure("factored Y disagrees with direct Y-mutation")
    return out


def _embed_trop_monomial(value, variables):
    e = [0] * len(variables)
    for name, a in zip(value.gens, value.exps):
        if a:
            e[list(variables).index(name)] = a
    return RationalExpression.from_poly(
        LaurentPolynomial.monomial(variables, e)
    )


def separation_evaluate(
    B0,
    path,
    ell,
    S,
    x_field=None,
    y_field=None,
    y_in_S=None,
    pattern=None,
):
    """Cluster variable at (path, ell) with coefficients evaluated in S.

    Returns X|_field(x, y) / F|_S(y), cross-checked against the rescaled
    form (F|_field(yhat)/F|_S(y)) * prod x_i^{g_i}.  Field values are
    RationalExpressions; defaults are the generic generators over
    (x1..xn, y1..yn).
    """
    pat = pattern if pattern is not None else PrincipalPattern(B0)
    n = pat.n
    st = pat.state(path)
    variables = pat.vars
    if x_field is None:
        x_field = tuple(
            RationalExpression.from_poly(LaurentPolynomial.var(variables, v))
            for v in pat.xvars
        )
    if y_field is None:
        y_field = tuple(
            RationalExpression.from_poly(LaurentPolynomial.var(variables, v))
            for v in pat.yvars
        )
    if y_in_S is None:
        y_in_S = tuple(S.generator(v) for v in pat.yvars)
    X = st["X"][ell - 1]
    F = st["F"][ell - 1]
    g = st["g"][ell - 1]

    f_s = sf_eval_poly(F, dict(zip(pat.yvars, y_in_S)), S)
    if isinstance(f_s, TropicalMonomial):
        f_s_field = _embed_trop_monomial(f_s, variables)
    elif isinstance(f_s, Fraction):
        f_s_field = RationalExpression(
            LaurentPolynomial.const(variables, f_s.numerator),
            LaurentPolynomial.const(variables, f_s.denominator),
        )
    else:
        f_s_field = f_s

    # form 1: evaluate X in the field
    val1 = _eval_poly_field(X, list(x_field) + list(y_field)) / f_s_field

    # form 2: x^g * F(yhat) / F|_S
    yhat = []
    for j in range(n):
        v = y_field[j]
        for i in range(n):
            b = pat.B0[i][j]
            if b:
                v = v * x_field[i] ** b
        yhat.append(v)
    num = _eval_poly_field(F, yhat, variables=pat.yvars)
    val2 = num / f_s_field
    for i in range(n):
        if g[i]:
            val2 = val2 * x_field[i] ** g[i]
    if val1 != val2:
        raise CrossCheckFailure("separation forms disagree")
    return val1


def _eval_poly_field(p, values, variables=None):
    """Evaluate a Laurent polynomial at RationalExpression values."""
    vs = variables if variables is not None else p.vars
    tvars = values[0].vars
    acc = RationalExpression.from_poly(LaurentPolynomial.zero(tvars))
    for e, c in p.sorted_terms():
        term = RationalExpression.from_poly(LaurentPolynomial.const(tvars, c))
        for a, v in zip(e, values):
            if a:
                term = term * v ** a
        acc = acc + term
    return acc


def tropical_one_var_eval(F, special_index, exps):
    """u^h = F|_Trop(u)(u^{e_1}, ..., u^{-1} at the special slot, ...)."""
    S = TropicalSemifield(("u",))
    assign = {}
    for j, name in enumerate(F.vars):
        assign[name] = S.monomial((-1,) if j == special_index else (exps[j],))
    return trop_eval_positive_poly(F, assign).exps[0]


def g_transition(B0, k, path, ell, patterns=None, return_h=False):
    """g-vector of (path, ell) with respect to the seed mutated at k.

    Verified three ways: a fresh walk from the mutated initial matrix, the
    transition identity through h'_k, and the h/g quotient formula.
    """
    B0 = matrix(B0)
    n = len(B0)
    patterns = patterns if patterns is not None else {}
    if B0 not in patterns:
        patterns[B0] = PrincipalPattern(B0)
    pat0 = patterns[B0]
    B1 = mutate_matrix(B0, k)
    if B1 not in patterns:
        patterns[B1] = PrincipalPattern(B1)
    pat1 = patterns[B1]
    path = tuple(path)
    path1 = path[1:] if path[:1] == (k,) else (k,) + path
    g = pat0.g_value(path, ell)
    gp = pat1.g_value(path1, ell)
    F0 = pat0.f_value(path, ell)
    F1 = pat1.f_value(path1, ell)
    kk = k - 1
    # h'_k from F wrt (B1; t1), h_k from F wrt (B0; t0)
    hpk = tropical_one_var_eval(
        F1, kk, [_pos(B0[kk][j]) for j in range(n)]
    )
    hk = tropical_one_var_eval(
        F0, kk, [_pos(-B0[kk][j]) for j in range(n)]
    )
    if g[kk] != -gp[kk]:
        raise CrossCheckFailure("g-transition fails in the mutated direction")
    for i in range(n):
        if i == kk:
            continue
        b = B0[i][kk]
        if g[i] != gp[i] + _pos(-b) * gp[kk] + b * hpk:
            raise CrossCheckFailure("g-transition identity fails at i=%d" % (i + 1))
    if g[kk] != hk - hpk:
        raise CrossCheckFailure("g_k != h_k - h'_k")
    if return_h:
        return gp, hk, hpk
    return gp


# -- conjecture audit ------------------------------------------------------


def _seed_signature(st):
    return (
        st["Btilde"],
        tuple(lp_canonical_text(x) for x in st["X"]),
    )


def enumerate_pattern(B0, max_seeds=500, max_depth=None):
    """BFS over labeled principal seeds; returns {signature: path}."""
    pat = PrincipalPattern(B0)
    n = pat.n
    seen = {}
    frontier = [()]
    seen[_seed_signature(pat.state(()))] = ()
    complete = True
    while frontier:
        nxt = []
        for path in frontier:
            if max_depth is not None and len(path) >= max_depth:
                complete = False
                continue
            for k in range(1, n + 1):
                if path and path[-1] == k:
                    continue
                p2 = path + (k,)
                sig = _seed_signature(pat.state(p2))
                if sig not in seen:
                    if len(seen) >= max_seeds:
                        complete = False
                        continue
                    seen[sig] = p2
                    nxt.append(p2)
        frontier = nxt
    return pat, seen, complete


def _dominating_term(F):
    """The unique term whose exponent vector dominates all others, or None."""
    best = None
    for e in F.terms:
        if best is None or all(a >= b for a, b in zip(e, best)):
            best = e
    for e in F.terms:
        if any(a > b for a, b in zip(e, best)):
            return None
    return best


def conjecture_suite(
    B0, max_seeds=500, max_depth=None, transition_checks=True, paths=None
):
    """Audit the open properties on an enumerated pattern; never raises
    for a property violation — returns a machine-readable report.

    With `paths` given, audits exactly those vertices (e.g. a bipartite
    belt) instead of enumerating the whole pattern."""
    B0 = matrix(B0)
    n = len(B0)
    if paths is not None:
        pat = PrincipalPattern(B0)
        seen = {i: tuple(p) for i, p in enumerate(paths)}
        complete = False
    else:
        pat, seen, complete = enumerate_pattern(B0, max_seeds, max_depth)
    checks = {}

    def record(name, ok, detail):
        entry = checks.setdefault(name, {"name": name, "instances": 0, "violations": []})
        entry["instances"] += 1
        if not ok:
            entry["violations"].append(detail)

    patterns = {B0: pat}
    negpat = None
    for sig, path in seen.items():
        st = pat.state(path)
        cvecs = [
            tuple(st["Btilde"][n + j][ell] for j in range(n)) for ell in range(n)
        ]
        for ell in range(n):
            F = st["F"][ell]
            where = "path=%s ell=%d" % (list(path), ell + 1)
            record("f_constant_term_1", F.constant_term() == 1, where)
            record(
                "f_positive_coefficients",
                all(c > 0 for c in F.terms.values()),
                where,
            )
            dom = _dominating_term(F)
            record(
                "f_unique_dominating_monomial",
                dom is not None and F.terms[dom] == 1,
                where,
            )
            c = cvecs[ell]
            coherent = all(v >= 0 for v in c) or all(v <= 0 for v in c)
            record("c_vector_sign_coherent", coherent, where)
            # three equivalent conditions agree
            pplus_trivial = all(_pos(v) == 0 for v in c)
            pminus_trivial = all(_pos(-v) == 0 for v in c)
            exactly_one = pplus_trivial != pminus_trivial
            record(
                "three_equivalences_consistent",
                (F.constant_term() == 1) == coherent == exactly_one,
                where,
            )
            # d+g through tropical F (exact statement) and d through F (conjecture)
            d = lp_denominator_vector(st["X"][ell], n)
            g = st["g"][ell]
            S = TropicalSemifield(tuple("u%d" % (i + 1) for i in range(n)))
            assign = {
                pat.yvars[j]: S.monomial(tuple(B0[i][j] for i in range(n)))
                for j in range(n)
            }
            tv = trop_eval_positive_poly(F, assign)
            record(
                "d_plus_g_through_F",
                tv.exps == tuple(-d[i] - g[i] for i in range(n)),
                where,
            )
            if not st["X"][ell].is_monomial():
                inv = {pat.yvars[j]: S.monomial(tuple(-1 if i == j else 0 for i in range(n))) for j in range(n)}
                tv2 = trop_eval_positive_poly(F, inv)
                record(
                    "d_through_F",
                    tv2.exps == tuple(-d[i] for i in range(n)),
                    where,
                )
        # g-vector sign coherence across the cluster, per coordinate
        gs = st["g"]
        ok = all(
            all(gs[ell][i] >= 0 for ell in range(n))
            or all(gs[ell][i] <= 0 for ell in range(n))
            for i in range(n)
        )
        record("g_vectors_sign_coherent", ok, "path=%s" % (list(path),))
        # F under B vs -B
        if negpat is None:
            negB = matrix([[-v for v in row] for row in B0])
            negpat = PrincipalPattern(negB)
            patterns[negB] = negpat
        stn = negpat.state(path)
        for ell in range(n):
            F = st["F"][ell]
            Fn = stn["F"][ell]
            inv_sub = {
                v: LaurentPolynomial.var(pat.yvars, v, -1) for v in pat.yvars
            }
            Fn_inv = lp_substitute_monomial(Fn, inv_sub)
            shift = Fn_inv.min_exponents()
            normalized = Fn_inv.shift(tuple(-a for a in shift))
            record(
                "f_B_vs_negB",
                F == normalized,
                "path=%s ell=%d" % (list(path), ell + 1),
            )
        # transition rules at every direction k
        if transition_checks:
            for k in range(1, n + 1):
                for ell in range(1, n + 1):
                    g = pat.g_value(path, ell)
                    try:
                        gp, hk, hpk = g_transition(
                            B0, k, path, ell, patterns, return_h=True
                        )
                    except CrossCheckFailure as exc:
                        record(
                            "h_and_g_transition_exact",
                            False,
                            "path=%s k=%d ell=%d: %s" % (list(path), k, ell, exc),
                        )
                        continue
                    record("h_and_g_transition_exact", True, "")
                    record(
                        "h_equals_min_0_g",
                        hpk == -_pos(g[k - 1]) and hk == min(0, g[k - 1]),
                        "path=%s k=%d ell=%d" % (list(path), k, ell),
                    )
                    # conjectured closed form h'_k = -[g_k]+ via the dual rule
                    kk = k - 1
                    pred = list(g)
                    pred[kk] = -g[kk]
                    for j in range(n):
                        if j == kk:
                            continue
                        pred[j] = (
                            g[j]
                            + _pos(B0[j][kk]) * g[kk]
                            - B0[j][kk] * min(g[kk], 0)
                        )
                    record(
                        "g_transition_rule",
                        tuple(pred) == tuple(gp),
                        "path=%s k=%d ell=%d" % (list(path), k, ell),
                    )
    report = sorted(checks.values(), key=lambda e: e["name"])
    return {"complete": complete, "seeds": len(seen), "checks": report}
