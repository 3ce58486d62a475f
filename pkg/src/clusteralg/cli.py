"""Command-line driver: deterministic text/JSON views of the library."""

from __future__ import annotations

import json
import os
import sys

import click

from . import bipartite, exchange_graph, finite_type, mutation, principal
from .laurent import LaurentPolynomial, lp_canonical_text, lp_substitute_monomial
from .mutation import (
    CARTAN,
    bipartite_matrix_from_cartan,
    matrix,
    matrix_from_json,
    matrix_to_json,
    named_matrix,
    rank2_matrix,
)
from .principal import CrossCheckFailure, PrincipalPattern
from .semifield import (
    PositiveRationalSemifield,
    TropicalSemifield,
    UniversalSemifield,
)


class UsageError(click.UsageError):
    pass


def _threads():
    raw = os.environ.get("CLUSTER_THREADS", "1")
    try:
        v = int(raw)
    except ValueError:
        raise UsageError("CLUSTER_THREADS must be an integer")
    if v < 1:
        raise UsageError("CLUSTER_THREADS must be positive")
    return v


def _load_b(type_name, matrix_file, rank2, btilde_file=None):
    sources = [s for s in (type_name, matrix_file, rank2, btilde_file) if s]
    if len(sources) != 1:
        raise UsageError("provide exactly one of --type / --matrix / --rank2 / --btilde")
    if type_name:
        return named_matrix(type_name), None
    if rank2:
        try:
            b, c = (int(v) for v in rank2.split(","))
        except ValueError:
            raise UsageError("--rank2 expects 'b,c'")
        return rank2_matrix(b, c), None
    path = matrix_file or btilde_file
    with open(path) as fh:
        M, n = matrix_from_json(fh.read())
    if btilde_file:
        return None, (M, n)
    return M, None


def _parse_path(text):
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError("--path expects comma-separated indices")


def _parse_range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError("--range expects 'a:b'")
    if lo > hi:
        raise UsageError("--range expects a <= b")
    return lo, hi


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _poly_fraction_text(p, variables):
    """Render a Laurent polynomial as numerator / monomial-denominator."""
    mins = p.min_exponents()
    den = tuple(-min(v, 0) for v in mins)
    if all(v == 0 for v in den):
        return lp_canonical_text(p)
    num = p.shift(den)
    dtxt = lp_canonical_text(LaurentPolynomial.monomial(p.vars, den))
    ntxt = lp_canonical_text(num)
    if len(num.terms) > 1:
        ntxt = "(%s)" % ntxt
    if "*" in dtxt or "^" in dtxt:
        dtxt = "(%s)" % dtxt
    return "%s / %s" % (ntxt, dtxt)


def _oplus_text(p):
    parts = []
    for e, c in p.sorted_terms():
        mono = lp_canonical_text(LaurentPolynomial(p.vars, {e: c}))
        parts.append(mono)
    return " (+) ".join(parts) if parts else "0"


def _trop_text(exps, gens):
    mono = LaurentPolynomial.monomial(gens, exps)
    return lp_canonical_text(mono)


@click.group()
def main():
    """Exact cluster-algebra computations: seeds, belts, Y-systems."""
    _threads()


def _walk_text(B0, path):
    pat = PrincipalPattern(B0)
    n = pat.n
    yvars = pat.yvars
    lines = []
    for t in range(len(path) + 1):
        prefix = path[:t]
        st = pat.state(prefix)
        lines.append("t=%d" % t)
        lines.append("Btilde = %s" % json.dumps([list(r) for r in st["Btilde"]]))
        for j in range(n):
            c = tuple(st["Btilde"][n + r][j] for r in range(n))
            lines.append("y[%d] = %s" % (j + 1, _trop_text(c, yvars)))
        for j in range(n):
            lines.append(
                "X[%d] = %s" % (j + 1, _poly_fraction_text(st["X"][j], pat.vars))
            )
        for j in range(n):
            lines.append("F[%d] = %s" % (j + 1, lp_canonical_text(st["F"][j])))
        yhat = pat.y_hat(())
        mapping = {yvars[r]: yhat[r] for r in range(n)}
        for j in range(n):
            sub = lp_substitute_monomial(st["F"][j], mapping)
            lines.append(
                "Fhat[%d] = %s" % (j + 1, _poly_fraction_text(sub, pat.vars))
            )
        for j in range(n):
            lines.append("FP[%d] = %s" % (j + 1, _oplus_text(st["F"][j])))
        for j in range(n):
            lines.append("g[%d] = %s" % (j + 1, str(st["g"][j])))
        for j in range(n):
            lines.append("d[%d] = %s" % (j + 1, str(pat.d_value(prefix, j + 1))))
        lines.append("")
    return "\n".join(lines)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--path", "path_text", default="")
@click.option("--out", default=None)
def walk(type_name, matrix_file, rank2, path_text, out):
    """Principal-coefficient seed data at every vertex along a path."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    _emit(_walk_text(B, _parse_path(path_text)), out)


@main.command(name="f-poly")
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--path", "path_text", default="")
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", default=None)
def f_poly(type_name, matrix_file, rank2, path_text, as_json, out):
    """F-polynomials at the end of a mutation path."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    pat = PrincipalPattern(B)
    st = pat.state(_parse_path(path_text))
    if as_json:
        from .laurent import lp_to_json

        _emit(
            json.dumps({"F": [lp_to_json(f) for f in st["F"]]}, sort_keys=True) + "\n",
            out,
        )
        return
    lines = [
        "F[%d] = %s" % (j + 1, lp_canonical_text(st["F"][j])) for j in range(pat.n)
    ]
    _emit("\n".join(lines) + "\n", out)


@main.command(name="g-vector")
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--path", "path_text", default="")
@click.option("--out", default=None)
def g_vector(type_name, matrix_file, rank2, path_text, out):
    """g-vectors at the end of a mutation path."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    pat = PrincipalPattern(B)
    st = pat.state(_parse_path(path_text))
    lines = ["g[%d] = %s" % (j + 1, str(st["g"][j])) for j in range(pat.n)]
    _emit("\n".join(lines) + "\n", out)


@main.command(name="d-vector")
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--path", "path_text", default="")
@click.option("--out", default=None)
def d_vector(type_name, matrix_file, rank2, path_text, out):
    """Denominator vectors at the end of a mutation path."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    pat = PrincipalPattern(B)
    path = _parse_path(path_text)
    lines = [
        "d[%d] = %s" % (j + 1, str(pat.d_value(path, j + 1))) for j in range(pat.n)
    ]
    _emit("\n".join(lines) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--btilde", "btilde_file", default=None)
@click.option("--path", "path_text", default="")
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", default=None)
def mutate(type_name, matrix_file, rank2, btilde_file, path_text, as_json, out):
    """Mutate an exchange matrix (or extended matrix) along a path."""
    B, ext = _load_b(type_name, matrix_file, rank2, btilde_file)
    if ext:
        M, n = ext
    else:
        M, n = B, len(B)
    for k in _parse_path(path_text):
        M = mutation.mutate_matrix(M, k)
    if as_json:
        _emit(matrix_to_json(M, n) + "\n", out)
        return
    _emit("\n".join(" ".join(str(v) for v in row) for row in M) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--coeffs", default="trivial", type=click.Choice(["principal", "trivial"]))
@click.option("--cap", default=100000)
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", default=None)
def graph(type_name, matrix_file, rank2, coeffs, cap, as_json, out):
    """Exchange-graph BFS: vertex/edge counts and cluster variables."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    res = exchange_graph.graph_from_spec(B, coeffs=coeffs, cap=cap)
    if as_json:
        _emit(
            json.dumps(
                {
                    "vertices": res["vertices"],
                    "edges": res["edges"],
                    "finite": res["finite"],
                    "cluster_variables": res["cluster_variables"],
                },
                sort_keys=True,
            )
            + "\n",
            out,
        )
        return
    _emit(
        "vertices=%d edges=%d finite=%s\n"
        % (res["vertices"], len(res["edges"]), "true" if res["finite"] else "false"),
        out,
    )


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--range", "range_text", default=None)
@click.option("--coeffs", default="principal", type=click.Choice(["principal"]))
@click.option("--verify/--no-verify", default=True)
@click.option("--out", default=None)
def belt(type_name, matrix_file, rank2, range_text, coeffs, verify, out):
    """Bipartite-belt seeds over an index range, with invariant checks."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    if range_text is None:
        cox = bipartite.coxeter_data(bipartite.cartan_counterpart_and_sign(B)[0])
        if cox["h"] is None:
            raise UsageError("--range required for infinite type")
        m_range = (-cox["h"] - 2, cox["h"] + 1)
    else:
        m_range = _parse_range(range_text)
    bw = bipartite.belt_walk(B, m_range, verify=verify)
    A, eps = bipartite.cartan_counterpart_and_sign(B)
    lines = []
    for m in range(m_range[0], m_range[1] + 1):
        for i in range(1, bw.n + 1):
            if eps[i - 1] == (1 if m % 2 == 0 else -1):
                lines.append(
                    "x[%d;%d] = %s"
                    % (i, m, _poly_fraction_text(bw.x_im(i, m), bw.pattern.vars))
                )
                lines.append(
                    "d(%d;%d) = %s"
                    % (i, m, str(bipartite.orbit_vector(A, eps, i - 1, m, bipartite.tau_action)))
                )
            else:
                lines.append(
                    "y[%d;%d] = %s"
                    % (i, m, _trop_text(bw.y_jm_tracked(i, m), bw.pattern.yvars))
                )
    _emit("\n".join(lines) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--rank2", default=None)
@click.option("--cartan", "cartan_file", default=None)
@click.option("--steps", default=6)
@click.option("--initial", default="u", type=click.Choice(["u", "y", "ones"]))
@click.option(
    "--semifield",
    "semifield_name",
    default="universal",
    type=click.Choice(["universal", "trop", "numeric"]),
)
@click.option("--out", default=None)
def ysystem(type_name, rank2, cartan_file, steps, initial, semifield_name, out):
    """Iterate the Y-system attached to a symmetrizable Cartan matrix."""
    if cartan_file:
        if type_name or rank2:
            raise UsageError("provide exactly one of --type / --rank2 / --cartan")
        with open(cartan_file) as fh:
            A = matrix(json.load(fh)["A"])
    else:
        B, _ = _load_b(type_name, None, rank2)
        A = bipartite.cartan_counterpart_and_sign(B)[0]
    n = len(A)
    eps = bipartite.bipartite_sign_from_cartan(A)
    if semifield_name == "numeric" or initial == "ones":
        from fractions import Fraction

        S = PositiveRationalSemifield()
        init_vals = [Fraction(1)] * n
        conv = "u"
    elif semifield_name == "trop":
        gens = tuple("y%d" % (i + 1) for i in range(n))
        S = TropicalSemifield(gens)
        init_vals = [S.generator(g) for g in gens]
        conv = initial
    else:
        gens = tuple("u%d" % (i + 1) for i in range(n))
        S = UniversalSemifield(gens)
        init_vals = [S.generator(g) for g in gens]
        conv = initial
    vals = bipartite.y_system_solve(
        A, S, steps=steps, initial=conv, initial_values=init_vals, eps=eps
    )
    lines = []
    for (i, m) in sorted(vals, key=lambda t: (t[1], t[0])):
        v = vals[(i, m)]
        if hasattr(v, "text"):
            txt = v.text()
        elif hasattr(v, "exps"):
            txt = _trop_text(v.exps, v.gens)
        else:
            txt = str(v)
        lines.append("y[%d;%d] = %s" % (i, m, txt))
    _emit("\n".join(lines) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", default=None)
def universal(type_name, matrix_file, rank2, as_json, out):
    """Universal coefficient system and its exchange relations."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    U = finite_type.universal_build(B)
    rel = finite_type.universal_exchange_relations(U)
    names = U["gen_names"]

    def term_text(t):
        coeff, mono = t
        parts = []
        for i, e in enumerate(coeff):
            if e:
                parts.append(names[i] if e == 1 else "%s^%d" % (names[i], e))
        for lab, e in mono:
            parts.append("x[%s]" % lab if e == 1 else "x[%s]^%d" % (lab, e))
        return "*".join(parts) or "1"

    if as_json:
        payload = {
            "generators": list(names),
            "Btilde": [list(r) for r in U["Btilde"]],
            "y0": [list(v.exps) for v in U["y0"]],
            "relations": {
                "x[%s]*x[%s]" % pair: [term_text(t) for t in terms]
                for pair, terms in sorted(rel.items())
            },
        }
        _emit(json.dumps(payload, sort_keys=True) + "\n", out)
        return
    lines = ["generators: %s" % ", ".join(names)]
    for j, v in enumerate(U["y0"]):
        lines.append("y[%d;0] = %s" % (j + 1, v.text()))
    for pair, terms in sorted(rel.items()):
        lines.append(
            "x[%s]*x[%s] = %s + %s"
            % (pair[0], pair[1], term_text(terms[0]), term_text(terms[1]))
        )
    _emit("\n".join(lines) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option(
    "--target",
    default="principal",
    type=click.Choice(["principal", "trivial", "universal"]),
)
@click.option("--out", default=None)
def specialize(type_name, matrix_file, rank2, target, out):
    """Verified coefficient specialization from universal coefficients."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    U = finite_type.universal_build(B)
    sp = finite_type.specialization_construct(U, target)
    lines = ["target=%s seeds=%d checked=%d" % (target, sp["seeds"], sp["checked"])]
    for name in sorted(sp["phi"]):
        v = sp["phi"][name]
        if hasattr(v, "text"):
            txt = v.text()
        elif hasattr(v, "exps"):
            txt = _trop_text(v.exps, v.gens)
        else:
            txt = str(v)
        lines.append("phi(%s) = %s" % (name, txt))
    _emit("\n".join(lines) + "\n", out)


@main.command()
@click.option("--type", "type_name", default=None)
@click.option("--matrix", "matrix_file", default=None)
@click.option("--rank2", default=None)
@click.option("--cap", default=500)
@click.option("--depth", default=None, type=int)
@click.option("--out", default=None)
def check(type_name, matrix_file, rank2, cap, depth, out):
    """Structural-property audit over an enumerated pattern."""
    B, _ = _load_b(type_name, matrix_file, rank2)
    res = principal.conjecture_suite(B, max_seeds=cap, max_depth=depth)
    lines = [
        "seeds=%d complete=%s" % (res["seeds"], "true" if res["complete"] else "false")
    ]
    bad = 0
    for chk in res["checks"]:
        bad += len(chk["violations"])
        lines.append(
            "%s: instances=%d violations=%d"
            % (chk["name"], chk["instances"], len(chk["violations"]))
        )
    _emit("\n".join(lines) + "\n", out)
    if bad:
        raise SystemExit(1)


def run():
    try:
        main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo("usage error: %s" % exc.format_message(), err=True)
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(2)
    except (
        CrossCheckFailure,
        AssertionError,
        ArithmeticError,
        ValueError,
        RuntimeError,
    ) as exc:
        click.echo("%s: %s" % (type(exc).__name__, exc), err=True)
        sys.exit(1)
    except SystemExit:
        raise


if __name__ == "__main__":
    run()
