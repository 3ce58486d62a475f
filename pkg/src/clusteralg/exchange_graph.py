"""Seeds modulo relabeling, exchange-graph BFS, coverings, finiteness tests."""

from __future__ import annotations

from itertools import permutations

from .laurent import lp_canonical_text
from .mutation import (
    cartan_counterpart_and_sign,
    initial_geometric_seed,
    matrix,
    mutate_matrix,
    mutate_seed_geometric,
    principal_extension,
    principal_part,
    skew_symmetrizer,
    trivial_extension,
)


class RankTooLarge(ValueError):
    pass


class IncompatibleInputs(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


def _permute_seed(xs, ys, Bt, n, sigma):
    """Apply a relabeling sigma (tuple: new index -> old index) to a
    labeled seed's serialization data."""
    px = tuple(xs[sigma[i]] for i in range(n))
    py = tuple(ys[sigma[i]] for i in range(n))
    m = len(Bt)
    rows = []
    for i in range(m):
        src = sigma[i] if i < n else i
        rows.append(tuple(Bt[src][sigma[j]] for j in range(n)))
    return px, py, tuple(rows)


def seed_serialization_data(seed):
    n = seed.n
    xs = tuple(lp_canonical_text(x) for x in seed.x)
    ycols = []
    for j in range(n):
        ycols.append(
            tuple(seed.Btilde[i][j] for i in range(n, len(seed.vars)))
        )
    return xs, tuple(ycols), seed.Btilde, n


def seed_canonical_form(seed):
    """Lexicographically minimal serialization over simultaneous relabelings.

    Indices are first sorted by per-index invariants; only permutations
    within tie blocks are explored.
    """
    xs, ys, Bt, n = seed_serialization_data(seed)
    if n > 10:
        raise RankTooLarge("canonical form limited to rank <= 10")
    inv = []
    for i in range(n):
        row_multiset = tuple(sorted(Bt[i]))
        col_multiset = tuple(sorted(Bt[r][i] for r in range(len(Bt))))
        inv.append((xs[i], ys[i], row_multiset, col_multiset))
    order = sorted(range(n), key=lambda i: inv[i])
    blocks = []
    for i in order:
        if blocks and inv[blocks[-1][-1]] == inv[i]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    best = None
    for combo in _block_permutations(blocks):
        cand = _permute_seed(xs, ys, Bt, n, combo)
        if best is None or cand < best:
            best = cand
    return repr(best).encode()


def _block_permutations(blocks):
    def rec(idx):
        if idx == len(blocks):
            yield ()
            return
        for perm in permutations(blocks[idx]):
            for rest in rec(idx + 1):
                yield perm + rest
    return rec(0)


def build_exchange_graph(seed, cap=10 ** 5):
    """BFS over seeds up to relabeling; returns a dict with vertices,
    edges, the root key, and a finiteness flag."""
    n = seed.n
    root = seed_canonical_form(seed)
    keys = {root: 0}
    seeds = {0: seed}
    edges = set()
    frontier = [0]
    finite = True
    while frontier:
        nxt = []
        for vid in frontier:
            s = seeds[vid]
            for k in range(1, n + 1):
                s2 = mutate_seed_geometric(s, k)
                key = seed_canonical_form(s2)
                if key not in keys:
                    if len(keys) >= cap:
                        finite = False
                        continue
                    keys[key] = len(keys)
                    seeds[keys[key]] = s2
                    nxt.append(keys[key])
                u, v = vid, keys[key]
                edges.add((min(u, v), max(u, v)))
        frontier = nxt
    variables = set()
    for s in seeds.values():
        for x in s.x:
            variables.add(lp_canonical_text(x))
    return {
        "vertices": len(keys),
        "edges": sorted(edges),
        "root": 0,
        "finite": finite,
        "seeds": seeds,
        "keys": keys,
        "cluster_variables": sorted(variables),
    }


def graph_from_spec(B, coeffs="principal", cap=10 ** 5):
    B = matrix(B)
    if coeffs == "principal":
        Bt = principal_extension(B)
    elif coeffs == "trivial":
        Bt = trivial_extension(B)
    else:
        raise ValueError("coeffs must be principal or trivial")
    return build_exchange_graph(initial_geometric_seed(Bt), cap=cap)


def covering_check(B, coeffs_other="trivial", cap=10 ** 5):
    """Tree-aligned check that the principal-coefficient exchange graph
    covers the graph with another coefficient choice for the same B."""
    B = matrix(B)
    n = len(B)
    sp = initial_geometric_seed(principal_extension(B))
    if coeffs_other == "trivial":
        so = initial_geometric_seed(trivial_extension(B))
    elif coeffs_other == "principal":
        so = initial_geometric_seed(principal_extension(B))
    else:
        raise IncompatibleInputs("unknown coefficient choice")
    if principal_part(sp.Btilde, n) != principal_part(so.Btilde, n):
        raise IncompatibleInputs("initial exchange matrices differ")
    start = (seed_canonical_form(sp), seed_canonical_form(so))
    seen = {start}
    assignment = {start[0]: start[1]}
    frontier = [(sp, so)]
    count = 0
    while frontier:
        nxt = []
        for p, o in frontier:
            for k in range(1, n + 1):
                p2 = mutate_seed_geometric(p, k)
                o2 = mutate_seed_geometric(o, k)
                kp = seed_canonical_form(p2)
                ko = seed_canonical_form(o2)
                if kp in assignment:
                    if assignment[kp] != ko:
                        return False, (kp, assignment[kp], ko)
                else:
                    assignment[kp] = ko
                pair = (kp, ko)
                if pair not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded("covering check cap exceeded")
                    seen.add(pair)
                    nxt.append((p2, o2))
        frontier = nxt
        count += 1
    return True, None


def _canonical_matrix(Bt, n):
    m = len(Bt)
    if n > 10:
        raise RankTooLarge("canonicalization limited to rank <= 10")
    inv = []
    for i in range(n):
        inv.append(
            (
                tuple(sorted(Bt[i])),
                tuple(sorted(Bt[r][i] for r in range(m))),
            )
        )
    order = sorted(range(n), key=lambda i: inv[i])
    blocks = []
    for i in order:
        if blocks and inv[blocks[-1][-1]] == inv[i]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    best = None
    for sigma in _block_permutations(blocks):
        rows = []
        for i in range(m):
            src = sigma[i] if i < n else i
            rows.append(tuple(Bt[src][sigma[j]] for j in range(n)))
        cand = tuple(rows)
        if best is None or cand < best:
            best = cand
    return best


def mutation_class_finiteness(Btilde, cap=10 ** 4):
    """BFS over matrix mutations with canonicalization; exact class size
    or cap exceedance."""
    Bt = matrix(Btilde)
    n = len(Bt[0])
    skew_symmetrizer(principal_part(Bt, n))
    root = _canonical_matrix(Bt, n)
    seen = {root}
    frontier = [Bt]
    while frontier:
        nxt = []
        for M in frontier:
            for k in range(1, n + 1):
                M2 = mutate_matrix(M, k)
                c = _canonical_matrix(M2, n)
                if c not in seen:
                    if len(seen) >= cap:
                        return {"finite": False, "count": None, "cap": cap}
                    seen.add(c)
                    nxt.append(M2)
        frontier = nxt
    return {"finite": True, "count": len(seen), "cap": cap}


class Inconclusive(RuntimeError):
    pass


def _symmetrized_cartan(B):
    A, _ = cartan_counterpart_and_sign(B)
    d = skew_symmetrizer(B)
    n = len(B)
    return tuple(tuple(d[i] * A[i][j] for j in range(n)) for i in range(n))


def _leading_minors_positive(S):
    from fractions import Fraction

    n = len(S)
    for k in range(1, n + 1):
        M = [[Fraction(S[i][j]) for j in range(k)] for i in range(k)]
        det = Fraction(1)
        for c in range(k):
            piv = None
            for r in range(c, k):
                if M[r][c]:
                    piv = r
                    break
            if piv is None:
                return False
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = -det
            det *= M[c][c]
            for r in range(c + 1, k):
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
        if det <= 0:
            return False
    return True


def is_finite_type(B, cap=10 ** 5):
    """Finite type decision: positive-definiteness of the symmetrized
    Cartan counterpart when B is bipartite, seed BFS otherwise; the two
    routes are compared whenever both terminate."""
    B = matrix(B)
    _, eps = cartan_counterpart_and_sign(B)
    pd = None
    if eps is not None:
        pd = _leading_minors_positive(_symmetrized_cartan(B))
    bfs = None
    if pd is None or pd:
        try:
            g = graph_from_spec(B, coeffs="trivial", cap=cap)
            bfs = g["finite"]
        except RankTooLarge:
            bfs = None
    if pd is not None and bfs is not None and bfs and pd != bfs:
        raise AssertionError("finite-type routes disagree")
    if pd is not None:
        return pd
    if bfs is None or not bfs:
        if bfs is None:
            raise Inconclusive("non-bipartite and BFS unavailable")
        raise Inconclusive("non-bipartite and cap exceeded")
    return True
