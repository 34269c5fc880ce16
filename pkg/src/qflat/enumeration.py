"""Short-vector enumeration for positive definite forms.

Provides complete vector lists below a norm bound, exact representation
counts r(m), a represents-m predicate, the order of the integral
automorphism group, orthogonal decomposition into indecomposable blocks,
and representation fingerprints (r(1), ..., r(M)).

All search is exact: coordinate brackets come from the rational Cholesky
splitting of the Gram matrix and every partial sum is a Fraction, so no
vector is missed and none is counted twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded
from .exact import (
    NotPositiveDefinite,  # noqa: F401  (part of this module's surface)
    column_hermite_form,
    determinant,
    dot,
    freeze,
    mat_vec,
    rational_cholesky,
)
from .gram import GramForm


class DimensionLimit(Exception):
    """Dimension exceeds the configured automorphism-search limit."""


DECOMPOSE_BUDGET = 4_000_000


def _as_form(G) -> GramForm:
    return G if isinstance(G, GramForm) else GramForm(G)


def _vectors_up_to(gram, bound):
    """All nonzero integer vectors with f(v) <= bound, both signs.

    Returns (vector, norm) pairs.  Coordinates are fixed from the last to
    the first; at each level the admissible integers form a contiguous
    range around the real minimum of the quadratic, so scanning outward
    and stopping at the first violation is exhaustive.
    """
    d, u = rational_cholesky(gram)
    n = len(d)
    out = []
    x = [0] * n

    def walk(i, remaining):
        if i < 0:
            if any(x):
                out.append((tuple(x), int(bound - remaining)))
            return
        c = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                c += u[i][j] * x[j]
        # the quadratic in x_i is minimized at -c; ceil(-c) starts the
        # upward scan on the monotone side, ceil(-c) - 1 the downward one
        top = -(c.numerator // c.denominator)
        xi = top
        while d[i] * (xi + c) ** 2 <= remaining:
            x[i] = xi
            walk(i - 1, remaining - d[i] * (xi + c) ** 2)
            xi += 1
        xi = top - 1
        while d[i] * (xi + c) ** 2 <= remaining:
            x[i] = xi
            walk(i - 1, remaining - d[i] * (xi + c) ** 2)
            xi -= 1
        x[i] = 0

    walk(n - 1, Fraction(bound))
    return out


def _canonical(pairs):
    """Keep one vector per +-pair: first nonzero coordinate positive."""
    out = []
    for v, norm in pairs:
        lead = next(c for c in v if c)
        if lead > 0:
            out.append((v, norm))
    return out


@dataclass(frozen=True)
class ShortVectorList:
    """Vectors of norm in (0, bound], lexicographically sorted.

    When `expanded` is False the list holds one representative per
    +-pair (first nonzero coordinate positive); expanded lists carry
    both signs.
    """

    form: GramForm
    bound: int
    vectors: tuple
    expanded: bool

    def __len__(self):
        return len(self.vectors)


def short_vectors(G, bound, *, expand=False):
    """Complete duplicate-free list of vectors with 0 < f(v) <= bound."""
    G = _as_form(G)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    pairs = _vectors_up_to(G.matrix, bound)
    if not expand:
        pairs = _canonical(pairs)
    vecs = tuple(sorted(v for v, _ in pairs))
    return ShortVectorList(G, bound, vecs, expand)


def representation_count(G, m):
    """Exact number of integer vectors with f(v) = m."""
    G = _as_form(G)
    if m < 1:
        raise ValueError("m must be >= 1")
    return sum(1 for _, norm in _vectors_up_to(G.matrix, m) if norm == m)


def fingerprint(G, M):
    """Representation counts (r(1), ..., r(M)) in one enumeration pass."""
    G = _as_form(G)
    if M < 1:
        raise ValueError("M must be >= 1")
    counts = [0] * (M + 1)
    for _, norm in _vectors_up_to(G.matrix, M):
        counts[norm] += 1
    return tuple(counts[1:])


def represents(G, m):
    """Whether f(v) = m has an integer solution; stops at the first one."""
    G = _as_form(G)
    if m < 1:
        raise ValueError("m must be >= 1")
    d, u = rational_cholesky(G.matrix)
    n = len(d)
    x = [0] * n

    def walk(i, remaining):
        if i < 0:
            return remaining == 0
        c = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                c += u[i][j] * x[j]
        top = -(c.numerator // c.denominator)
        xi = top
        while d[i] * (xi + c) ** 2 <= remaining:
            x[i] = xi
            if walk(i - 1, remaining - d[i] * (xi + c) ** 2):
                return True
            xi += 1
        xi = top - 1
        while d[i] * (xi + c) ** 2 <= remaining:
            x[i] = xi
            if walk(i - 1, remaining - d[i] * (xi + c) ** 2):
                return True
            xi -= 1
        x[i] = 0
        return False

    return walk(n - 1, Fraction(m))


def automorphism_order(G, *, dim_limit=8):
    """Order of the integral automorphism group {T : T^t G T = G}.

    Counted level by level: the group order is the product over k of the
    number of images of the k-th basis vector that are compatible with
    fixing the first k-1 basis vectors and extend to a full automorphism.
    (All extendable prefixes of a given length have equally many
    completions, so the product telescopes to the group order.)
    """
    G = _as_form(G)
    n = G.n
    if n > dim_limit:
        raise DimensionLimit(f"dimension {n} exceeds the limit {dim_limit}")
    gram = G.matrix
    bound = max(gram[i][i] for i in range(n))
    diag_norms = {gram[t][t] for t in range(n)}
    pool = []
    by_norm = {}
    for v, norm in _vectors_up_to(gram, bound):
        if norm in diag_norms:
            by_norm.setdefault(norm, []).append(len(pool))
            pool.append(v)
    gv = [mat_vec(gram, v) for v in pool]
    # pairwise inner products; constraints inside the search become O(1)
    table = [[dot(gv[a], pool[b]) for b in range(len(pool))]
             for a in range(len(pool))]
    buckets = {norm: tuple(ids) for norm, ids in by_norm.items()}

    def complete(prefix, fixed):
        """Extend images of basis vectors `fixed`.. (pool indices).

        The first `fixed` basis vectors are fixed pointwise and are not
        carried in `prefix`.
        """
        t = fixed + len(prefix)
        if t == n:
            return prefix
        for w in buckets.get(gram[t][t], ()):
            ok = True
            for s in range(fixed):
                if gv[w][s] != gram[t][s]:
                    ok = False
                    break
            if ok:
                for s in range(fixed, t):
                    if table[w][prefix[s - fixed]] != gram[t][s]:
                        ok = False
                        break
            if ok:
                res = complete(prefix + [w], fixed)
                if res is not None:
                    return res
        return None

    order = 1
    witnesses = []
    for k in range(n):
        level = 0
        for w in buckets.get(gram[k][k], ()):
            if any(gv[w][s] != gram[k][s] for s in range(k)):
                continue
            found = complete([w], k)
            if found is not None:
                level += 1
                if len(witnesses) < 32:
                    witnesses.append((k, found))
        if level == 0:
            raise AssertionError("identity not found in automorphism search")
        order *= level
    # the found extensions really are automorphisms of the form
    for k, tail in witnesses:
        cols = [tuple(1 if i == s else 0 for i in range(n)) for s in range(k)]
        cols += [pool[w] for w in tail]
        for a in range(n):
            for b in range(n):
                if dot(mat_vec(gram, cols[a]), cols[b]) != gram[a][b]:
                    raise AssertionError("witness fails T^t G T = G")
    return order


def orthogonal_decompose(G, *, budget=DECOMPOSE_BUDGET):
    """Indecomposable orthogonal summands of a positive definite form.

    Connected components of the non-orthogonality graph on the vectors of
    norm up to the largest diagonal entry; each basis vector lies below
    that bound, so the component lattices always sum to the whole space.
    Returns the component Gram forms; the change of basis joining them is
    verified unimodular.
    """
    G = _as_form(G)
    n = G.n
    gram = G.matrix
    bound = max(gram[i][i] for i in range(n))
    reps = [v for v, _ in _canonical(_vectors_up_to(gram, bound))]
    if len(reps) ** 2 > budget:
        raise BudgetExceeded(
            f"non-orthogonality graph on {len(reps)} vectors exceeds budget"
        )
    gvs = [mat_vec(gram, v) for v in reps]
    parent = list(range(len(reps)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            if dot(gvs[a], reps[b]) != 0:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    groups = {}
    for a in range(len(reps)):
        groups.setdefault(find(a), []).append(reps[a])
    comps = sorted(groups.values(), key=min)

    bases = []
    for comp in comps:
        cols = freeze([[v[i] for v in comp] for i in range(n)])
        bases.append(column_hermite_form(cols))
    total = sum(len(b[0]) for b in bases)
    if total != n:
        raise AssertionError("component lattices do not fill the space")
    joined = [[0] * n for _ in range(n)]
    at = 0
    for b in bases:
        w = len(b[0])
        for i in range(n):
            for j in range(w):
                joined[i][at + j] = b[i][j]
        at += w
    if abs(determinant(freeze(joined))) != 1:
        raise AssertionError("component join is not unimodular")

    out = []
    for b in bases:
        w = len(b[0])
        cols = [tuple(b[i][j] for i in range(n)) for j in range(w)]
        block = freeze([[dot(mat_vec(gram, cols[a]), cols[c])
                         for c in range(w)] for a in range(w)])
        out.append(GramForm(block))
    return tuple(out)
