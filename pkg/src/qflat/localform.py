"""Local densities of quadratic forms and p-adic block decompositions.

The p-density of a form f at an integer m is the stable value of

    #{x in (Z/p^k)^n : f(x) = m mod p^k} / p^(k(n-1))

as k grows.  This module computes it exactly (`local_density`), together
with the archimedean density (`infinity_density`), the sphere-volume
constants (`omega_interval`), interval zeta values (`zeta_interval`), and
the structure results used to organize p-adic computations:
`jordan_decompose_odd` for odd primes and `two_adic_split` at p = 2.

Everything arithmetic is exact: densities are `Fraction`s, archimedean
quantities are certified `Interval`s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt

from .errors import BudgetExceeded
from .exact import freeze, determinant, identity, mat_mul, transpose
from .gram import GramForm
from .intervals import (
    Interval,
    acosh_interval,  # noqa: F401  (re-exported for callers of this module)
    pi_interval,
    e_interval,
    pow_half_integer,
    precision_bits,
)


class PrecisionTooLow(Exception):
    """The working modulus p^K cannot certify the requested decomposition."""


class NoIsotropicVector(Exception):
    """No isotropic vector was found by the 2-adic search.

    Raised when the input has dimension < 5 (where a splitting is not
    guaranteed to exist) and no block could be extracted, or -- which
    would indicate a bug or an inadequate working precision -- when the
    search fails in dimension >= 5 where isotropy is guaranteed.
    """


DEFAULT_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# density values


@dataclass(frozen=True)
class DensityValue:
    """Result of a local density computation.

    `value` is exact; `stabilized` records whether two consecutive levels
    agreed before `k` (the last level evaluated); `history` keeps the
    per-level densities for reporting.
    """

    value: Fraction
    p: int
    m: int
    stabilized: bool
    k: int
    method: str
    history: tuple = ()

    def to_json_dict(self):
        return {
            "p": self.p,
            "m": self.m,
            "value": [str(self.value.numerator), str(self.value.denominator)],
            "stabilized_at_k": self.k if self.stabilized else None,
            "method": self.method,
        }


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _legendre(a, p):
    """Legendre symbol (a/p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _vp(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# backend: definitional counting


def _count_enumerate(gram, p, k, m, budget):
    """#{x in (Z/p^k)^n : f(x) = m} by depth-first enumeration."""
    n = len(gram)
    mod = p ** k
    if mod ** n > budget:
        raise BudgetExceeded(
            f"counting mod {p}^{k} in dimension {n} needs {mod ** n} "
            f"evaluations (budget {budget})"
        )
    target = m % mod
    count = 0

    def rec(d, val, lin):
        nonlocal count
        if d == n - 1:
            g = gram[d][d]
            l2 = 2 * lin[d]
            for t in range(mod):
                if (val + g * t * t + l2 * t - target) % mod == 0:
                    count += 1
            return
        row = gram[d]
        for t in range(mod):
            val2 = (val + row[d] * t * t + 2 * t * lin[d]) % mod
            lin2 = tuple(
                (lin[j] + row[j] * t) % mod for j in range(n)
            )
            rec(d + 1, val2, lin2)

    rec(0, 0, (0,) * n)
    return count


# ---------------------------------------------------------------------------
# backend: closed-form counts for unit forms at odd p
#
# Over F_p (p odd) the number of solutions of a nondegenerate quadratic
# form in nu variables is classical:
#   nu even:  N1(m != 0) = p^(nu-1) - eta p^(nu/2-1)
#             N1(0)      = p^(nu-1) + (p-1) eta p^(nu/2-1)
#             with eta = chi((-1)^(nu/2) det)
#   nu odd:   N1(m != 0) = p^(nu-1) + p^((nu-1)/2) chi((-1)^((nu-1)/2) det m)
#             N1(0)      = p^(nu-1)
# For p not dividing det, solutions with x != 0 mod p lift uniquely
# (Hensel), and solutions with x = 0 mod p descend through f(px') = p^2
# f(x'), giving an exact recursion for the count at every level k.


def _unit_count_mod1(nu, det_unit, p, m):
    ch = _legendre
    if nu % 2 == 0:
        eta = ch((-1) ** (nu // 2) * det_unit, p)
        if m % p == 0:
            return p ** (nu - 1) + (p - 1) * eta * p ** (nu // 2 - 1)
        return p ** (nu - 1) - eta * p ** (nu // 2 - 1)
    if m % p == 0:
        return p ** (nu - 1)
    s = ch((-1) ** ((nu - 1) // 2) * det_unit * m, p)
    return p ** (nu - 1) + s * p ** ((nu - 1) // 2)


def _unit_count(nu, det_unit, p, k, m):
    """#{x in (Z/p^k)^nu : g(x) = m} for g a unit form at odd p."""
    if k == 0:
        return 1
    mm = m % (p ** k)
    if mm % p != 0:
        return _unit_count_mod1(nu, det_unit, p, mm) * p ** ((k - 1) * (nu - 1))
    base = (_unit_count_mod1(nu, det_unit, p, 0) - 1) * p ** ((k - 1) * (nu - 1))
    if k == 1:
        return base + 1
    if mm % (p * p) == 0:
        return base + p ** nu * _unit_count(nu, det_unit, p, k - 2, mm // (p * p))
    return base


def _count_unit_form(gram, p, k, m):
    n = len(gram)
    det = determinant(gram)
    return _unit_count(n, det % p, p, k, m)


# ---------------------------------------------------------------------------
# backend: odd p dividing det -- Jordan blocks + convolution


def _count_jordan_convolution(blocks, n, p, k, m, budget):
    """Count solutions mod p^k from a Jordan decomposition at odd p.

    `blocks` is a list of (exponent, units) pairs; the form is the
    orthogonal sum of p^e * <u_1, ..., u_r> over the blocks.  Counts per
    block are produced by the unit-form recursion and combined with a
    cyclic convolution over Z/p^k.
    """
    mod = p ** k
    if mod * mod > budget:
        raise BudgetExceeded(
            f"convolution table of size {mod}^2 exceeds budget {budget}"
        )
    total = [0] * mod
    total[0] = 1
    for exp, units in blocks:
        nu = len(units)
        det_unit = 1
        for u in units:
            det_unit = (det_unit * u) % p
        scale = p ** exp
        vec = [0] * mod
        if exp >= k:
            vec[0] = mod ** nu
        else:
            kk = k - exp
            lift = p ** (exp * nu)
            for r0 in range(p ** kk):
                c = _unit_count(nu, det_unit, p, kk, r0)
                if c:
                    vec[(r0 * scale) % mod] = c * lift
        new = [0] * mod
        for a, ca in enumerate(total):
            if ca:
                for b, cb in enumerate(vec):
                    if cb:
                        new[(a + b) % mod] += ca * cb
        total = new
    return total[m % mod]


# ---------------------------------------------------------------------------
# backend: p = 2 -- split into pieces of dimension <= 2, then convolve
#
# Any symmetric integer matrix can be brought, over Z_2, to a direct sum
# of 1x1 pieces and 2x2 pieces with even diagonal.  The transformation is
# a product of elementary column operations whose coefficients have odd
# denominators, so it is invertible over Z/2^k and preserves solution
# counts at every level.


def _frac_mod(q, mod):
    """Reduce a Fraction with odd denominator modulo a power of two."""
    den = q.denominator
    if den % 2 == 0:
        raise ValueError("denominator not a 2-adic unit")
    return (q.numerator * pow(den, -1, mod)) % mod


def _two_adic_pieces(gram):
    """Orthogonal pieces of dimension <= 2, as exact Fraction grams."""
    n = len(gram)
    work = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    live = list(range(n))
    pieces = []

    def val(q):
        if q == 0:
            return None
        num = abs(q.numerator)
        return _vp(num, 2)

    while live:
        if len(live) == 1:
            i = live[0]
            pieces.append(((work[i][i],),))
            break
        best = None
        for a, i in enumerate(live):
            for j in live[a:]:
                v = val(work[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            for i in live:
                pieces.append(((Fraction(0),),))
            break
        v, i, j = best
        diag = [t for t in live if val(work[t][t]) is not None
                and val(work[t][t]) == v]
        if diag:
            i = diag[0]
            piv = work[i][i]
            rest = [t for t in live if t != i]
            coeff = {t: work[i][t] / piv for t in rest}
            for s in rest:
                for t in rest:
                    work[s][t] -= coeff[s] * piv * coeff[t]
            pieces.append(((piv,),))
            live = rest
        else:
            a, b, c = work[i][i], work[i][j], work[j][j]
            det = a * c - b * b
            rest = [t for t in live if t not in (i, j)]
            # project e_s off span(e_i, e_j): coefficients from the
            # inverse of the 2x2 block (its determinant is a 2-adic unit
            # times 4^v, and the inner products carry enough 2-power)
            coeffs = {}
            for s in rest:
                gi, gj = work[i][s], work[j][s]
                coeffs[s] = ((c * gi - b * gj) / det,
                             (a * gj - b * gi) / det)
            for s in rest:
                gis, gjs = work[i][s], work[j][s]
                for t in rest:
                    if t < s:
                        continue
                    ci_t, cj_t = coeffs[t]
                    new = work[s][t] - ci_t * gis - cj_t * gjs
                    work[s][t] = new
                    work[t][s] = new
            pieces.append(((a, b), (b, c)))
            live = rest
    return pieces


def _piece_count_vector(piece, k):
    """Count vector of a dimension <= 2 piece modulo 2^k."""
    mod = 2 ** k
    vec = [0] * mod
    if len(piece) == 1:
        d = _frac_mod(Fraction(piece[0][0]), mod)
        for x in range(mod):
            vec[(d * x * x) % mod] += 1
    else:
        a = _frac_mod(Fraction(piece[0][0]), mod)
        b = _frac_mod(Fraction(piece[0][1]), mod)
        c = _frac_mod(Fraction(piece[1][1]), mod)
        for x in range(mod):
            ax2 = a * x * x
            bx2 = 2 * b * x
            for y in range(mod):
                vec[(ax2 + bx2 * y + c * y * y) % mod] += 1
    return vec


def _count_two_adic(pieces, p, k, m, budget):
    mod = 2 ** k
    if mod * mod * (len(pieces) + 1) > budget:
        raise BudgetExceeded(
            f"2-adic convolution at level {k} exceeds budget {budget}"
        )
    total = [0] * mod
    total[0] = 1
    for piece in pieces:
        vec = _piece_count_vector(piece, k)
        new = [0] * mod
        for a, ca in enumerate(total):
            if ca:
                for b, cb in enumerate(vec):
                    if cb:
                        new[(a + b) % mod] += ca * cb
        total = new
    return total[m % mod]


# ---------------------------------------------------------------------------
# the density driver


def local_density(G, p, m, *, k_max=6, method="auto", budget=DEFAULT_BUDGET):
    """Exact p-density of G at m.

    Evaluates the normalized count at successive levels k until two
    consecutive values agree; if that does not happen by `k_max` the last
    value is returned flagged `stabilized=False`.

    `method="count"` forces definitional enumeration (budget permitting).
    `method="auto"` picks an exact structural counter: closed-form unit
    counts at odd p, Jordan-block convolution at odd p dividing det, and
    dimension <= 2 piece convolution at p = 2.  All counters compute the
    same integer counts, so the two methods cross-validate.
    """
    if not isinstance(G, GramForm):
        G = GramForm(G)
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    n = G.n
    det = G.determinant  # raises on singular input

    counter = None
    tag = method
    if method == "count":
        def counter(k):
            return _count_enumerate(G.matrix, p, k, m, budget)
    elif method == "auto":
        if p % 2 == 1 and det % p != 0:
            tag = "unit-formula"

            def counter(k):
                return _count_unit_form(G.matrix, p, k, m)
        elif p % 2 == 1:
            tag = "jordan-blocks"
            dec = jordan_decompose_odd(G, p, 2 * _vp(det, p) + 2)
            blocks = [(b.exponent, b.units) for b in dec.blocks]

            def counter(k):
                return _count_jordan_convolution(blocks, n, p, k, m, budget)
        else:
            tag = "two-adic-pieces"
            pieces = _two_adic_pieces(G.matrix)

            def counter(k):
                return _count_two_adic(pieces, p, k, m, budget)
    else:
        raise ValueError(f"unknown method {method!r}")

    history = []
    prev = None
    for k in range(1, k_max + 1):
        cnt = counter(k)
        dk = Fraction(cnt, p ** (k * (n - 1)))
        history.append((k, dk))
        if prev is not None and dk == prev:
            return DensityValue(dk, p, m, True, k, tag, tuple(history))
        prev = dk
    return DensityValue(prev, p, m, False, k_max, tag, tuple(history))


# ---------------------------------------------------------------------------
# Jordan decomposition at odd p


@dataclass(frozen=True)
class JordanBlock:
    """One block p^exponent * <units> of an odd-p Jordan decomposition."""

    exponent: int
    units: tuple


@dataclass(frozen=True)
class JordanDecomposition:
    blocks: tuple
    transform: tuple  # integer matrix mod p^K
    p: int
    bits: int  # the K of the working modulus p^K

    @property
    def scales(self):
        out = []
        for b in self.blocks:
            out.extend([self.p ** b.exponent] * len(b.units))
        return tuple(out)


def jordan_decompose_odd(G, p, K):
    """Diagonalize G over Z_p (p odd) into unit blocks times p-powers.

    Returns blocks sorted by exponent together with an integer transform
    T with T^t G T congruent to the block diagonal mod p^K.  Requires
    p^K to exceed the square of the p-part of det(G); the elimination
    itself is exact, so the requirement is a certification threshold,
    not a numerical one.
    """
    if not isinstance(G, GramForm):
        G = GramForm(G)
    if p == 2 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    det = G.determinant
    if K < 2 * _vp(det, p) + 1:
        raise PrecisionTooLow(
            f"p^K must exceed the square of the p-part of det; "
            f"need K >= {2 * _vp(det, p) + 1}, got {K}"
        )
    n = G.n
    work = [[Fraction(G.matrix[i][j]) for j in range(n)] for i in range(n)]
    trans = [[Fraction(1 if i == j else 0) for j in range(n)]
             for i in range(n)]
    live = list(range(n))
    entries = []  # (exponent, unit fraction, pivot order)

    def pval(q):
        if q == 0:
            return None
        v_num = _vp(abs(q.numerator), p)
        v_den = _vp(q.denominator, p)
        return v_num - v_den

    while live:
        best = None
        for a, i in enumerate(live):
            for j in live[a:]:
                v = pval(work[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise ValueError("form is degenerate over Z_p")
        v = best[0]
        diag = next((t for t in live if pval(work[t][t]) == v), None)
        if diag is not None:
            i = j = diag
        else:
            _, i, j = best
            # every diagonal entry now has strictly larger valuation, so
            # folding column j into i surfaces a diagonal pivot of
            # valuation exactly v (2 is a unit since p is odd)
            for t in range(n):
                trans[t][i] += trans[t][j]
            for t in live:
                work[t][i] += work[t][j]
            for t in live:
                work[i][t] += work[j][t]
        piv = work[i][i]
        assert pval(piv) == v
        rest = [t for t in live if t != i]
        coeff = {t: work[i][t] / piv for t in rest}
        for t in rest:
            if coeff[t]:
                for s in range(n):
                    trans[s][t] -= coeff[t] * trans[s][i]
        for s in rest:
            for t in rest:
                work[s][t] -= coeff[s] * piv * coeff[t]
        for t in rest:
            work[i][t] = Fraction(0)
            work[t][i] = Fraction(0)
        unit = piv / p ** v
        entries.append((v, unit, i))
        live = rest

    entries.sort(key=lambda e: (e[0], e[2]))
    mod = p ** K
    by_exp = {}
    for v, unit, _ in entries:
        res = (unit.numerator * pow(unit.denominator, -1, mod)) % mod
        um = res % (p ** max(K - v, 1))
        by_exp.setdefault(v, []).append(um)
    blocks = tuple(
        JordanBlock(v, tuple(us)) for v, us in sorted(by_exp.items())
    )

    order = [e[2] for e in entries]
    tmat = freeze([
        [_frac_mod_any(trans[i][col], mod, p) for col in order]
        for i in range(n)
    ])
    _verify_jordan(G.matrix, tmat, blocks, p, K)
    return JordanDecomposition(blocks, tmat, p, K)


def _frac_mod_any(q, mod, p):
    den = q.denominator
    if den % p == 0:
        raise ValueError("denominator not a p-adic unit")
    return (q.numerator * pow(den, -1, mod)) % mod


def _verify_jordan(gram, tmat, blocks, p, K):
    mod = p ** K
    diag = []
    for b in blocks:
        for u in b.units:
            diag.append((p ** b.exponent * u) % mod)
    got = mat_mul(mat_mul(transpose(tmat), gram), tmat)
    n = len(gram)
    for i in range(n):
        for j in range(n):
            want = diag[i] if i == j else 0
            if (got[i][j] - want) % mod != 0:
                raise AssertionError("jordan congruence failed")


# ---------------------------------------------------------------------------
# 2-adic hyperbolic-block splitting


@dataclass(frozen=True)
class Split2Result:
    blocks: tuple      # tuples ("even"|"odd", 2x2 gram)
    remainder: tuple   # gram of the unsplit part (may be empty)
    transform: tuple   # integer matrix mod 2^K
    bits: int


EVEN_BLOCK = ((0, 1), (1, 0))
ODD_BLOCK = ((0, 1), (1, 1))


def _apply_gram(gram, x, y=None):
    if y is None:
        y = x
    n = len(gram)
    return sum(x[i] * gram[i][j] * y[j] for i in range(n) for j in range(n))


def _isotropic_seed(gram, mod8=8):
    """Primitive v with f(v) = 0 mod 8 and Gv odd somewhere, or None.

    Deterministic search: sparse supports in ascending size, then (for
    small dimensions) the full product space.
    """
    n = len(gram)

    def good(v):
        if all(c % 2 == 0 for c in v):
            return False
        if _apply_gram(gram, v) % 8 != 0:
            return False
        gv = [sum(gram[i][j] * v[j] for j in range(n)) % 2 for i in range(n)]
        return any(gv)

    from itertools import combinations, product

    max_support = n if n <= 5 else 4
    for size in range(1, max_support + 1):
        for support in combinations(range(n), size):
            for values in product(range(1, 8), repeat=size):
                v = [0] * n
                for idx, val in zip(support, values):
                    v[idx] = val
                if good(v):
                    return tuple(v)
    return None


def _hensel_lift(gram, v, bits):
    """Lift f(v) = 0 mod 8 to f(v) = 0 mod 2^bits."""
    n = len(gram)
    v = list(v)
    mod = 2 ** bits
    gv = [sum(gram[i][j] * v[j] for j in range(n)) for i in range(n)]
    t = next(i for i in range(n) if gv[i] % 2 == 1)
    j = 3
    while j < bits:
        fv = _apply_gram(gram, v) % (2 ** (j + 1))
        if fv >> j & 1:
            inv = pow(gv[t] % (2 ** bits), -1, 2 ** bits)
            v[t] = (v[t] + (1 << (j - 1)) * inv) % mod
            gv = [sum(gram[i][jj] * v[jj] for jj in range(n))
                  for i in range(n)]
        j += 1
    assert _apply_gram(gram, v) % (2 ** bits) == 0
    return tuple(c % mod for c in v)


def _partner(gram, v, bits):
    """u with (v,u) = 1 mod 2^bits, preferring odd f(u)."""
    n = len(gram)
    mod = 2 ** bits
    gv = [sum(gram[i][j] * v[j] for j in range(n)) for i in range(n)]
    cands = []
    for t in range(n):
        if gv[t] % 2 == 1:
            u = [0] * n
            u[t] = 1
            cands.append(u)
    base = cands[0]
    tbase = base.index(1)
    for s in range(n):
        if s != tbase:
            u = list(base)
            u[s] = 1
            if sum(gv[i] * u[i] for i in range(n)) % 2 == 1:
                cands.append(u)
    chosen = None
    for u in cands:
        if _apply_gram(gram, u) % 2 == 1:
            chosen = u
            break
    if chosen is None:
        chosen = cands[0]
    c = sum(gv[i] * chosen[i] for i in range(n)) % mod
    cinv = pow(c, -1, mod)
    return tuple((x * cinv) % mod for x in chosen)


def two_adic_split(G, K=8):
    """Split off hyperbolic-type blocks from G over Z/2^K.

    Repeatedly finds an isotropic vector, completes it to a pair spanning
    a block congruent to 2x1x2 or 2x1x2 + x2^2 mod 2^K, and recurses on the
    orthogonal complement.  Splitting is guaranteed above dimension 4; in
    lower dimensions the leftover anisotropic part is returned as the
    remainder.  Raises NoIsotropicVector if not a single block can be
    extracted (or, indicating a bug, if the guaranteed case fails).
    """
    if not isinstance(G, GramForm):
        G = GramForm(G)
    det = G.determinant
    if det % 2 == 0:
        raise ValueError("two_adic_split requires unit 2-adic determinant")
    if K < 3:
        raise PrecisionTooLow("need K >= 3")
    n = G.n
    mod = 2 ** K
    work_bits = K + 2
    wmod = 2 ** work_bits

    current = [list(r) for r in G.matrix]
    # global columns (in original coordinates) of finished block vectors,
    # and of the current working coordinates
    done_cols = []
    live_cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    blocks = []

    while len(current) >= 2:
        dim = len(current)
        seed = _isotropic_seed(current)
        if seed is None:
            if dim >= 5:
                raise NoIsotropicVector(
                    f"guaranteed isotropic vector not found in dimension "
                    f"{dim}; raise the search precision"
                )
            if not blocks:
                raise NoIsotropicVector(
                    f"dimension {dim} < 5: splitting not guaranteed and no "
                    f"isotropic vector exists mod 8"
                )
            break
        v = _hensel_lift(current, seed, work_bits)
        u = _partner(current, v, work_bits)
        fu = _apply_gram(current, u) % wmod
        eps = fu % 2
        tau = ((fu - eps) // 2) % wmod
        u = tuple((u[i] - tau * v[i]) % wmod for i in range(dim))
        fv = _apply_gram(current, v) % wmod
        fu = _apply_gram(current, u) % wmod
        vu = _apply_gram(current, v, u) % wmod
        pdet = (fv * fu - vu * vu) % wmod
        pinv = pow(pdet, -1, wmod)
        # complement: project e_t off span(v, u)
        comp = []
        for t in range(dim):
            e = [0] * dim
            e[t] = 1
            gv_t = _apply_gram(current, v, e)
            gu_t = _apply_gram(current, u, e)
            av = (pinv * (fu * gv_t - vu * gu_t)) % wmod
            au = (pinv * (fv * gu_t - vu * gv_t)) % wmod
            w = tuple((e[i] - av * v[i] - au * u[i]) % wmod
                      for i in range(dim))
            comp.append(w)
        cols = _select_unimodular(comp, dim - 2)
        new_gram = [
            [_apply_gram(current, cols[a], cols[b]) % wmod
             for b in range(dim - 2)]
            for a in range(dim - 2)
        ]
        blocks.append(("odd" if eps else "even",
                       ODD_BLOCK if eps else EVEN_BLOCK))

        def to_global(vec):
            return [sum(live_cols[t][i] * vec[t] for t in range(dim)) % wmod
                    for i in range(n)]

        done_cols.append(to_global(v))
        done_cols.append(to_global(u))
        live_cols = [to_global(c) for c in cols]
        current = new_gram

    remainder = freeze([[x % mod for x in row] for row in current]) \
        if current else tuple()
    all_cols = done_cols + live_cols
    tmat = freeze([[all_cols[j][i] % mod for j in range(len(all_cols))]
                   for i in range(n)])
    _verify_split(G.matrix, tmat, blocks, remainder, K)
    return Split2Result(tuple(blocks), remainder, tmat, K)


def _select_unimodular(vectors, need):
    """Greedy GF(2)-independent subset of size `need`."""
    rows = []
    chosen = []
    if need == 0:
        return chosen
    for vec in vectors:
        r = [c % 2 for c in vec]
        cur = r[:]
        for pivot_pos, prow in rows:
            if cur[pivot_pos]:
                cur = [(a + b) % 2 for a, b in zip(cur, prow)]
        if any(cur):
            pos = next(i for i, c in enumerate(cur) if c)
            rows.append((pos, cur))
            chosen.append(vec)
            if len(chosen) == need:
                return chosen
    raise AssertionError("projected vectors failed to span the complement")


def _verify_split(gram, tmat, blocks, remainder, K):
    mod = 2 ** K
    n = len(gram)
    got = mat_mul(mat_mul(transpose(tmat), gram), tmat)
    expect = [[0] * n for _ in range(n)]
    pos = 0
    for _, blk in blocks:
        for a in range(2):
            for b in range(2):
                expect[pos + a][pos + b] = blk[a][b]
        pos += 2
    for a in range(len(remainder)):
        for b in range(len(remainder)):
            expect[pos + a][pos + b] = remainder[a][b]
    for i in range(n):
        for j in range(n):
            if (got[i][j] - expect[i][j]) % mod != 0:
                raise AssertionError("2-adic split congruence failed")
    # the transform must be invertible over Z/2
    det2 = determinant([[x % 2 for x in row] for row in tmat])
    if det2 % 2 == 0:
        raise AssertionError("2-adic split transform not unimodular mod 2")


# ---------------------------------------------------------------------------
# archimedean side


def omega_rational_coefficient(n):
    """(c, e) with omega_n = c * pi^e: the unit-ball volume constant."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return Fraction(1, factorial(n // 2)), n // 2
    M = (n + 1) // 2
    return Fraction(4 ** M * factorial(M), factorial(2 * M)), (n - 1) // 2


def omega_interval(n, bits=None):
    """Certified interval for the volume of the unit n-ball."""
    bits = bits or precision_bits()
    c, e = omega_rational_coefficient(n)
    pi = pi_interval(bits)
    return pi.pow_int(e) * Interval.point(c)


def stirling_omega_upper(n, bits=None):
    """Upper bound for omega_n from Stirling: (1/sqrt(n pi)) (2 pi e / n)^(n/2)."""
    bits = bits or precision_bits()
    pi = pi_interval(bits)
    e = e_interval(bits)
    lead = Interval.point(1) / (Interval.point(n) * pi).sqrt(bits)
    body = pow_half_integer(pi * e * Interval.point(Fraction(2, n)), n, bits)
    return (lead * body).hi


def infinity_density(n, disc, y, bits=None):
    """Certified interval for the archimedean density at y > 0.

    The density of the value distribution of an n-variable positive form
    of discriminant `disc` at level y is (n / (2 sqrt(disc))) omega_n
    y^(n/2 - 1).
    """
    if n < 1:
        raise ValueError("n must be positive")
    y = Fraction(y)
    disc = Fraction(disc)
    if y <= 0 or disc <= 0:
        raise ValueError("y and disc must be positive")
    bits = bits or precision_bits()
    lead = Interval.point(Fraction(n, 2)) / Interval.point(disc).sqrt(bits)
    ypow = pow_half_integer(Interval.point(y), n - 2, bits)
    return lead * omega_interval(n, bits) * ypow


def zeta_interval(s, terms=64):
    """Certified rational interval for zeta(s), integer s >= 2.

    Partial sum plus the integral bracket for the tail:
    (N+1)^(1-s)/(s-1) <= tail <= N^(1-s)/(s-1).
    """
    if s < 2:
        raise ValueError("s must be >= 2")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    partial = sum(Fraction(1, j ** s) for j in range(1, terms + 1))
    lo = partial + Fraction(1, (terms + 1) ** (s - 1) * (s - 1))
    hi = partial + Fraction(1, terms ** (s - 1) * (s - 1))
    return Interval(lo, hi)
