"""Bracket calculus: star product, Poisson/Moyal brackets, Nambu Jacobians,
symplectic traces, and fully (anti)symmetrized k-products over any
associative algebra.

The star product is evaluated through the factorized bidifferential form

    f * g = sum over (alpha, beta) of
            (i*hbar/2)**(|alpha|+|beta|) * (-1)**|beta| / (alpha! beta!)
            * (d_x^alpha d_p^beta f) * (d_p^alpha d_x^beta g),

whose terms are exactly the merged ordered pairs produced by iterating the
Poisson bidifferential; alpha is bounded by the momentum support of g and
beta by that of f, so the series terminates at deg_p(f) + deg_p(g).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .errors import ArityError, DimensionError
from .gauss import qmul, qpow_i
from .phase import PhaseExpr
from .poly import BITS, MASK


# -- star product ------------------------------------------------------


def _p_chain(f: PhaseExpr) -> Dict[int, PhaseExpr]:
    """All nonzero iterated momentum derivatives, keyed by packed order."""
    out = {0: f}
    frontier = [0]
    n = f.n
    while frontier:
        nxt = []
        for key in frontier:
            base = out[key]
            for a in range(n):
                k2 = key + (1 << (BITS * a))
                if k2 in out:
                    continue
                d = base.diff_p(a)
                if d.is_zero():
                    continue
                out[k2] = d
                nxt.append(k2)
        frontier = nxt
    return out


def _total(key: int, n: int) -> int:
    t = 0
    for i in range(n):
        t += (key >> (BITS * i)) & MASK
    return t


def _fact_key(key: int, n: int) -> int:
    f = 1
    for i in range(n):
        e = (key >> (BITS * i)) & MASK
        if e > 1:
            f *= factorial(e)
    return f


def _x_chain(base: PhaseExpr, keys_sorted: Sequence[int], n: int) -> Dict[int, PhaseExpr]:
    """Iterated x-derivatives of base for every key in a downset."""
    table = {0: base}
    for key in keys_sorted:
        if key == 0:
            continue
        for a in range(n):
            if (key >> (BITS * a)) & MASK:
                table[key] = table[key - (1 << (BITS * a))].diff_x(a)
                break
    return table


def _star_tables(f: PhaseExpr, g: PhaseExpr):
    """Derivative tables shared by f*g and g*f."""
    n = f.n
    fp = _p_chain(f)
    gp = _p_chain(g)
    f_orders = sorted(fp, key=lambda k: _total(k, n))
    g_orders = sorted(gp, key=lambda k: _total(k, n))
    # x-derivatives of d_p^beta f over every alpha in g's downset, and
    # x-derivatives of d_p^alpha g over every beta in f's downset.
    fx = {beta: _x_chain(fp[beta], g_orders, n) for beta in f_orders}
    gx = {alpha: _x_chain(gp[alpha], f_orders, n) for alpha in g_orders}
    return f_orders, g_orders, fx, gx


def _star_sum(f_orders, g_orders, fx, gx, n: int, bound: int,
              swap: bool) -> PhaseExpr:
    """Sum the bidifferential series; swap=True computes g*f."""
    from .radical import radd, ris_zero

    acc: Dict[int, Any] = {}
    for beta in f_orders:
        tb = _total(beta, n)
        fb = fx[beta]
        for alpha in g_orders:
            ta = _total(alpha, n)
            k = ta + tb
            assert k <= bound, "star series exceeded its termination bound"
            if swap:
                left = gx[alpha][beta]
                right = fb[alpha]
                sign_order = ta
            else:
                left = fb[alpha]
                right = gx[alpha][beta]
                sign_order = tb
            if left.is_zero() or right.is_zero():
                continue
            prod = left * right
            if prod.is_zero():
                continue
            num = 1 if sign_order % 2 == 0 else -1
            den = (1 << k) * _fact_key(alpha, n) * _fact_key(beta, n)
            scalar = qmul(qpow_i(k), (num, 0, den))
            term = prod.mul_scalar_hbar(scalar, k)
            for key, c in term.terms.items():
                prev = acc.get(key)
                if prev is None:
                    acc[key] = c
                else:
                    cc = radd(prev, c, n)
                    if ris_zero(cc):
                        del acc[key]
                    else:
                        acc[key] = cc
    return PhaseExpr(n, acc)


def star(f: PhaseExpr, g: PhaseExpr) -> PhaseExpr:
    """Associative noncommutative star product; exact, terminating series."""
    if f.n != g.n:
        raise DimensionError("star product needs equal dimensions")
    n = f.n
    if f.is_zero() or g.is_zero():
        return PhaseExpr.zero(n)
    bound = f.momentum_degree() + g.momentum_degree()
    f_orders, g_orders, fx, gx = _star_tables(f, g)
    return _star_sum(f_orders, g_orders, fx, gx, n, bound, swap=False)


def star_commutator(f: PhaseExpr, g: PhaseExpr) -> PhaseExpr:
    """f*g - g*f computed from one shared set of derivative tables.

    On the coefficient c of each (alpha, beta) pair the swap changes only
    the (-1)**|beta| factor into (-1)**|alpha|, so both directions reuse
    the same tables.
    """
    if f.n != g.n:
        raise DimensionError("star commutator needs equal dimensions")
    n = f.n
    if f.is_zero() or g.is_zero():
        return PhaseExpr.zero(n)
    bound = f.momentum_degree() + g.momentum_degree()
    f_orders, g_orders, fx, gx = _star_tables(f, g)
    fg = _star_sum(f_orders, g_orders, fx, gx, n, bound, swap=False)
    gf = _star_sum(f_orders, g_orders, fx, gx, n, bound, swap=True)
    return fg - gf


def poisson(f: PhaseExpr, g: PhaseExpr) -> PhaseExpr:
    """Classical Poisson bracket sum(d_x f d_p g - d_p f d_x g)."""
    if f.n != g.n:
        raise DimensionError("poisson bracket needs equal dimensions")
    n = f.n
    total = PhaseExpr.zero(n)
    for a in range(n):
        total = total + f.diff_x(a) * g.diff_p(a) - f.diff_p(a) * g.diff_x(a)
    return total


def moyal(f: PhaseExpr, g: PhaseExpr) -> PhaseExpr:
    """Moyal bracket (f*g - g*f)/(i*hbar); collapses to poisson at hbar=0."""
    return star_commutator(f, g).divide_exact_hbar(1)


# -- Nambu brackets ----------------------------------------------------


def nambu_jacobian(entries: Sequence[PhaseExpr]) -> PhaseExpr:
    """Jacobian determinant of the entries with respect to (x1,p1,...,xN,pN).

    Row order is the argument order; the variable (column) order is fixed,
    matching the sign conventions used throughout the bracket identities.
    """
    entries = list(entries)
    if not entries:
        raise ArityError("nambu bracket needs at least one entry")
    n = entries[0].n
    m = 2 * n
    if len(entries) != m:
        raise ArityError(f"nambu bracket needs {m} entries for dimension {n}")
    for e in entries:
        if e.n != n:
            raise DimensionError("mixed dimensions in nambu bracket")
    grads: List[List[PhaseExpr]] = []
    for e in entries:
        row = []
        for a in range(n):
            row.append(e.diff_x(a))
            row.append(e.diff_p(a))
        grads.append(row)

    memo: Dict[Tuple[int, int], PhaseExpr] = {}

    def minor(i: int, mask: int) -> PhaseExpr:
        if i == m:
            return PhaseExpr.one(n)
        got = memo.get((i, mask))
        if got is not None:
            return got
        total = PhaseExpr.zero(n)
        sign = 1
        for j in range(m):
            bit = 1 << j
            if not mask & bit:
                continue
            a = grads[i][j]
            if not a.is_zero():
                sub = minor(i + 1, mask & ~bit)
                if not sub.is_zero():
                    term = a * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[(i, mask)] = total
        return total

    return minor(0, (1 << m) - 1)


def symplectic_trace(entries: Sequence[PhaseExpr], n: Optional[int] = None) -> PhaseExpr:
    """Contract a rank-2k bracket down from the full 2N-dimensional Jacobian.

    Appends N-k coordinate/momentum pairs in all ways and sums: summing
    ordered index tuples and dividing by (N-k)! equals summing over the
    distinct unordered insertions done here, since repeated pairs vanish
    and pair swaps are even permutations.  For k=1 this is the Poisson
    bracket.
    """
    entries = list(entries)
    if not entries:
        raise ArityError("symplectic trace needs at least one entry")
    if len(entries) % 2:
        raise ArityError("symplectic trace needs an even number of entries")
    dim = entries[0].n if n is None else n
    k = len(entries) // 2
    if k > dim:
        raise ArityError(f"rank {2 * k} exceeds phase-space dimension {2 * dim}")
    insert = dim - k
    total = PhaseExpr.zero(dim)
    for combo in combinations(range(dim), insert):
        ext = list(entries)
        for i in combo:
            ext.append(PhaseExpr.coord(dim, i))
            ext.append(PhaseExpr.momentum(dim, i))
        total = total + nambu_jacobian(ext)
    return total


# -- generic antisymmetrized / symmetrized products --------------------


@dataclass(frozen=True)
class AlgebraHandle:
    """An associative unital algebra the k-products can run over."""

    kind: str
    unit: Any
    mul: Callable[[Any, Any], Any]
    eq: Callable[[Any, Any], bool]


def phase_algebra(n: int) -> AlgebraHandle:
    return AlgebraHandle("phase-star", PhaseExpr.one(n), star,
                         lambda a, b: a.equals(b))


@dataclass
class BracketStats:
    nodes: int = 0
    products: int = 0


@dataclass
class BracketResult:
    value: Any
    stats: BracketStats = field(default_factory=BracketStats)


class SubsetCache:
    """Cross-call cache of sub-bracket values, keyed by entry identity.

    Holds references to the keyed operands so ids stay valid.
    """

    def __init__(self):
        self._data: Dict[tuple, Any] = {}
        self._pins: list = []

    def key(self, signed: bool, subset: tuple) -> tuple:
        return (signed,) + tuple(id(e) for e in subset)

    def get(self, k):
        return self._data.get(k)

    def put(self, k, subset, value):
        self._pins.append(subset)
        self._data[k] = value


def _perm_sign(perm: Sequence[int]) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _naive_fold(entries, alg, signed: bool, stats: BracketStats):
    total = None
    for perm in permutations(range(len(entries))):
        acc = entries[perm[0]]
        for idx in perm[1:]:
            acc = alg.mul(acc, entries[idx])
            stats.products += 1
        if signed and _perm_sign(perm) < 0:
            acc = -acc
        total = acc if total is None else total + acc
    return total


def _subset_fold(entries, alg, signed: bool, stats: BracketStats,
                 cache: Optional[SubsetCache]):
    k = len(entries)
    memo: Dict[int, Any] = {}

    def eval_mask(mask: int):
        got = memo.get(mask)
        if got is not None:
            return got
        positions = [j for j in range(k) if mask & (1 << j)]
        ck = None
        if cache is not None:
            ck = cache.key(signed, tuple(entries[j] for j in positions))
            hit = cache.get(ck)
            if hit is not None:
                memo[mask] = hit
                return hit
        stats.nodes += 1
        if len(positions) == 1:
            val = entries[positions[0]]
        else:
            total = None
            sign = 1
            for j in positions:
                sub = eval_mask(mask & ~(1 << j))
                prod = alg.mul(entries[j], sub)
                stats.products += 1
                if signed and sign < 0:
                    prod = -prod
                total = prod if total is None else total + prod
                if signed:
                    sign = -sign
            val = total
        memo[mask] = val
        if cache is not None:
            subset = tuple(entries[j] for j in positions)
            cache.put(ck, subset, val)
        return val

    return eval_mask((1 << k) - 1)


def qnb(entries: Sequence[Any], alg: AlgebraHandle, naive: bool = False,
        cache: Optional[SubsetCache] = None) -> BracketResult:
    """Fully antisymmetrized product over all permutations.

    The default path is the subset recursion
    [A1..Ak] = sum_j (-1)**(j-1) Aj * [A1.. without Aj ..Ak]
    memoized over argument subsets; it agrees exactly with the naive
    k!-term sum, which stays available as the cross-check oracle.
    """
    entries = list(entries)
    if not entries:
        raise ArityError("bracket of zero arguments")
    stats = BracketStats()
    if naive:
        value = _naive_fold(entries, alg, True, stats)
    else:
        value = _subset_fold(entries, alg, True, stats, cache)
    return BracketResult(value, stats)


def jordan(entries: Sequence[Any], alg: AlgebraHandle, naive: bool = False,
           cache: Optional[SubsetCache] = None) -> BracketResult:
    """Fully symmetrized product over all permutations (no signs)."""
    entries = list(entries)
    if not entries:
        raise ArityError("jordan product of zero arguments")
    stats = BracketStats()
    if naive:
        value = _naive_fold(entries, alg, False, stats)
    else:
        value = _subset_fold(entries, alg, False, stats, cache)
    return BracketResult(value, stats)


def commutator(alg: AlgebraHandle, a, b):
    return alg.mul(a, b) - alg.mul(b, a)


def resolve_qnb4(a, b, c, d, alg: AlgebraHandle):
    """Explicit commutator-pair resolution of the 4-argument bracket."""
    ab = commutator(alg, a, b)
    cd = commutator(alg, c, d)
    ac = commutator(alg, a, c)
    bd = commutator(alg, b, d)
    ad = commutator(alg, a, d)
    cb = commutator(alg, c, b)
    return (alg.mul(ab, cd) - alg.mul(ac, bd) - alg.mul(ad, cb)
            + alg.mul(cd, ab) - alg.mul(bd, ac) - alg.mul(cb, ad))
