"""Sparse multivariate polynomial kernel over Gaussian rationals.

A polynomial in the variables (x_1 .. x_n, hbar) is a dict mapping a packed
exponent key to a scalar triple from :mod:`starnambu.gauss`.  Exponents are
packed 16 bits per variable, x_1 in the lowest field and hbar in the highest,
so that monomial multiplication is integer addition on keys.  The same kernel
with n = 0 serves as the hbar-polynomial ring used by the operator backend.

All functions treat dicts as immutable values and never store a zero
coefficient.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

from .gauss import (QONE, qadd, qis_zero, qmul, qpow_i, qdiv,
                    qfromfrac, qre, qim)

BITS = 16
MASK = (1 << BITS) - 1

Poly = Dict[int, tuple]


def pzero() -> Poly:
    return {}


def pconst(c) -> Poly:
    return {} if qis_zero(c) else {0: c}


PONE = {0: QONE}


def pvar(index: int, power: int = 1) -> Poly:
    """x_index (0-based); the hbar field is index == nvars."""
    return {power << (BITS * index): QONE}


def phbar(nvars: int, power: int = 1) -> Poly:
    return {power << (BITS * nvars): QONE}


def pack(exps: Tuple[int, ...]) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= e << (BITS * i)
    return key


def unpack(key: int, nfields: int) -> Tuple[int, ...]:
    return tuple((key >> (BITS * i)) & MASK for i in range(nfields))


def padd(f: Poly, g: Poly) -> Poly:
    if not f:
        return dict(g)
    if not g:
        return dict(f)
    out = dict(f)
    get = out.get
    for k, c in g.items():
        prev = get(k)
        if prev is None:
            out[k] = c
            continue
        pa, pb, pd = prev
        ca, cb, cd = c
        if pd == cd:
            sa = pa + ca
            sb = pb + cb
            sd = pd
        else:
            sa = pa * cd + ca * pd
            sb = pb * cd + cb * pd
            sd = pd * cd
        if sa == 0 and sb == 0:
            del out[k]
        elif sd == 1:
            out[k] = (sa, sb, 1)
        else:
            cf = gcd(gcd(sa, sb), sd)
            out[k] = (sa // cf, sb // cf, sd // cf) if cf > 1 else (sa, sb, sd)
    return out


def psub(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    get = out.get
    for k, c in g.items():
        prev = get(k)
        if prev is None:
            out[k] = (-c[0], -c[1], c[2])
            continue
        pa, pb, pd = prev
        ca, cb, cd = c
        if pd == cd:
            sa = pa - ca
            sb = pb - cb
            sd = pd
        else:
            sa = pa * cd - ca * pd
            sb = pb * cd - cb * pd
            sd = pd * cd
        if sa == 0 and sb == 0:
            del out[k]
        elif sd == 1:
            out[k] = (sa, sb, 1)
        else:
            cf = gcd(gcd(sa, sb), sd)
            out[k] = (sa // cf, sb // cf, sd // cf) if cf > 1 else (sa, sb, sd)
    return out


def pneg(f: Poly) -> Poly:
    return {k: (-c[0], -c[1], c[2]) for k, c in f.items()}


def pscale(f: Poly, c) -> Poly:
    if qis_zero(c):
        return {}
    return {k: qmul(v, c) for k, v in f.items()}


def pmul(f: Poly, g: Poly) -> Poly:
    """Sparse product; the scalar arithmetic is inlined since this loop
    dominates every bracket computation."""
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    if len(f) == 1:
        ((k1, (a1, b1, d1)),) = f.items()
        out = {}
        for k2, (a2, b2, d2) in g.items():
            if b1 == 0 and b2 == 0:
                na = a1 * a2
                nb = 0
            else:
                na = a1 * a2 - b1 * b2
                nb = a1 * b2 + b1 * a2
            nd = d1 * d2
            if nd != 1:
                cf = gcd(gcd(na, nb), nd)
                if cf > 1:
                    na //= cf
                    nb //= cf
                    nd //= cf
            out[k1 + k2] = (na, nb, nd)
        return out
    out: Poly = {}
    get = out.get
    gitems = list(g.items())
    for k1, (a1, b1, d1) in f.items():
        for k2, (a2, b2, d2) in gitems:
            k = k1 + k2
            if b1 == 0 and b2 == 0:
                na = a1 * a2
                nb = 0
            else:
                na = a1 * a2 - b1 * b2
                nb = a1 * b2 + b1 * a2
            nd = d1 * d2
            if nd != 1:
                cf = gcd(gcd(na, nb), nd)
                if cf > 1:
                    na //= cf
                    nb //= cf
                    nd //= cf
            prev = get(k)
            if prev is None:
                out[k] = (na, nb, nd)
                continue
            pa, pb, pd = prev
            if pd == nd:
                sa = pa + na
                sb = pb + nb
                sd = pd
            else:
                sa = pa * nd + na * pd
                sb = pb * nd + nb * pd
                sd = pd * nd
            if sa == 0 and sb == 0:
                del out[k]
            elif sd == 1:
                out[k] = (sa, sb, 1)
            else:
                cf = gcd(gcd(sa, sb), sd)
                out[k] = (sa // cf, sb // cf, sd // cf) if cf > 1 \
                    else (sa, sb, sd)
    return out


def pmul_monomial(f: Poly, key: int, c) -> Poly:
    if qis_zero(c):
        return {}
    return {k + key: qmul(v, c) for k, v in f.items()}


def ppow(f: Poly, n: int) -> Poly:
    out = dict(PONE)
    for _ in range(n):
        out = pmul(out, f)
    return out


def pis_zero(f: Poly) -> bool:
    return not f


def pequal(f: Poly, g: Poly) -> bool:
    return f == g


def pderive(f: Poly, index: int) -> Poly:
    """Partial derivative with respect to variable `index` (0-based field)."""
    shift = BITS * index
    out: Poly = {}
    for k, c in f.items():
        e = (k >> shift) & MASK
        if e:
            out[k - (1 << shift)] = qmul(c, (e, 0, 1)) if e > 1 else c
    return out


def pdeg_field(f: Poly, index: int) -> int:
    shift = BITS * index
    d = 0
    for k in f:
        e = (k >> shift) & MASK
        if e > d:
            d = e
    return d


def ptotal_deg(key: int, nfields: int) -> int:
    t = 0
    for i in range(nfields):
        t += (key >> (BITS * i)) & MASK
    return t


def grlex_key(key: int, nfields: int):
    """Sort key for graded-lex order (x_1 most significant after degree)."""
    exps = unpack(key, nfields)
    return (sum(exps), exps)


def plead(f: Poly, nfields: int) -> Tuple[int, tuple]:
    """Leading (key, coeff) under graded lex; raises on zero polynomial."""
    best = max(f, key=lambda k: grlex_key(k, nfields))
    return best, f[best]


def pmonic(f: Poly, nfields: int) -> Tuple[Poly, tuple]:
    """Scale f so its graded-lex leading coefficient is one.

    Returns (monic_poly, factor) with f == factor * monic_poly.
    """
    if not f:
        return f, QONE
    _, lc = plead(f, nfields)
    if lc == QONE:
        return f, QONE
    return {k: qdiv(c, lc) for k, c in f.items()}, lc


def _fits(k: int, key: int, nfields: int) -> bool:
    for i in range(nfields):
        sh = BITS * i
        if ((k >> sh) & MASK) < ((key >> sh) & MASK):
            return False
    return True


def pdivmod_exact(f: Poly, g: Poly, nfields: int) -> Optional[Poly]:
    """Return f / g when g divides f exactly, else None.

    Division peels leading terms under the plain packed-integer order,
    which is lexicographic with hbar most significant; any monomial order
    gives the same exact quotient, and raw int comparison keeps the heap
    cheap.
    """
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    gkey = max(g)
    gc = g[gkey]
    gpairs = [(k, c) for k, c in g.items() if k != gkey]
    rem = dict(f)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quo: Poly = {}
    while rem:
        while True:
            rkey = -heap[0]
            if rkey in rem:
                break
            heapq.heappop(heap)
        if not _fits(rkey, gkey, nfields):
            return None
        qkey = rkey - gkey
        qc = qdiv(rem[rkey], gc)
        quo[qkey] = qc
        del rem[rkey]
        heapq.heappop(heap)
        for k, c in gpairs:
            kk = k + qkey
            prev = rem.get(kk)
            prod = qmul(c, qc)
            if prev is None:
                rem[kk] = (-prod[0], -prod[1], prod[2])
                heapq.heappush(heap, -kk)
            else:
                s = qadd(prev, (-prod[0], -prod[1], prod[2]))
                if s[0] == 0 and s[1] == 0:
                    del rem[kk]
                else:
                    rem[kk] = s
    return quo


def pdivisible_hbar(f: Poly, nvars: int, k: int) -> bool:
    shift = BITS * nvars
    return all(((key >> shift) & MASK) >= k for key in f)


def pshift_hbar(f: Poly, nvars: int, k: int) -> Poly:
    """Multiply by hbar**k (k may be negative when exactly divisible)."""
    delta = k << (BITS * nvars)
    return {key + delta: c for key, c in f.items()}


def pdrop_hbar(f: Poly, nvars: int) -> Poly:
    """Set hbar to zero: keep only hbar-free monomials."""
    shift = BITS * nvars
    return {k: c for k, c in f.items() if not (k >> shift)}


def phas_hbar(f: Poly, nvars: int) -> bool:
    shift = BITS * nvars
    return any(k >> shift for k in f)


def pdivide_ihbar(f: Poly, nvars: int, k: int) -> Optional[Poly]:
    """Exact division by (i*hbar)**k, or None if not divisible."""
    if k == 0:
        return dict(f)
    if not pdivisible_hbar(f, nvars, k):
        return None
    factor = qpow_i(-k % 4)
    delta = k << (BITS * nvars)
    return {key - delta: qmul(c, factor) for key, c in f.items()}


def peval(f: Poly, nvars: int, xvals, hbar_val) -> tuple:
    """Evaluate at rational x values and a rational hbar value."""
    total = (0, 0, 1)
    for key, c in f.items():
        m = Fraction(1)
        for i in range(nvars):
            e = (key >> (BITS * i)) & MASK
            if e:
                m *= Fraction(xvals[i]) ** e
        eh = (key >> (BITS * nvars)) & MASK
        if eh:
            m *= Fraction(hbar_val) ** eh
        total = qadd(total, qmul(c, qfromfrac(m)))
    return total


def pstr(f: Poly, nvars: int, names=None) -> str:
    """Human-readable form, mainly for debugging and error witnesses."""
    if not f:
        return "0"
    if names is None:
        names = [f"x{i + 1}" for i in range(nvars)] + ["hbar"]
    parts = []
    for key in sorted(f, key=lambda k: grlex_key(k, nvars + 1), reverse=True):
        c = f[key]
        factors = []
        for i in range(nvars + 1):
            e = (key >> (BITS * i)) & MASK
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        re, im = qre(c), qim(c)
        if im == 0:
            cs = str(re)
        elif re == 0:
            cs = f"{im}*i"
        else:
            cs = f"({re}{'+' if im > 0 else '-'}{abs(im)}*i)"
        if factors and cs == "1":
            parts.append("*".join(factors))
        elif factors and cs == "-1":
            parts.append("-" + "*".join(factors))
        else:
            parts.append("*".join([cs] + factors) if factors else cs)
    return " + ".join(parts).replace("+ -", "- ")
