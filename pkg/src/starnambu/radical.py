"""Coefficient field kernel: elements (A + B*s)/D over the radical s.

s is a formal generator with the single relation s**2 = 1 - sum(x_i**2).
A and B are polynomials in (x_1..x_n, hbar); the denominator D is an s-free
monic polynomial in the x's alone.  Internally every denominator is kept in
the factored form rbar**i * q2**j * rest with rbar = q**2 - 1 (the monic
associate of 1 - q**2) and q2 = sum x_i**2; the factored powers are shared
cached objects, so denominator arithmetic is exponent bookkeeping rather
than polynomial division.  Reduction is opportunistic; equality is decided
by cross-multiplication, so reduction affects performance only.
"""

from __future__ import annotations

import random as _random
from typing import NamedTuple, Tuple

from .errors import DivisionByZero, EvaluationPole, InexactDivision, NotInvertible
from .gauss import QONE, qdiv, qinv, qis_zero, qmul, qadd, qfromfrac
from .poly import (PONE, Poly, padd, pconst, pderive, pdivide_ihbar,
                   pdivisible_hbar, pdivmod_exact, pdrop_hbar, peval,
                   phas_hbar, pis_zero, pmonic, pmul, pneg, pscale, pshift_hbar,
                   psub, pstr, pvar)
from .gauss import qpow_i


class RadicalCoeff(NamedTuple):
    """One coefficient-field element, value (num_a + num_b*s)/denom."""

    num_a: Poly
    num_b: Poly
    denom: Poly


_POLY_ONE = {0: QONE}
_Q2_CACHE = {}
_R_CACHE = {}
_RBAR_CACHE = {}


def q2_poly(n: int) -> Poly:
    """sum of x_i**2."""
    p = _Q2_CACHE.get(n)
    if p is None:
        p = {}
        for i in range(n):
            p = padd(p, pmul(pvar(i), pvar(i)))
        _Q2_CACHE[n] = p
    return p


def r_poly(n: int) -> Poly:
    """1 - sum of x_i**2, the square of s."""
    p = _R_CACHE.get(n)
    if p is None:
        p = psub(dict(PONE), q2_poly(n))
        _R_CACHE[n] = p
    return p


def rbar_poly(n: int) -> Poly:
    """q**2 - 1, the monic associate of 1 - q**2."""
    p = _RBAR_CACHE.get(n)
    if p is None:
        p = pneg(r_poly(n))
        _RBAR_CACHE[n] = p
    return p


RZERO = RadicalCoeff({}, {}, _POLY_ONE)
RONE = RadicalCoeff(dict(PONE), {}, _POLY_ONE)


def _is_one(p: Poly) -> bool:
    return len(p) == 1 and p.get(0) == QONE


# -- factored denominator registry --------------------------------------

# denominator poly -> (i, j, rest) meaning rbar**i * q2**j * rest, rest monic
_FACT_BY_ID: dict = {}
_FACT_BY_VAL: dict = {}
_POW_CACHE: dict = {}


def _rq_pow(n: int, i: int, j: int, rest: Poly) -> Poly:
    """The shared denominator polynomial rbar**i * q2**j * rest."""
    if i == 0 and j == 0:
        if _is_one(rest):
            return _POLY_ONE
        return rest
    key = (n, i, j, id(rest)) if not _is_one(rest) else (n, i, j)
    got = _POW_CACHE.get(key)
    if got is not None:
        return got
    if j == 0:
        p = pmul(_rq_pow(n, i - 1, 0, _POLY_ONE), rbar_poly(n)) if i else dict(_POLY_ONE)
    else:
        p = pmul(_rq_pow(n, i, j - 1, _POLY_ONE), q2_poly(n))
    if not _is_one(rest):
        p = pmul(p, rest)
    _POW_CACHE[key] = p
    _FACT_BY_ID[id(p)] = (n, i, j, rest, p)
    return p


def _dfact(d: Poly, n: int) -> Tuple[tuple, int, int, Poly]:
    """Factor a denominator as lc * rbar**i * q2**j * rest (rest monic).

    Results are memoized by object identity and by value, so repeated
    denominators cost a dictionary lookup.
    """
    got = _FACT_BY_ID.get(id(d))
    if got is not None and got[4] is d:
        return QONE, got[1], got[2], got[3]
    vkey = (n, tuple(sorted(d.items())))
    got = _FACT_BY_VAL.get(vkey)
    if got is not None:
        return got[0], got[1], got[2], got[3]
    if phas_hbar(d, n):
        raise DivisionByZero("denominator may not involve hbar")
    nf = n + 1
    body, lc = pmonic(d, nf)
    i = j = 0
    if n > 0 and not _is_one(body):
        rb = rbar_poly(n)
        while True:
            q = pdivmod_exact(body, rb, nf)
            if q is None:
                break
            body, i = q, i + 1
        q2 = q2_poly(n)
        while True:
            q = pdivmod_exact(body, q2, nf)
            if q is None:
                break
            body, j = q, j + 1
    rest = body if not _is_one(body) else _POLY_ONE
    _FACT_BY_VAL[vkey] = (lc, i, j, rest)
    return lc, i, j, rest


# -- divisibility pre-filter ---------------------------------------------

# Evaluate numerators at deterministic pseudo-random points of the candidate
# factor's zero set over a prime field: a multiple always vanishes there, so
# a nonzero value rejects the trial division before polynomial arithmetic
# runs.  Rare false accepts are caught by the exact division that follows.

_FPRIME = 998244353
_FIMAG = pow(3, (_FPRIME - 1) // 4, _FPRIME)
_PTS_CACHE: dict = {}
_INV_CACHE: dict = {}


def _mod_inv(d: int) -> int:
    got = _INV_CACHE.get(d)
    if got is None:
        got = pow(d, _FPRIME - 2, _FPRIME)
        _INV_CACHE[d] = got
    return got


_POW_TABLE_SIZE = 512


def _pow_tables(vals):
    """Per-variable power tables val**e mod p for e < _POW_TABLE_SIZE."""
    p = _FPRIME
    tabs = []
    for v in vals:
        row = [1] * _POW_TABLE_SIZE
        acc = 1
        for e in range(1, _POW_TABLE_SIZE):
            acc = acc * v % p
            row[e] = acc
        tabs.append(row)
    return tuple(tabs)


def _variety_points(n: int):
    got = _PTS_CACHE.get(n)
    if got is not None:
        return got
    rng = _random.Random(0x5EED + n)
    p = _FPRIME
    r_pts = []
    if n == 1:
        for x1 in (1, p - 1):
            r_pts.append(_pow_tables((x1, rng.randrange(2, p))))
    else:
        while len(r_pts) < 2:
            u = [rng.randrange(1, p) for _ in range(n - 1)]
            nrm = sum(v * v for v in u) % p
            den = (1 + nrm) % p
            if den == 0:
                continue
            inv = _mod_inv(den)
            x = [(1 - nrm) * inv % p]
            x += [2 * v * inv % p for v in u]
            r_pts.append(_pow_tables(tuple(x) + (rng.randrange(2, p),)))
    q_pts = []
    if n >= 2:
        inv2 = _mod_inv(2)
        inv2i = _mod_inv(2 * _FIMAG % p)
        while len(q_pts) < 2:
            c = [rng.randrange(1, p) for _ in range(n - 2)]
            w = rng.randrange(1, p)
            rest = (-sum(v * v for v in c)) % p
            v = rest * _mod_inv(w) % p
            xa = (w + v) * inv2 % p
            xb = (w - v) * inv2i % p
            q_pts.append(_pow_tables(tuple(c) + (xa, xb, rng.randrange(2, p))))
    got = (tuple(r_pts), tuple(q_pts))
    _PTS_CACHE[n] = got
    return got


def _vanishes_at(poly: Poly, points) -> bool:
    if not poly:
        return True
    if not points:
        return True
    p = _FPRIME
    for tabs in points:
        tot = 0
        for key, (ca, cb, cd) in poly.items():
            if cd == 1:
                m = (ca + cb * _FIMAG) % p
            else:
                dm = cd % p
                if dm == 0:
                    return True
                m = (ca + cb * _FIMAG) * _mod_inv(dm) % p
            k = key
            i = 0
            while k:
                e = k & 0xFFFF
                if e:
                    row = tabs[i]
                    m = m * (row[e] if e < _POW_TABLE_SIZE
                             else pow(row[1], e, p)) % p
                k >>= 16
                i += 1
            tot = (tot + m) % p
        if tot:
            return False
    return True


# -- reduction -----------------------------------------------------------


def _cancel(a: Poly, b: Poly, i: int, j: int, rest: Poly, n: int) -> RadicalCoeff:
    """Cancel factored denominator parts against both numerators."""
    if not a and not b:
        return RZERO
    nf = n + 1
    if n > 0 and (i or j):
        r_pts, q_pts = _variety_points(n)
        rb = rbar_poly(n)
        while i > 0:
            if not (_vanishes_at(a, r_pts) and _vanishes_at(b, r_pts)):
                break
            qa = pdivmod_exact(a, rb, nf)
            if qa is None:
                break
            qb = pdivmod_exact(b, rb, nf)
            if qb is None:
                break
            a, b, i = qa, qb, i - 1
        q2 = q2_poly(n)
        while j > 0:
            if q_pts and not (_vanishes_at(a, q_pts) and _vanishes_at(b, q_pts)):
                break
            qa = pdivmod_exact(a, q2, nf)
            if qa is None:
                break
            qb = pdivmod_exact(b, q2, nf)
            if qb is None:
                break
            a, b, j = qa, qb, j - 1
    if not _is_one(rest):
        qa = pdivmod_exact(a, rest, nf)
        if qa is not None:
            qb = pdivmod_exact(b, rest, nf)
            if qb is not None:
                a, b, rest = qa, qb, _POLY_ONE
    d = _rq_pow(n, i, j, rest)
    return RadicalCoeff(a, b, d)


def rmake(num_a: Poly, num_b: Poly, denom: Poly, n: int) -> RadicalCoeff:
    """Build a reduced coefficient from raw parts (denominator s-free)."""
    if not denom:
        raise DivisionByZero("zero denominator in coefficient field")
    lc, i, j, rest = _dfact(denom, n)
    if lc != QONE:
        inv = qinv(lc)
        num_a = pscale(num_a, inv)
        num_b = pscale(num_b, inv)
    return _cancel(num_a, num_b, i, j, rest, n)


def rfrom_poly(p: Poly) -> RadicalCoeff:
    return RadicalCoeff(dict(p), {}, _POLY_ONE)


def rfrom_scalar(c) -> RadicalCoeff:
    return RadicalCoeff(pconst(c), {}, _POLY_ONE)


def rs_coeff() -> RadicalCoeff:
    """The radical s itself."""
    return RadicalCoeff({}, dict(PONE), _POLY_ONE)


def rw_coeff(n: int) -> RadicalCoeff:
    """w = (1 - s)/q**2 = 1/(1 + s)."""
    return _cancel(dict(PONE), {0: (-1, 0, 1)}, 0, 1, _POLY_ONE, n)


def ris_zero(c: RadicalCoeff) -> bool:
    return not c[0] and not c[1]


def ris_poly(c: RadicalCoeff) -> bool:
    return not c[1] and _is_one(c[2])


def _exps_of(d: Poly, n: int) -> Tuple[int, int, Poly]:
    got = _FACT_BY_ID.get(id(d))
    if got is not None and got[4] is d:
        return got[1], got[2], got[3]
    if _is_one(d):
        return 0, 0, _POLY_ONE
    lc, i, j, rest = _dfact(d, n)
    # denominators held by RadicalCoeff values are monic, so lc is one
    return i, j, rest


def _common_denominator(u: RadicalCoeff, v: RadicalCoeff, n: int):
    """Rewrite u, v over one factored denominator."""
    a1, b1, d1 = u
    a2, b2, d2 = v
    if d1 is d2 or d1 == d2:
        return a1, b1, a2, b2, d1
    i1, j1, rest1 = _exps_of(d1, n)
    i2, j2, rest2 = _exps_of(d2, n)
    if rest1 is rest2 or rest1 == rest2:
        ii, jj = max(i1, i2), max(j1, j2)
        s1 = _rq_pow(n, ii - i1, jj - j1, _POLY_ONE)
        s2 = _rq_pow(n, ii - i2, jj - j2, _POLY_ONE)
        if not _is_one(s1):
            a1, b1 = pmul(a1, s1), pmul(b1, s1)
        if not _is_one(s2):
            a2, b2 = pmul(a2, s2), pmul(b2, s2)
        return a1, b1, a2, b2, _rq_pow(n, ii, jj, rest1)
    s1 = _rq_pow(n, max(i2 - i1, 0), max(j2 - j1, 0), rest2)
    s2 = _rq_pow(n, max(i1 - i2, 0), max(j1 - j2, 0), rest1)
    if not _is_one(s1):
        a1, b1 = pmul(a1, s1), pmul(b1, s1)
    if not _is_one(s2):
        a2, b2 = pmul(a2, s2), pmul(b2, s2)
    d = _rq_pow(n, max(i1, i2), max(j1, j2), pmul(rest1, rest2))
    return a1, b1, a2, b2, d


def radd(u: RadicalCoeff, v: RadicalCoeff, n: int) -> RadicalCoeff:
    a1, b1, a2, b2, d = _common_denominator(u, v, n)
    a, b = padd(a1, a2), padd(b1, b2)
    if not a and not b:
        return RZERO
    return RadicalCoeff(a, b, d)


def rsub(u: RadicalCoeff, v: RadicalCoeff, n: int) -> RadicalCoeff:
    a1, b1, a2, b2, d = _common_denominator(u, v, n)
    a, b = psub(a1, a2), psub(b1, b2)
    if not a and not b:
        return RZERO
    return RadicalCoeff(a, b, d)


def rneg(u: RadicalCoeff) -> RadicalCoeff:
    return RadicalCoeff(pneg(u[0]), pneg(u[1]), u[2])


def rmul(u: RadicalCoeff, v: RadicalCoeff, n: int) -> RadicalCoeff:
    a1, b1, d1 = u
    a2, b2, d2 = v
    triv1 = _is_one(d1)
    triv2 = _is_one(d2)
    if not b1 and not b2:
        num_a = pmul(a1, a2)
        if triv1 and triv2:
            return RadicalCoeff(num_a, {}, _POLY_ONE)
        num_b: Poly = {}
    else:
        num_a = padd(pmul(a1, a2), pmul(pmul(b1, b2), r_poly(n)))
        num_b = padd(pmul(a1, b2), pmul(b1, a2))
        if triv1 and triv2:
            return RadicalCoeff(num_a, num_b, _POLY_ONE)
    i1, j1, rest1 = _exps_of(d1, n)
    i2, j2, rest2 = _exps_of(d2, n)
    if _is_one(rest1):
        rest = rest2
    elif _is_one(rest2):
        rest = rest1
    else:
        rest = pmul(rest1, rest2)
    return _cancel(num_a, num_b, i1 + i2, j1 + j2, rest, n)


def rscale(u: RadicalCoeff, c) -> RadicalCoeff:
    if qis_zero(c):
        return RZERO
    return RadicalCoeff(pscale(u[0], c), pscale(u[1], c), u[2])


def rinv(u: RadicalCoeff, n: int) -> RadicalCoeff:
    a, b, d = u
    if ris_zero(u):
        raise DivisionByZero("inverse of zero coefficient")
    den = psub(pmul(a, a), pmul(pmul(b, b), r_poly(n)))
    if pis_zero(den):
        raise DivisionByZero("inverse of zero coefficient")
    if phas_hbar(den, n):
        raise NotInvertible("inverse would need an hbar-dependent denominator")
    return rmake(pmul(d, a), pneg(pmul(d, b)), den, n)


def rdiv(u: RadicalCoeff, v: RadicalCoeff, n: int) -> RadicalCoeff:
    return rmul(u, rinv(v, n), n)


def rpow(u: RadicalCoeff, k: int, n: int) -> RadicalCoeff:
    if k < 0:
        return rpow(rinv(u, n), -k, n)
    out = RONE
    for _ in range(k):
        out = rmul(out, u, n)
    return out


def requal(u: RadicalCoeff, v: RadicalCoeff) -> bool:
    a1, b1, d1 = u
    a2, b2, d2 = v
    if d1 is d2 or d1 == d2:
        return a1 == a2 and b1 == b2
    return pmul(a1, d2) == pmul(a2, d1) and pmul(b1, d2) == pmul(b2, d1)


def rderive(u: RadicalCoeff, index: int, n: int) -> RadicalCoeff:
    """d/dx_index through the relation s' = -x_index * s / (1 - q**2).

    Works directly on the factored denominator rbar**i * q2**j * rest so the
    chain-rule factors never have to be divided back out.
    """
    a, b, d = u
    da = pderive(a, index)
    db = pderive(b, index)
    x = pvar(index)
    if _is_one(d):
        if not b:
            return RadicalCoeff(da, {}, _POLY_ONE) if da else RZERO
        # d/dx (A + B s) = A' + (B' + x B / rbar) s
        num_a = pmul(da, rbar_poly(n))
        num_b = padd(pmul(db, rbar_poly(n)), pmul(x, b))
        return _cancel(num_a, num_b, 1, 0, _POLY_ONE, n)
    i, j, rest = _exps_of(d, n)
    if not _is_one(rest):
        # generic quotient rule for unrecognized denominators
        r = r_poly(n)
        dd = pderive(d, index)
        num_a = pmul(psub(pmul(da, d), pmul(a, dd)), r)
        num_b = psub(pmul(psub(pmul(db, d), pmul(b, dd)), r),
                     pmul(pmul(x, b), d))
        return rmake(num_a, num_b, pmul(pmul(d, d), r), n)
    # chain terms: d/dx rbar**-i q2**-j picks up -2x (i/rbar + j/q2)
    need_r = 1 if (i or b) else 0
    need_q = 1 if j else 0
    rb = rbar_poly(n)
    q2 = q2_poly(n)
    if need_r and need_q:
        big = pmul(rb, q2)
        chain = pscale(padd(pscale(q2, (i, 0, 1)), pscale(rb, (j, 0, 1))),
                       (2, 0, 1))
        s_extra = q2
    elif need_r:
        big = rb
        chain = pconst((2 * i, 0, 1))
        s_extra = dict(PONE)
    else:
        big = q2
        chain = pconst((2 * j, 0, 1))
        s_extra = dict(PONE)
    xchain = pmul(x, chain)
    num_a = psub(pmul(da, big), pmul(a, xchain))
    num_b = pmul(db, big)
    if b:
        num_b = padd(num_b, pmul(pmul(x, s_extra), b))
        num_b = psub(num_b, pmul(b, xchain))
    return _cancel(num_a, num_b, i + need_r, j + need_q, _POLY_ONE, n)


def rsubst_hbar_zero(u: RadicalCoeff, n: int) -> RadicalCoeff:
    a = pdrop_hbar(u[0], n)
    b = pdrop_hbar(u[1], n)
    if not a and not b:
        return RZERO
    return RadicalCoeff(a, b, u[2])


def rtimes_ihbar(u: RadicalCoeff, n: int, k: int) -> RadicalCoeff:
    """Multiply by (i*hbar)**k for k >= 0."""
    if k == 0:
        return u
    c = qpow_i(k)
    return RadicalCoeff(pscale(pshift_hbar(u[0], n, k), c),
                        pscale(pshift_hbar(u[1], n, k), c), u[2])


def rdivide_ihbar(u: RadicalCoeff, n: int, k: int) -> RadicalCoeff:
    a = pdivide_ihbar(u[0], n, k)
    b = pdivide_ihbar(u[1], n, k)
    if a is None or b is None:
        raise InexactDivision(f"coefficient not divisible by hbar**{k}")
    if not a and not b:
        return RZERO
    return RadicalCoeff(a, b, u[2])


def rdivisible_hbar(u: RadicalCoeff, n: int, k: int) -> bool:
    return pdivisible_hbar(u[0], n, k) and pdivisible_hbar(u[1], n, k)


def reval(u: RadicalCoeff, n: int, xvals, sval, hbar_val) -> tuple:
    a = peval(u[0], n, xvals, hbar_val)
    b = peval(u[1], n, xvals, hbar_val)
    d = peval(u[2], n, xvals, hbar_val)
    if qis_zero(d):
        raise EvaluationPole("denominator vanishes at evaluation point")
    num = qadd(a, qmul(b, qfromfrac(sval)))
    return qdiv(num, d)


def rstr(u: RadicalCoeff, n: int, names=None) -> str:
    a, b, d = u
    if ris_zero(u):
        return "0"
    sa = pstr(a, n, names)
    parts = []
    if a:
        parts.append(sa if len(a) == 1 else f"({sa})")
    if b:
        sb = pstr(b, n, names)
        parts.append((sb if len(b) == 1 else f"({sb})") + "*s")
    joined = " + ".join(parts).replace("+ -", "- ")
    if len(parts) > 1:
        joined = f"({joined})"
    if not _is_one(d):
        joined = f"{joined}/({pstr(d, n, names)})"
    return joined
