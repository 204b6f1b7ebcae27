"""Canonical phase-space expressions.

A PhaseExpr over dimension n is a finite sum of momentum monomials with
coefficients in the radical field of :mod:`starnambu.radical`.  Momentum
exponents are packed 16 bits per variable, as in the polynomial kernel.
Values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .errors import DimensionError, DomainError, InexactDivision
from .gauss import GaussRational, qadd, qfromfrac, qmul, qpow_i
from .poly import BITS, MASK, PONE, phbar, pvar, pack
from .radical import (RadicalCoeff, RZERO, radd, rderive, rdivide_ihbar,
                      rdivisible_hbar, requal, reval, ris_poly, ris_zero,
                      rfrom_poly, rfrom_scalar, rinv, rmake, rmul, rneg,
                      rpow, rs_coeff, rscale, rsub, rsubst_hbar_zero,
                      rtimes_ihbar, rstr, rw_coeff, r_poly)


class PhaseExpr:
    """Exact phase-space function: momenta with radical-field coefficients.

    Values are immutable; repeated partial derivatives are memoized per
    instance since bracket evaluations differentiate the same operands
    many times.
    """

    __slots__ = ("n", "terms", "_dcache")
    __hash__ = None

    def __init__(self, n: int, terms: Dict[int, RadicalCoeff]):
        self.n = n
        self.terms = {k: c for k, c in terms.items() if not ris_zero(c)}
        self._dcache = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "PhaseExpr":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "PhaseExpr":
        return cls(n, {0: rfrom_poly(PONE)})

    @classmethod
    def const(cls, n: int, value) -> "PhaseExpr":
        if isinstance(value, tuple):
            c = value
        elif isinstance(value, GaussRational):
            c = value.triple()
        else:
            c = (Fraction(value).numerator, 0, Fraction(value).denominator)
        return cls(n, {0: rfrom_scalar(c)})

    @classmethod
    def coord(cls, n: int, a: int) -> "PhaseExpr":
        _check_index(n, a)
        return cls(n, {0: rfrom_poly(pvar(a))})

    @classmethod
    def momentum(cls, n: int, a: int) -> "PhaseExpr":
        _check_index(n, a)
        return cls(n, {1 << (BITS * a): rfrom_poly(PONE)})

    @classmethod
    def radical_s(cls, n: int) -> "PhaseExpr":
        return cls(n, {0: rs_coeff()})

    @classmethod
    def w_function(cls, n: int) -> "PhaseExpr":
        return cls(n, {0: rw_coeff(n)})

    @classmethod
    def hbar(cls, n: int, power: int = 1) -> "PhaseExpr":
        return cls(n, {0: rfrom_poly(phbar(n, power))})

    @classmethod
    def from_coeff(cls, n: int, c: RadicalCoeff) -> "PhaseExpr":
        return cls(n, {0: c})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_polynomial(self) -> bool:
        """True when no coefficient uses s or a nontrivial denominator."""
        return all(ris_poly(c) for c in self.terms.values())

    def coefficient(self, pexps: Tuple[int, ...]) -> RadicalCoeff:
        return self.terms.get(pack(pexps), RZERO)

    def momentum_profile(self) -> Tuple[int, ...]:
        prof = [0] * self.n
        for key in self.terms:
            for i in range(self.n):
                e = (key >> (BITS * i)) & MASK
                if e > prof[i]:
                    prof[i] = e
        return tuple(prof)

    def momentum_degree(self) -> int:
        deg = 0
        for key in self.terms:
            t = 0
            for i in range(self.n):
                t += (key >> (BITS * i)) & MASK
            if t > deg:
                deg = t
        return deg

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "PhaseExpr"):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "PhaseExpr") -> "PhaseExpr":
        self._check(other)
        n = self.n
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = radd(prev, c, n)
                if ris_zero(s):
                    del out[k]
                else:
                    out[k] = s
        return PhaseExpr(n, out)

    def __sub__(self, other: "PhaseExpr") -> "PhaseExpr":
        self._check(other)
        n = self.n
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = rneg(c)
            else:
                s = rsub(prev, c, n)
                if ris_zero(s):
                    del out[k]
                else:
                    out[k] = s
        return PhaseExpr(n, out)

    def __neg__(self) -> "PhaseExpr":
        return PhaseExpr(self.n, {k: rneg(c) for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PhaseExpr):
            self._check(other)
            n = self.n
            out: Dict[int, RadicalCoeff] = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    k = k1 + k2
                    c = rmul(c1, c2, n)
                    prev = out.get(k)
                    if prev is None:
                        if not ris_zero(c):
                            out[k] = c
                    else:
                        s = radd(prev, c, n)
                        if ris_zero(s):
                            del out[k]
                        else:
                            out[k] = s
            return PhaseExpr(n, out)
        return self.scale_fraction(other)

    __rmul__ = __mul__

    def scale_fraction(self, value) -> "PhaseExpr":
        f = Fraction(value)
        return self.scale((f.numerator, 0, f.denominator))

    def scale(self, c: tuple) -> "PhaseExpr":
        if c[0] == 0 and c[1] == 0:
            return PhaseExpr.zero(self.n)
        return PhaseExpr(self.n, {k: rscale(v, c) for k, v in self.terms.items()})

    def times_i(self) -> "PhaseExpr":
        return self.scale((0, 1, 1))

    def times_ihbar(self, k: int = 1) -> "PhaseExpr":
        """Multiply by (i*hbar)**k."""
        n = self.n
        return PhaseExpr(n, {key: rtimes_ihbar(c, n, k)
                             for key, c in self.terms.items()})

    def times_hbar(self, k: int = 1) -> "PhaseExpr":
        return self.times_ihbar(k).scale(qpow_i(-k % 4))

    def mul_scalar_hbar(self, c: tuple, k: int) -> "PhaseExpr":
        """Multiply by the scalar c and by hbar**k in one pass."""
        from .poly import pscale, pshift_hbar
        n = self.n
        out = {}
        for key, co in self.terms.items():
            a = pscale(pshift_hbar(co[0], n, k), c)
            b = pscale(pshift_hbar(co[1], n, k), c)
            out[key] = RadicalCoeff(a, b, co[2])
        return PhaseExpr(n, out)

    def __pow__(self, k: int) -> "PhaseExpr":
        if k < 0:
            raise DomainError("negative powers of phase expressions")
        out = PhaseExpr.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def mul_coeff(self, c: RadicalCoeff) -> "PhaseExpr":
        n = self.n
        return PhaseExpr(n, {k: rmul(v, c, n) for k, v in self.terms.items()})

    def invert_coefficient(self) -> "PhaseExpr":
        """Inverse of a momentum-free expression, when representable."""
        if list(self.terms.keys()) not in ([0], []):
            raise DomainError("only momentum-free expressions are invertible")
        if not self.terms:
            from .errors import DivisionByZero
            raise DivisionByZero("inverse of zero expression")
        return PhaseExpr(self.n, {0: rinv(self.terms[0], self.n)})

    def __truediv__(self, other: "PhaseExpr") -> "PhaseExpr":
        if isinstance(other, PhaseExpr):
            return self * other.invert_coefficient()
        return self.scale_fraction(Fraction(1, 1) / Fraction(other))

    # -- calculus -----------------------------------------------------

    def diff_x(self, a: int) -> "PhaseExpr":
        _check_index(self.n, a)
        cache = self._dcache
        if cache is None:
            cache = self._dcache = {}
        got = cache.get(("x", a))
        if got is not None:
            return got
        n = self.n
        out = {}
        for k, c in self.terms.items():
            d = rderive(c, a, n)
            if not ris_zero(d):
                out[k] = d
        result = PhaseExpr(n, out)
        cache[("x", a)] = result
        return result

    def diff_p(self, a: int) -> "PhaseExpr":
        _check_index(self.n, a)
        cache = self._dcache
        if cache is None:
            cache = self._dcache = {}
        got = cache.get(("p", a))
        if got is not None:
            return got
        n = self.n
        shift = BITS * a
        out: Dict[int, RadicalCoeff] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & MASK
            if e:
                kk = k - (1 << shift)
                nc = c if e == 1 else rscale(c, (e, 0, 1))
                prev = out.get(kk)
                out[kk] = nc if prev is None else radd(prev, nc, n)
        result = PhaseExpr(n, out)
        cache[("p", a)] = result
        return result

    def divide_exact_hbar(self, k: int) -> "PhaseExpr":
        """Exact division by (i*hbar)**k; InexactDivision if impossible."""
        if k == 0:
            return self
        n = self.n
        out = {}
        for key, c in self.terms.items():
            out[key] = rdivide_ihbar(c, n, k)
        return PhaseExpr(n, out)

    def divisible_hbar(self, k: int) -> bool:
        n = self.n
        return all(rdivisible_hbar(c, n, k) for c in self.terms.values())

    def subst_hbar_zero(self) -> "PhaseExpr":
        n = self.n
        out = {}
        for key, c in self.terms.items():
            cc = rsubst_hbar_zero(c, n)
            if not ris_zero(cc):
                out[key] = cc
        return PhaseExpr(n, out)

    # -- comparison and evaluation -------------------------------------

    def equals(self, other: "PhaseExpr") -> bool:
        self._check(other)
        if self.terms.keys() != other.terms.keys():
            return False
        return all(requal(c, other.terms[k]) for k, c in self.terms.items())

    def __eq__(self, other):
        if isinstance(other, PhaseExpr):
            return self.equals(other)
        return NotImplemented

    def evaluate(self, point: "EvalPoint", hbar_value) -> GaussRational:
        if len(point.xvals) != self.n:
            raise DimensionError("evaluation point has wrong dimension")
        n = self.n
        total = (0, 0, 1)
        for key, c in self.terms.items():
            base = reval(c, n, point.xvals, point.sval, hbar_value)
            m = Fraction(1)
            for i in range(n):
                e = (key >> (BITS * i)) & MASK
                if e:
                    m *= Fraction(point.pvals[i]) ** e
            total = qadd(total, qmul(base, qfromfrac(m)))
        return GaussRational.from_triple(total)

    def __repr__(self):
        return f"PhaseExpr({self.n}, {self.text()})"

    def text(self) -> str:
        """Debug-oriented readable form (the canonical printer lives in lang)."""
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            mono = []
            for i in range(self.n):
                e = (key >> (BITS * i)) & MASK
                if e == 1:
                    mono.append(f"p{i + 1}")
                elif e > 1:
                    mono.append(f"p{i + 1}^{e}")
            cs = rstr(self.terms[key], self.n)
            parts.append("*".join([cs] + mono) if mono else cs)
        return " + ".join(parts)


def _check_index(n: int, a: int):
    if not 0 <= a < n:
        raise DomainError(f"variable index {a} out of range for dimension {n}")


@dataclass(frozen=True)
class EvalPoint:
    """Rational phase-space point with an exact value for the radical."""

    xvals: Tuple[Fraction, ...]
    pvals: Tuple[Fraction, ...]
    sval: Fraction

    def __post_init__(self):
        x = tuple(Fraction(v) for v in self.xvals)
        p = tuple(Fraction(v) for v in self.pvals)
        s = Fraction(self.sval)
        object.__setattr__(self, "xvals", x)
        object.__setattr__(self, "pvals", p)
        object.__setattr__(self, "sval", s)
        if len(x) != len(p):
            raise DomainError("coordinate and momentum tuples differ in length")
        if s * s != 1 - sum(v * v for v in x):
            raise DomainError("sval**2 must equal 1 - sum of squares exactly")


def random_circle_point(n: int, rng) -> EvalPoint:
    """Random rational point with s rational, away from q**2 poles."""
    while True:
        u = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n)]
        norm = sum(v * v for v in u)
        if norm != 0 and norm != 1:
            break
    x = tuple(2 * v / (1 + norm) for v in u)
    s = (1 - norm) / (1 + norm)
    p = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n))
    return EvalPoint(x, p, s)


RawTerm = Tuple[Tuple[int, ...], dict, int, Tuple[dict, dict]]


def normalize_terms(n: int, raw: Iterable[RawTerm]) -> PhaseExpr:
    """Canonicalize a raw term list into a PhaseExpr.

    Each raw term is (p_exponents, numerator_poly, s_power, denominator),
    with the denominator given as a pair (den_a, den_b) meaning
    den_a + den_b * s.  s powers are reduced through s**2 = 1 - q**2 and
    denominators are rationalized by conjugate multiplication.
    """
    from .poly import pmul, psub

    acc: Dict[int, RadicalCoeff] = {}
    r = r_poly(n)
    for pexps, num, spow, (den_a, den_b) in raw:
        key = pack(pexps)
        rpow_part = dict(PONE)
        for _ in range(spow // 2):
            rpow_part = pmul(rpow_part, r)
        body = pmul(num, rpow_part)
        if spow % 2:
            a_num: dict = {}
            b_num = body
        else:
            a_num = body
            b_num = {}
        if den_b:
            conj_a = pmul(a_num, den_a)
            conj_a = psub(conj_a, pmul(pmul(b_num, den_b), r))
            conj_b = psub(pmul(b_num, den_a), pmul(a_num, den_b))
            new_den = psub(pmul(den_a, den_a), pmul(pmul(den_b, den_b), r))
            a_num, b_num, den = conj_a, conj_b, new_den
        else:
            den = den_a
        coeff = rmake(a_num, b_num, den, n)
        prev = acc.get(key)
        acc[key] = coeff if prev is None else radd(prev, coeff, n)
    return PhaseExpr(n, acc)
