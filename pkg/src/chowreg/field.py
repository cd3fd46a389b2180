"""Exact arithmetic in cyclotomic fields Q(zeta_N) and their complex embedding.

Elements are residues modulo the N-th cyclotomic polynomial, stored as
coefficient vectors of length phi(N) over ``fractions.Fraction``.  The complex
embedding is fixed globally as zeta_N -> exp(2*pi*i/N); Galois-conjugate
embeddings would change regulator values, so the choice is part of the field
contract, not a knob.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import ChowregError, PrecisionError
from .numeric import ComplexApprox, workprec

Rational = Fraction


def euler_phi(n):
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num, den):
    """Exact division of integer polynomials (ascending coeffs), den monic-ish."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ArithmeticError("non-exact integer polynomial division")
        c //= lead
        q[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    if any(num[len(den) - 1:]):
        raise ArithmeticError("non-exact integer polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, ascending, computed by recursive division."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]          # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _reduce_mod_phi(coeffs, n):
    """Reduce a Fraction coefficient list modulo Phi_n; returns length phi(n)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    work = list(coeffs)
    for k in range(len(work) - 1, deg - 1, -1):
        c = work[k]
        if c:
            work[k] = Fraction(0)
            for j in range(deg):
                work[k - deg + j] -= c * phi[j]
    work = work[:deg]
    work += [Fraction(0)] * (deg - len(work))
    return tuple(work)


class CyclotomicNumber:
    """An element of Q(zeta_N) in the canonical power-basis representation."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = int(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        phi = euler_phi(self.order)
        if len(coeffs) != phi:
            coeffs = _reduce_mod_phi(coeffs, self.order)
        self.coeffs = coeffs

    @classmethod
    def from_rational(cls, q, order=1):
        phi = euler_phi(order)
        return cls(order, (Fraction(q),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zero(cls, order=1):
        return cls.from_rational(0, order)

    @classmethod
    def one(cls, order=1):
        return cls.from_rational(1, order)

    @classmethod
    def zeta(cls, order):
        """The distinguished primitive root zeta_N (the basis element itself)."""
        if order == 1:
            return cls.one(1)
        if order == 2:
            return cls.from_rational(-1, 2)
        phi = euler_phi(order)
        coeffs = [Fraction(0)] * phi
        coeffs[1] = Fraction(1)
        return cls(order, coeffs)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ChowregError(f"{self} is not rational")
        return self.coeffs[0]

    def is_one(self):
        return self.is_rational() and self.coeffs[0] == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if self.order != other.order:
            a, b = promote_pair(self, other)
            return a.coeffs == b.coeffs
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def _require_same_order(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other, self.order)
        if not isinstance(other, CyclotomicNumber):
            raise TypeError(f"cannot combine CyclotomicNumber with {type(other)!r}")
        if other.order != self.order:
            raise ChowregError(
                f"mismatched cyclotomic orders {self.order} and {other.order}; "
                "promote to a common order first"
            )
        return other

    def __add__(self, other):
        o = self._require_same_order(other)
        return CyclotomicNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._require_same_order(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._require_same_order(other)
        n = len(self.coeffs)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicNumber(self.order, _reduce_mod_phi(prod, self.order))

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coeffs[0], self.order)
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
        # r0 is a nonzero constant gcd (Phi_N has no roots in Q(zeta_N) shared with a unit)
        r0 = _frac_poly_trim(r0)
        if len(r0) != 1:
            raise ChowregError("element is a zero divisor; Phi_N not squarefree?")
        inv_const = 1 / r0[0]
        coeffs = [c * inv_const for c in s0]
        return CyclotomicNumber(self.order, _reduce_mod_phi(coeffs, self.order))

    def __truediv__(self, other):
        o = self._require_same_order(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._require_same_order(other) / self

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one(self.order)
        base, n = self, k
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, j):
        """Apply the automorphism zeta -> zeta^j, gcd(j, N) = 1."""
        if math.gcd(j, self.order) != 1:
            raise ChowregError(f"zeta -> zeta^{j} is not an automorphism of Q(zeta_{self.order})")
        zj = CyclotomicNumber.zeta(self.order) ** (j % self.order)
        out = CyclotomicNumber.zero(self.order)
        power = CyclotomicNumber.one(self.order)
        for c in self.coeffs:
            if c:
                out = out + CyclotomicNumber.from_rational(c, self.order) * power
            power = power * zj
        return out

    def conjugate(self):
        if self.order <= 2:
            return self
        return self.galois(self.order - 1)

    def promote(self, new_order):
        """Re-express in Q(zeta_M) for N | M via zeta_N = zeta_M^(M/N)."""
        if new_order == self.order:
            return self
        if new_order % self.order != 0:
            raise ChowregError(f"cannot promote order {self.order} to non-multiple {new_order}")
        step = new_order // self.order
        coeffs = [Fraction(0)] * (len(self.coeffs) * step + 1)
        for k, c in enumerate(self.coeffs):
            coeffs[k * step] += c
        return CyclotomicNumber(new_order, _reduce_mod_phi(coeffs, new_order))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*zeta" if c != 1 else "zeta")
            else:
                parts.append(f"{c}*zeta^{k}" if c != 1 else f"zeta^{k}")
        return " + ".join(parts)

    __repr__ = __str__


def _frac_poly_trim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _frac_poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _frac_poly_trim([x - y for x, y in zip(a, b)])


def _frac_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _frac_poly_trim(out)


def _frac_poly_divmod(a, b):
    a = list(a)
    b = _frac_poly_trim(list(b))
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, d in enumerate(b):
                a[k + j] -= c * d
    return _frac_poly_trim(q), _frac_poly_trim(a[:max(len(b) - 1, 1)])


def promote_pair(a, b):
    """Promote two cyclotomic numbers to their lcm order."""
    m = a.order * b.order // math.gcd(a.order, b.order)
    return a.promote(m), b.promote(m)


def cyclo_arith(a, b, op):
    """Field arithmetic dispatch with explicit order and zero-divisor errors."""
    ops = {
        "add": lambda x, y: x + y,
        "sub": lambda x, y: x - y,
        "mul": lambda x, y: x * y,
        "div": lambda x, y: x / y,
    }
    if op not in ops:
        raise ChowregError(f"unknown field operation {op!r}")
    if a.order != b.order:
        raise ChowregError(
            f"mismatched cyclotomic orders {a.order} and {b.order}; use promote_pair"
        )
    if op == "div" and b.is_zero():
        raise ZeroDivisionError("division by zero in Q(zeta_N)")
    return ops[op](a, b)


def _fraction_exact_mpf(q, prec):
    """Return (mpf, True) when q is exactly representable at prec bits."""
    den = q.denominator
    if den & (den - 1) == 0 and abs(q.numerator).bit_length() <= prec:
        return mp.mpf(q.numerator) / mp.mpf(den), True
    return mp.mpf(q.numerator) / mp.mpf(den), False


def embed(a, precision_bits=None):
    """Numerically embed via zeta_N -> exp(2*pi*i/N).

    The result is a :class:`ComplexApprox` whose radius bounds the combined
    rounding error of the Horner evaluation; exactly representable values
    (dyadic rationals, Gaussian dyadics for N | 4) get radius 0.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if precision_bits < 53:
        raise PrecisionError("embedding precision must be >= 53 bits")
    n = a.order
    with workprec(precision_bits):
        if a.is_rational():
            v, ok = _fraction_exact_mpf(a.coeffs[0], precision_bits)
            if ok:
                return ComplexApprox(mp.mpc(v), 0.0)
        if n % 4 == 0 and n <= 4 and len(a.coeffs) == 2:
            re, ok_re = _fraction_exact_mpf(a.coeffs[0], precision_bits)
            im, ok_im = _fraction_exact_mpf(a.coeffs[1], precision_bits)
            if ok_re and ok_im:
                return ComplexApprox(mp.mpc(re, im), 0.0)
    guard = 40
    with workprec(precision_bits + guard):
        zeta = mp.e ** (2j * mp.pi / n)
        acc = mp.mpc(0)
        size = mp.mpf(0)
        for c in reversed(a.coeffs):
            cv = mp.mpf(c.numerator) / mp.mpf(c.denominator)
            acc = acc * zeta + cv
            size += abs(cv)
    with workprec(precision_bits):
        value = +acc
    n_ops = 3 * len(a.coeffs) + 6
    radius = n_ops * (float(size) + 1e-300) * 2.0 ** (-(precision_bits + guard // 2))
    radius += (float(abs(value)) + 1e-300) * 2.0 ** (1 - precision_bits)
    return ComplexApprox(value, radius)
