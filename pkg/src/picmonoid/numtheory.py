"""Small exact number-theory toolkit used by the algebraic modules.

Contents: the extended-integer infinity ``INF`` used for divisor
coefficients and valuations, p-adic valuations of rationals, deterministic
Miller-Rabin below 2**64 (random witnesses above), Pollard rho
factorization, CRT, and the Kronecker symbol.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

from .errors import InfiniteCoefficientError, NonPrimeError, ZeroInputError


class _Infinity:
    """The absorbing element of (Z u {oo}, +, min).

    Addition with anything returns ``INF``; negation is an error because the
    monoid of extended coefficients has no inverse at infinity.  Comparisons
    place ``INF`` strictly above every integer.
    """

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        if isinstance(other, (int, _Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        raise InfiniteCoefficientError("infinite coefficient has no additive inverse")

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        if isinstance(other, _Infinity):
            raise InfiniteCoefficientError("inf - inf is undefined")
        return NotImplemented

    def __rsub__(self, other):
        raise InfiniteCoefficientError("infinite coefficient has no additive inverse")

    def __mul__(self, other):
        if isinstance(other, _Infinity):
            return self
        if isinstance(other, int):
            if other <= 0:
                raise InfiniteCoefficientError("inf may only be scaled by positive integers")
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("picmonoid-INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return isinstance(other, int) and not isinstance(other, _Infinity)

    def __ge__(self, other):
        return isinstance(other, (int, _Infinity))

    def __repr__(self):
        return "inf"


INF = _Infinity()

#: an extended integer: a plain int or the infinity sentinel
ExtInt = Union[int, _Infinity]


def is_inf(x: ExtInt) -> bool:
    return isinstance(x, _Infinity)


def ext_min(a: ExtInt, b: ExtInt) -> ExtInt:
    if is_inf(a):
        return b
    if is_inf(b):
        return a
    return min(a, b)


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Deterministic Miller-Rabin witness set for n < 2**64 (Sinclair's bases).
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2**64, 30 random rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 2**64:
        return _miller_rabin(n, _MR_BASES_64)
    rng = random.Random(n)
    bases = list(_MR_BASES_64) + [rng.randrange(2, n - 1) for _ in range(30)]
    return _miller_rabin(n, bases)


def require_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise NonPrimeError(f"{p!r} is not prime")
    return p


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n ^ 0x9E3779B97F4A7C15)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> Dict[int, int]:
    """Full factorization of a positive integer as {prime: exponent}."""
    if n <= 0:
        raise ZeroInputError("can only factor positive integers")
    out: Dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        # trial division first; rho for anything that survives it
        found = False
        for p in range(41, 10000, 2):
            if p * p > m:
                break
            if m % p == 0:
                stack.extend([p, m // p])
                found = True
                break
        if not found:
            d = _pollard_rho(m)
            stack.extend([d, m // d])
    return dict(sorted(out.items()))


def factorize_fraction(q: Fraction) -> Dict[int, int]:
    """Signed-exponent factorization of a nonzero rational (sign dropped)."""
    if q == 0:
        raise ZeroInputError("0 has no factorization")
    out = dict(factorize(abs(q.numerator)))
    for p, e in factorize(q.denominator).items():
        out[p] = out.get(p, 0) - e
    return {p: e for p, e in sorted(out.items()) if e != 0}


def valuation(x: Union[int, Fraction], p: int) -> ExtInt:
    """p-adic valuation of a rational; v_p(0) = INF by convention."""
    if x == 0:
        return INF
    x = Fraction(x)
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x: Fraction, p: int) -> Fraction:
    """x / p**v_p(x) for nonzero rational x (a p-adic unit)."""
    if x == 0:
        raise ZeroInputError("0 has no unit part")
    v = valuation(x, p)
    return Fraction(x) / Fraction(p) ** v


def strip_prime(x: Fraction, p: int) -> Fraction:
    """Remove every factor of p from numerator and denominator."""
    if x == 0:
        return x
    return unit_part(x, p)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Tuple[int, int]:
    g, s, _ = xgcd(m1, m2)
    if (r2 - r1) % g != 0:
        raise ValueError("incompatible congruences")
    lcm = m1 // g * m2
    x = (r1 + (r2 - r1) // g * s % (m2 // g) * m1) % lcm
    return x, lcm


def crt(residues: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine (residue, modulus) pairs; returns (residue, modulus)."""
    x, m = 0, 1
    for r, mod in residues:
        x, m = crt_pair(x, m, r % mod, mod)
    return x, m


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the natural extension of Jacobi."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out twos from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t and a % 2 == 0:
        return 0
    if t % 2 == 1 and a % 8 in (3, 5):
        sign = -sign
    a %= n
    # Jacobi symbol on odd n
    result = sign
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def primes_up_to(n: int) -> list[int]:
    """Ascending primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]
