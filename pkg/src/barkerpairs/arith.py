"""Exact integer arithmetic used throughout the search.

Everything here works on Python ints, so there is a single exact contract
regardless of operand size.  Hot loops (the Wieferich search) only ever
reduce moduli below 2**75; the criteria work on integers of a few hundred
bits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

log = logging.getLogger(__name__)

#: Miller-Rabin with the first thirteen prime bases is deterministic below this.
MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

TRIAL_BOUND = 10**6
RHO_ITERATIONS = 10**8
DEFAULT_SEGMENT = 1 << 20


class FactorizationError(ArithmeticError):
    """Raised when a composite cofactor survives the configured effort."""

    def __init__(self, value: int, partial: "Factorization", cofactor: int):
        super().__init__(f"could not factor {cofactor} (from {value})")
        self.value = value
        self.partial = partial
        self.cofactor = cofactor


@dataclass(frozen=True)
class Factorization:
    """An integer together with its prime factorization.

    ``factors`` holds ``(prime, exponent)`` pairs with primes strictly
    ascending and exponents at least one.
    """

    value: int
    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> Factorization:
        merged: dict[int, int] = {}
        for p, e in pairs:
            if e:
                merged[p] = merged.get(p, 0) + e
        return cls.from_dict(merged)

    @classmethod
    def from_dict(cls, exps: dict[int, int]) -> Factorization:
        items = tuple(sorted((p, e) for p, e in exps.items() if e > 0))
        value = 1
        for p, e in items:
            value *= p**e
        return cls(value, items)

    @classmethod
    def parse(cls, text: str) -> Factorization:
        """Inverse of ``str()``: ``"2^3*3^2*41"``; ``"1"`` is the empty product."""
        text = text.replace(" ", "").replace("·", "*")
        if text == "1":
            return cls(1, ())
        pairs = []
        for part in text.split("*"):
            base, _, exp = part.partition("^")
            pairs.append((int(base), int(exp) if exp else 1))
        return cls.from_pairs(pairs)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    def __int__(self) -> int:
        return self.value

    def __mul__(self, other: Factorization) -> Factorization:
        return Factorization.from_pairs(self.factors + other.factors)

    def __pow__(self, k: int) -> Factorization:
        return Factorization.from_pairs((p, e * k) for p, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def p_free(self, p: int) -> Factorization:
        """Largest divisor not divisible by ``p``."""
        if not self.exponent(p):
            return self
        items = tuple((q, e) for q, e in self.factors if q != p)
        return Factorization(self.value // p ** self.exponent(p), items)

    def radical(self) -> Factorization:
        return Factorization.from_dict({p: 1 for p in self.primes})

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def divisors(self) -> list[Factorization]:
        """All divisors, ascending by value."""
        divs = [((), 1)]
        for p, e in self.factors:
            nxt = []
            for items, v in divs:
                pk = 1
                for k in range(e + 1):
                    nxt.append((items + ((p, k),) if k else items, v * pk))
                    pk *= p
            divs = nxt
        divs.sort(key=lambda d: d[1])
        return [Factorization(v, items) for items, v in divs]

    def check(self) -> None:
        """Validate the invariants; raises ``ValueError`` on violation."""
        prod, last = 1, 0
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise ValueError(f"bad factor {p}^{e} in {self.value}")
            prod *= p**e
            last = p
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")


# -- modular primitives ---------------------------------------------------


def mulmod(a: int, b: int, m: int) -> int:
    """``a*b mod m``; exact for any width since Python ints do not overflow."""
    return a * b % m


def powmod(b: int, e: int, m: int) -> int:
    return pow(b, e, m)


def valuation(p: int, t: int) -> int:
    """Exponent of the largest power of ``p`` dividing ``t``."""
    if t == 0:
        raise ValueError("valuation of 0 is unbounded")
    v = 0
    while t % p == 0:
        t //= p
        v += 1
    return v


def integer_root(x: int, k: int) -> int:
    """Floor of the real ``k``-th root of ``x >= 0``."""
    if x < 0 or k < 1:
        raise ValueError("integer_root needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = 1 << -(-x.bit_length() // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


# -- primality ------------------------------------------------------------


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
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


def _strong_lucas_probable_prime(n: int) -> bool:
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def halve(x: int) -> int:
        x %= n
        return (x + n if x & 1 else x) >> 1

    U, V, Qk = 1, P % n, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = halve(P * U + V), halve(D * U + P * V)
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(t: int) -> bool:
    """Primality; proven below ``MR_DETERMINISTIC_BOUND``, Baillie-PSW above."""
    if t < 2:
        return False
    for p in _SMALL:
        if t % p == 0:
            return t == p
    if t < 47 * 47:
        return True
    if t < MR_DETERMINISTIC_BOUND:
        return all(_strong_probable_prime(t, a) for a in _MR_BASES)
    ok = _strong_probable_prime(t, 2) and _strong_lucas_probable_prime(t)
    if ok:
        log.debug("probable prime (BPSW, unproven): %d", t)
    return ok


# -- sieving --------------------------------------------------------------


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark)


def iter_primes(
    lo: int,
    hi: int,
    residue: tuple[int, int] | None = None,
    segment_size: int = DEFAULT_SEGMENT,
) -> Iterator[int]:
    """Yield primes in ``[lo, hi]`` (optionally ``p = r mod m``), one segment at a time."""
    if residue is not None and residue[1] == 0:
        raise ValueError("congruence modulus must be nonzero")
    lo = max(lo, 2)
    if hi < lo:
        return
    base = _base_primes(math.isqrt(hi))
    for seg_lo in range(lo, hi + 1, segment_size):
        seg_hi = min(hi, seg_lo + segment_size - 1)
        mark = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > seg_hi:
                break
            start = max(p * p, -(-seg_lo // p) * p)
            mark[start - seg_lo :: p] = False
        found = np.flatnonzero(mark) + seg_lo
        if residue is not None:
            r, m = residue
            found = found[found % m == r % m]
        yield from (int(x) for x in found)


def sieve_primes(
    lo: int,
    hi: int,
    residue: tuple[int, int] | None = None,
    segment_size: int = DEFAULT_SEGMENT,
) -> list[int]:
    return list(iter_primes(lo, hi, residue, segment_size))


# -- factorization --------------------------------------------------------


@lru_cache(maxsize=4)
def _trial_primes(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in _base_primes(bound))


def _brent(n: int, c: int, budget: int) -> int | None:
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += 2 * r
        r *= 2
        if spent > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, budget: int) -> int | None:
    spent = 0
    c = 1
    while spent < budget:
        share = min(budget - spent, max(budget // 8, 1 << 16))
        g = _brent(n, c, share)
        if g is not None:
            return g
        spent += share
        c += 1
    return None


@lru_cache(maxsize=1 << 16)
def factorize(
    t: int, trial_bound: int = TRIAL_BOUND, rho_budget: int = RHO_ITERATIONS
) -> Factorization:
    """Complete factorization of ``t >= 1``.

    Trial division by primes up to ``trial_bound``, then Brent's rho on
    whatever composite cofactors remain.
    """
    if t < 1:
        raise ValueError("factorize needs t >= 1")
    exps: dict[int, int] = {}
    n = t
    for i, p in enumerate(_trial_primes(trial_bound)):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps[p] = e
        # a large prime cofactor would otherwise run trial division to the end
        if i & 511 == 511 and is_prime(n):
            break
    pending = [n] if n > 1 else []
    while pending:
        c = pending.pop()
        if is_prime(c):
            exps[c] = exps.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            pending += [r, r]
            continue
        g = _split(c, rho_budget)
        if g is None:
            raise FactorizationError(t, Factorization.from_dict(exps), c)
        pending += [g, c // g]
    return Factorization.from_dict(exps)


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def carmichael(f: Factorization) -> Factorization:
    """Factorization of the Carmichael exponent of ``f.value``."""
    lam: dict[int, int] = {}
    for p, e in f.factors:
        if p == 2:
            part = {2: 0 if e == 1 else 1 if e == 2 else e - 2}
        else:
            part = factorize(p - 1).as_dict()
            if e > 1:
                part[p] = part.get(p, 0) + e - 1
        for q, k in part.items():
            lam[q] = max(lam.get(q, 0), k)
    return Factorization.from_dict(lam)


def mult_order(t: int, s: int, s_fact: Factorization | None = None) -> int:
    """Order of ``t`` in the unit group mod ``s``; the order mod 1 is 1."""
    if s < 1:
        raise ValueError("modulus must be positive")
    if s == 1:
        return 1
    if math.gcd(t, s) != 1:
        raise ValueError(f"{t} is not a unit mod {s}")
    lam = carmichael(s_fact if s_fact is not None else factorize(s))
    d = lam.value
    for q, _ in lam.factors:
        while d % q == 0 and pow(t, d // q, s) == 1:
            d //= q
    return d
