"""Arithmetic exclusion tests for orders n = 4u^2.

Each ``test_*`` function takes the factorization of ``u`` and returns a
:class:`Verdict`.  An excluding verdict carries a witness that the matching
``*_witness_holds`` function re-checks from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, reduce

from .arith import Factorization, euler_phi, factorize, valuation

#: LS5 with r = m leaves no q_i to take a gcd over.  The empty gcd is read as
#: +infinity there, so a self-conjugate r = m excludes.  LS10 reads it the
#: same way, which makes an empty q-list (u/w a power of p) non-excluding.
EMPTY_GCD_IS_INFINITE = True

TURYN_OMEGA_CAP = 8
LS1_OMEGA_CAP = 6


class Theorem(str, Enum):
    EKS = "EKS"
    LARGE_PRIME = "LargePrimeCor"
    FIELD_DESCENT = "FieldDescent"
    TURYN = "Turyn"
    LS5 = "LS5"
    LS1 = "LS1"
    LS10 = "LS10"


class Outcome(str, Enum):
    PASS = "pass"
    EXCLUDED = "excluded"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    theorem: Theorem
    outcome: Outcome
    witness: tuple[int, ...] = ()

    @property
    def excluded(self) -> bool:
        return self.outcome is Outcome.EXCLUDED

    @property
    def inconclusive(self) -> bool:
        return self.outcome is Outcome.INCONCLUSIVE


def _fact(x: int | Factorization) -> Factorization:
    return x if isinstance(x, Factorization) else factorize(x)


def n_of(u: Factorization) -> Factorization:
    """Factorization of n = 4u^2."""
    return Factorization.from_pairs(((2, 2),) + tuple((p, 2 * e) for p, e in u.factors))


# -- orders and semiprimitivity -------------------------------------------


@lru_cache(maxsize=1 << 18)
def _order_mod_prime(t: int, q: int) -> int:
    if q == 2:
        return 1
    d = q - 1
    for ell, _ in factorize(q - 1).factors:
        while d % ell == 0 and pow(t, d // ell, q) == 1:
            d //= ell
    return d


@lru_cache(maxsize=1 << 18)
def _order_mod_prime_power(t: int, q: int, e: int) -> int:
    d = _order_mod_prime(t % q, q)
    qk = q
    for _ in range(1, e):
        qk *= q
        if pow(t, d, qk) != 1:
            d *= q
    return d


def order(t: int, s: Factorization) -> int:
    """Multiplicative order of ``t`` modulo ``s.value`` (coprime), as an lcm of prime-power orders."""
    d = 1
    for q, e in s.factors:
        d = math.lcm(d, _order_mod_prime_power(t % q**e, q, e))
    return d


@lru_cache(maxsize=1 << 18)
def _semiprimitive(r: int, s: Factorization) -> bool:
    if s.value <= 2:
        return True
    if any(r % q == 0 for q in s.primes):
        return False
    d = order(r, s)
    return d % 2 == 0 and pow(r, d // 2, s.value) == s.value - 1


def is_semiprimitive(r: int, s: int | Factorization) -> bool:
    """True iff some power of ``r`` is -1 mod ``s``."""
    return _semiprimitive(r, _fact(s))


def p_free_part(s: int, p: int) -> int:
    while s % p == 0:
        s //= p
    return s


def is_self_conjugate(r: int | Factorization, s: int | Factorization) -> bool:
    """Every prime p | r is semiprimitive modulo the p-free part of s."""
    rf, sf = _fact(r), _fact(s)
    return all(_semiprimitive(p, sf.p_free(p)) for p in rf.primes)


# -- field descent --------------------------------------------------------


def m_q(m: int | Factorization, q: int) -> int:
    mf = _fact(m)
    prod = math.prod(p for p in mf.primes if p != q)
    if mf.value % 2 == 1 or q == 2:
        return prod
    return 2 * prod


def _m_q_fact(primes: tuple[int, ...], q: int) -> Factorization:
    rest = {p: 1 for p in primes if p != q}
    if 2 in primes and q != 2:
        rest[2] = rest.get(2, 0) + 1
    return Factorization.from_dict(rest)


def fermat_valuation(q: int, r: int) -> int:
    """nu_r(q^(r-1) - 1) for a prime r not dividing q, by lifting through r^2, r^3, ..."""
    v = 1
    rk = r * r
    while pow(q, r - 1, rk) == 1:
        v += 1
        rk *= r
    return v


@lru_cache(maxsize=1 << 16)
def _b(r: int, m_primes: tuple[int, ...], n_primes: tuple[int, ...]) -> int:
    others = [q for q in n_primes if q != r]
    if not others:
        # n = r^k, including n = 1
        return 2 if r == 2 else 1
    best = 0
    for q in others:
        if r == 2:
            if q == 2:
                continue
            val = valuation(2, q * q - 1) + valuation(2, order(q, _m_q_fact(m_primes, q))) - 1
        else:
            val = fermat_valuation(q, r) + valuation(r, order(q, _m_q_fact(m_primes, q)))
        best = max(best, val)
    return best


def b_exponent(r: int, m: int | Factorization, n: int | Factorization) -> int:
    return _b(r, _fact(m).primes, _fact(n).primes)


def _field_descent(m: Factorization, n: Factorization) -> Factorization:
    return Factorization.from_dict(
        {p: min(e, _b(p, m.primes, n.primes)) for p, e in m.factors}
    )


def field_descent_F(m: int | Factorization, n: int | Factorization) -> int:
    """gcd(m, prod p^b(p,m,n) over primes p | m)."""
    return _field_descent(_fact(m), _fact(n)).value


# -- the tests ------------------------------------------------------------


def test_eks(u: Factorization) -> Verdict:
    for p in u.primes:
        if p % 4 != 1:
            return Verdict(Theorem.EKS, Outcome.EXCLUDED, (p,))
    return Verdict(Theorem.EKS, Outcome.PASS)


def test_large_prime_cor(u: Factorization) -> Verdict:
    two_u2 = 2 * u.value**2
    for p, e in u.factors:
        if p > 2 and p ** (3 * e) > two_u2:
            return Verdict(Theorem.LARGE_PRIME, Outcome.EXCLUDED, (p, e))
    return Verdict(Theorem.LARGE_PRIME, Outcome.PASS)


def test_field_descent(u: Factorization) -> Verdict:
    F = _field_descent(u**2, u).value
    if u.value * euler_phi(u) > F:
        return Verdict(Theorem.FIELD_DESCENT, Outcome.EXCLUDED, (F,))
    return Verdict(Theorem.FIELD_DESCENT, Outcome.PASS)


def _shared_primes(r: Factorization, s: Factorization) -> int:
    sp = set(s.primes)
    return sum(1 for p in r.primes if p in sp)


def test_turyn(
    u: Factorization, omega_cap: int | None = TURYN_OMEGA_CAP, reverse: bool = False
) -> Verdict:
    """Self-conjugacy test: look for r | u, s | n with rs > 2^(k-1) n.

    Divisors are scanned largest first (``reverse`` scans r smallest first);
    the inequality is checked before the expensive self-conjugacy.
    """
    if omega_cap is not None and u.omega > omega_cap:
        return Verdict(Theorem.TURYN, Outcome.INCONCLUSIVE)
    n = n_of(u)
    nv = n.value
    rs = u.divisors()[1:]
    ss = n.divisors()[::-1]
    if not reverse:
        rs.reverse()
    for r in rs:
        for s in ss:
            if r.value * s.value <= nv:
                break
            k = _shared_primes(r, s)
            if k and r.value * s.value > (nv << (k - 1)) and is_self_conjugate(r, s):
                return Verdict(Theorem.TURYN, Outcome.EXCLUDED, (r.value, s.value))
    return Verdict(Theorem.TURYN, Outcome.PASS)


def _gcd_orders(p: int, qs: tuple[int, ...]) -> int | None:
    """gcd of ord_p(q) over qs; None stands for the empty gcd."""
    if not qs:
        return None
    return reduce(math.gcd, (_order_mod_prime(q % p, p) for q in qs))


def test_ls5(u: Factorization, omega_cap: int | None = None, reverse: bool = False) -> Verdict:
    if omega_cap is not None and u.omega > omega_cap:
        return Verdict(Theorem.LS5, Outcome.INCONCLUSIVE)
    for p, a in u.factors:
        if p == 2 or p ** (2 * a) <= 2 * u.value:
            continue
        m = u.p_free(p)
        pf = Factorization(p, ((p, 1),))
        divs = m.divisors()
        if reverse:
            divs.reverse()
        for r in divs:
            if not is_self_conjugate(r, pf):
                continue
            rest = m.value // r.value
            g = _gcd_orders(p, _div(m, r).primes)
            if (g is None and EMPTY_GCD_IS_INFINITE) or (g is not None and g > rest * rest):
                return Verdict(Theorem.LS5, Outcome.EXCLUDED, (p, r.value))
    return Verdict(Theorem.LS5, Outcome.PASS)


def _ls1_violates(n: Factorization, w: Factorization, m: Factorization, u: Factorization) -> bool:
    quot = Factorization.from_dict({p: e - w.exponent(p) for p, e in n.factors})
    F = _field_descent(quot, _div(u, m) ** 2)
    return n.value * euler_phi(F) > w.value**2 * F.value**2


def _div(a: Factorization, b: Factorization) -> Factorization:
    return Factorization.from_dict({p: e - b.exponent(p) for p, e in a.factors})


def test_ls1(u: Factorization, omega_cap: int | None = LS1_OMEGA_CAP, reverse: bool = False) -> Verdict:
    """Read as: exclude if n*phi(F) > w^2 F^2 with F = F(n/w, u^2/m^2)."""
    if omega_cap is not None and u.omega > omega_cap:
        return Verdict(Theorem.LS1, Outcome.INCONCLUSIVE)
    n = n_of(u)
    ms = u.divisors()
    # n*phi(F) <= n*F, so a violation needs w^2 < n.
    ws = [w for w in n.divisors() if w.value**2 < n.value]
    if reverse:
        ms.reverse()
        ws.reverse()
    for m in ms:
        for w in ws:
            if _ls1_violates(n, w, m, u) and is_self_conjugate(m, _div(n, w)):
                return Verdict(Theorem.LS1, Outcome.EXCLUDED, (m.value, w.value))
    return Verdict(Theorem.LS1, Outcome.PASS)


def test_ls10(u: Factorization, omega_cap: int | None = None, reverse: bool = False) -> Verdict:
    if any(p % 4 != 3 for p in u.primes) or u.value == 1:
        return Verdict(Theorem.LS10, Outcome.PASS)
    if omega_cap is not None and u.omega > omega_cap:
        return Verdict(Theorem.LS10, Outcome.INCONCLUSIVE)
    ws = u.divisors()
    if reverse:
        ws.reverse()
    for p in u.primes:
        pf = Factorization(p, ((p, 1),))
        for w in ws:
            if not is_self_conjugate(w, pf):
                continue
            if w.value == u.value:
                return Verdict(Theorem.LS10, Outcome.EXCLUDED, (p, w.value))
            rest = u.value // w.value
            g = _gcd_orders(p, tuple(q for q in _div(u, w).primes if q != p))
            if (g is None and not EMPTY_GCD_IS_INFINITE) or (g is not None and g <= rest * rest):
                return Verdict(Theorem.LS10, Outcome.EXCLUDED, (p, w.value))
    return Verdict(Theorem.LS10, Outcome.PASS)


# -- witness re-validation ------------------------------------------------


def turyn_witness_holds(u: int, r: int, s: int) -> bool:
    n = 4 * u * u
    if u % r or n % s:
        return False
    k = len(factorize(math.gcd(r, s)).primes)
    return k >= 1 and r * s > 2 ** (k - 1) * n and is_self_conjugate(r, s)


def ls5_witness_holds(u: int, p: int, r: int) -> bool:
    a = valuation(p, u)
    if p == 2 or a == 0 or p ** (2 * a) <= 2 * u:
        return False
    m = u // p**a
    if m % r or not is_self_conjugate(r, p):
        return False
    qs = factorize(m // r).primes
    if not qs:
        return EMPTY_GCD_IS_INFINITE
    g = reduce(math.gcd, (_order_mod_prime(q % p, p) for q in qs))
    return g > (m // r) ** 2


def ls1_witness_holds(u: int, m: int, w: int) -> bool:
    n = 4 * u * u
    if u % m or n % w or not is_self_conjugate(m, n // w):
        return False
    F = field_descent_F(n // w, (u // m) ** 2)
    return n * euler_phi(factorize(F)) > w * w * F * F


def ls10_witness_holds(u: int, p: int, w: int) -> bool:
    uf = factorize(u)
    if any(q % 4 != 3 for q in uf.primes) or u % p or u % w:
        return False
    if not is_self_conjugate(w, p):
        return False
    if u == w:
        return True
    qs = tuple(q for q in factorize(u // w).primes if q != p)
    if not qs:
        return not EMPTY_GCD_IS_INFINITE
    g = reduce(math.gcd, (_order_mod_prime(q % p, p) for q in qs))
    return g <= (u // w) ** 2


def witness_holds(u: int, verdict: Verdict) -> bool:
    """Recheck an excluding verdict's witness against ``u``."""
    w = verdict.witness
    uf = factorize(u)
    if verdict.theorem is Theorem.EKS:
        return u % w[0] == 0 and w[0] % 4 != 1
    if verdict.theorem is Theorem.LARGE_PRIME:
        p, e = w
        return valuation(p, u) == e and p ** (3 * e) > 2 * u * u
    if verdict.theorem is Theorem.FIELD_DESCENT:
        F = field_descent_F(u * u, u)
        return F == w[0] and u * euler_phi(uf) > F
    if verdict.theorem is Theorem.TURYN:
        return turyn_witness_holds(u, *w)
    if verdict.theorem is Theorem.LS5:
        return ls5_witness_holds(u, *w)
    if verdict.theorem is Theorem.LS1:
        return ls1_witness_holds(u, *w)
    return ls10_witness_holds(u, *w)
