"""Sequence-level Barker machinery: autocorrelations, symmetries, exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

Sequence = tuple[int, ...]

MAX_SEARCH_LENGTH = 28


@dataclass(frozen=True)
class AutocorrelationProfile:
    aperiodic: tuple[int, ...]
    periodic: tuple[int, ...]


def from_string(text: str) -> Sequence:
    return tuple(1 if ch == "+" else -1 for ch in text.strip())


def to_string(seq: Sequence) -> str:
    return "".join("+" if x == 1 else "-" for x in seq)


def _check(seq: Sequence) -> None:
    if not seq or any(x not in (1, -1) for x in seq):
        raise ValueError("sequence must be a nonempty run of +1/-1 entries")


def autocorrelations(seq: Sequence) -> AutocorrelationProfile:
    _check(seq)
    n = len(seq)
    aper = tuple(sum(seq[i] * seq[i + k] for i in range(n - k)) for k in range(n))
    per = tuple(sum(seq[i] * seq[(i + k) % n] for i in range(n)) for k in range(n))
    return AutocorrelationProfile(aper, per)


def is_barker(seq: Sequence) -> bool:
    return all(abs(c) <= 1 for c in autocorrelations(seq).aperiodic[1:])


def reverse(seq: Sequence) -> Sequence:
    return seq[::-1]


def negate(seq: Sequence) -> Sequence:
    return tuple(-x for x in seq)


def alternate(seq: Sequence) -> Sequence:
    """Negate every other term, starting with the second."""
    return tuple(x if i % 2 == 0 else -x for i, x in enumerate(seq))


def symmetry_orbit(seq: Sequence) -> frozenset[Sequence]:
    orbit = {seq}
    frontier = [seq]
    while frontier:
        s = frontier.pop()
        for g in (reverse, negate, alternate):
            t = g(s)
            if t not in orbit:
                orbit.add(t)
                frontier.append(t)
    return frozenset(orbit)


def canonical(seq: Sequence) -> Sequence:
    """Orbit representative: lexicographically least with +1 ordered before -1."""
    return min(symmetry_orbit(seq), key=lambda s: tuple(x < 0 for x in s))


def brute_force_barker(n: int) -> set[Sequence]:
    """All 2^n sequences, filtered; the oracle for :func:`exhaustive_search`."""
    return {s for s in product((1, -1), repeat=n) if is_barker(s)}


def exhaustive_search(n: int) -> set[Sequence]:
    """Every Barker sequence of length ``n``, by branch and bound.

    Terms are fixed in pairs from both ends; after the outer ``j`` pairs are
    placed, the lags ``n-1, ..., n-j`` are complete and must stay within one.
    """
    if n < 1:
        raise ValueError("length must be positive")
    if n > MAX_SEARCH_LENGTH:
        raise ValueError(f"search budget exceeded: n={n} > {MAX_SEARCH_LENGTH}")
    seq = [0] * n
    found: set[Sequence] = set()

    def lag_ok(k: int) -> bool:
        return abs(sum(seq[i] * seq[i + k] for i in range(n - k))) <= 1

    def place(j: int) -> None:
        # positions j and n-1-j are filled at this depth
        lo, hi = j, n - 1 - j
        if lo > hi:
            found.add(tuple(seq))
            return
        for a in (1, -1):
            seq[lo] = a
            for b in ((1, -1) if hi != lo else (a,)):
                seq[hi] = b
                # with the outer j+1 pairs placed, lag n-1-j is complete
                if lag_ok(n - 1 - j) or n - 1 - j == 0:
                    place(j + 1)
        seq[lo] = seq[hi] = 0

    place(0)
    return {s for s in found if is_barker(s)}


def orbit_representatives(seqs: set[Sequence]) -> list[Sequence]:
    return sorted({canonical(s) for s in seqs}, key=lambda s: tuple(x < 0 for x in s))
