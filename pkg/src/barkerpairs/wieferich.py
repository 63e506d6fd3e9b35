"""Wieferich prime pair searches.

A pair (q, p) of distinct odd primes is a Wieferich pair when
q^(p-1) = 1 mod p^2.  :func:`search_pairs` walks the p-range in sieved
segments (the q list is small and shared), writing each finished segment to
the pairs file before advancing the checkpoint, so an interrupted run can be
resumed without changing the final output.
"""

from __future__ import annotations

import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from .arith import iter_primes, sieve_primes

log = logging.getLogger(__name__)

Congruence = tuple[int, int] | None

#: Barker lengths only involve primes 1 mod 4.
BARKER_CLASS: Congruence = (1, 4)
DEFAULT_SEGMENT = 10**7


class WieferichPair(NamedTuple):
    q: int
    p: int


class CheckpointMismatch(RuntimeError):
    """A checkpoint was written by a different task definition."""


def is_wieferich(q: int, p: int) -> bool:
    return pow(q, p - 1, p * p) == 1


@dataclass(frozen=True)
class SearchTask:
    q_range: tuple[int, int]
    p_range: tuple[int, int]
    congruence: Congruence = None
    segment_size: int = DEFAULT_SEGMENT

    def task_hash(self) -> str:
        key = f"q={self.q_range} p={self.p_range} c={self.congruence} seg={self.segment_size}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def segments(self) -> list[tuple[int, int]]:
        lo, hi = self.p_range
        return [(a, min(hi, a + self.segment_size - 1)) for a in range(lo, hi + 1, self.segment_size)]


def _odd_primes(lo: int, hi: int, congruence: Congruence) -> list[int]:
    lo = max(lo, 3)
    return sieve_primes(lo, hi, congruence) if hi >= lo else []


def _scan_segment(args: tuple[int, int, Congruence, tuple[int, ...]]) -> list[WieferichPair]:
    lo, hi, congruence, qs = args
    out = []
    if hi < max(lo, 3):
        return out
    for p in iter_primes(max(lo, 3), hi, congruence):
        e, m = p - 1, p * p
        for q in qs:
            if q != p and pow(q, e, m) == 1:
                out.append(WieferichPair(q, p))
    return out


def format_pairs(pairs: Iterable[WieferichPair]) -> str:
    return "".join(f"{q} {p}\n" for q, p in pairs)


def read_pairs(path: str | os.PathLike) -> list[WieferichPair]:
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'q p'")
            pairs.append(WieferichPair(int(parts[0]), int(parts[1])))
    return pairs


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def search_pairs(
    task: SearchTask,
    out_path: str | os.PathLike | None = None,
    checkpoint_path: str | os.PathLike | None = None,
    workers: int = 1,
    resume: bool = False,
    max_segments: int | None = None,
) -> list[WieferichPair]:
    """All Wieferich pairs in the task's ranges, sorted by (p, q).

    With ``out_path`` and ``checkpoint_path`` set, each completed segment is
    appended to the pairs file and the checkpoint advanced.  ``resume``
    continues from an existing checkpoint; ``max_segments`` stops early
    (as if interrupted) after that many segments.
    """
    qs = tuple(_odd_primes(*task.q_range, task.congruence))
    segments = task.segments()
    start = task.p_range[0]
    thash = task.task_hash()
    out = Path(out_path) if out_path is not None else None
    ckpt = Path(checkpoint_path) if checkpoint_path is not None else None
    pairs: list[WieferichPair] = []

    if resume and ckpt is not None and ckpt.exists():
        saved_hash, _, nxt = ckpt.read_text().strip().partition(" ")
        if saved_hash != thash:
            raise CheckpointMismatch(f"{ckpt} belongs to task {saved_hash}, not {thash}")
        start = int(nxt)
        if out is not None and out.exists():
            # drop anything written after the last recorded segment boundary
            pairs = [pr for pr in read_pairs(out) if pr.p < start]
    if out is not None:
        _write_atomic(out, format_pairs(pairs))
    if ckpt is not None:
        _write_atomic(ckpt, f"{thash} {start}\n")

    todo = [seg for seg in segments if seg[0] >= start]
    if max_segments is not None:
        todo = todo[:max_segments]
    jobs = [(lo, hi, task.congruence, qs) for lo, hi in todo]

    def commit(seg: tuple[int, int], found: list[WieferichPair]) -> None:
        found.sort(key=lambda pr: (pr.p, pr.q))
        pairs.extend(found)
        if out is not None:
            with open(out, "a") as fh:
                fh.write(format_pairs(found))
        if ckpt is not None:
            _write_atomic(ckpt, f"{thash} {seg[1] + 1}\n")
        log.info("segment [%d, %d] done, %d pairs so far", seg[0], seg[1], len(pairs))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for seg, found in zip(todo, pool.map(_scan_segment, jobs)):
                commit(seg, found)
    else:
        for seg, job in zip(todo, jobs):
            commit(seg, _scan_segment(job))
    return pairs


def search_descending(q: int, p_bound: int, congruence: Congruence = None) -> list[WieferichPair]:
    """Pairs (q, p) with odd p < min(q, p_bound) in the congruence class."""
    hi = min(q, p_bound) - 1
    if hi < 3:
        return []
    return [WieferichPair(q, p) for p in iter_primes(3, hi, congruence) if pow(q, p - 1, p * p) == 1]
