"""Turning small cycles into candidate values of u, and screening them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from . import criteria
from .arith import Factorization
from .criteria import Outcome, Theorem, Verdict
from .cycles import Cycle
from .graph import Mode, PrimeGraph


class Status(str, Enum):
    ADMISSIBLE = "admissible"
    EXCLUDED = "excluded"
    INCONCLUSIVE = "inconclusive"
    UNSCREENED = "unscreened"


@dataclass(frozen=True)
class AugmentedSubgraph:
    base_cycle: Cycle
    vertices: frozenset[int]

    @property
    def product(self) -> int:
        return math.prod(self.vertices)


@dataclass
class CandidateU:
    factorization: Factorization
    verdicts: list[Verdict] = field(default_factory=list)
    status: Status = Status.UNSCREENED

    @property
    def u(self) -> int:
        return self.factorization.value

    @property
    def n(self) -> int:
        return 4 * self.u**2

    @property
    def omega(self) -> int:
        return self.factorization.omega

    @property
    def deciding(self) -> Verdict | None:
        """The first excluding verdict, if any."""
        return next((v for v in self.verdicts if v.excluded), None)


def augment_cycle(g: PrimeGraph, c: Cycle, bound: int, succ: dict | None = None) -> list[AugmentedSubgraph]:
    """All vertex sets containing the cycle, with product <= bound, whose
    every vertex is forward-reachable from the cycle inside the set.

    Branches include/exclude on the smallest frontier prime that still fits,
    so each set is produced once.
    """
    if c.product > bound:
        return []
    adj = succ if succ is not None else g.successors()
    out: list[AugmentedSubgraph] = []

    def grow(members: frozenset[int], prod: int, banned: frozenset[int]) -> None:
        frontier = {
            w
            for v in members
            for w in adj.get(v, ())
            if w not in members and w not in banned and prod * w <= bound
        }
        if not frontier:
            out.append(AugmentedSubgraph(c, members))
            return
        x = min(frontier)
        grow(members | {x}, prod * x, banned)
        grow(members, prod, banned | {x})

    grow(frozenset(c.vertices), c.product, frozenset())
    return out


def _exponent_vectors(primes: list[int], bound: int) -> Iterator[dict[int, int]]:
    """Every prod p^e_p <= bound with all e_p >= 1, depth-first over ascending primes."""
    base = math.prod(primes)
    if base > bound:
        return

    def rec(i: int, value: int, exps: dict[int, int]) -> Iterator[dict[int, int]]:
        if i == len(primes):
            yield dict(exps)
            return
        p = primes[i]
        e = 1
        # value already includes p^1
        while True:
            exps[p] = e
            yield from rec(i + 1, value, exps)
            if value * p > bound:
                break
            value *= p
            e += 1
        del exps[p]

    yield from rec(0, base, {})


def candidates_from_subgraph(s: AugmentedSubgraph, bound: int) -> list[CandidateU]:
    """The squarefree product of ``s`` and its non-squarefree multiples up to
    ``bound``, keeping those that pass the field-descent bound."""
    out = []
    for exps in _exponent_vectors(sorted(s.vertices), bound):
        f = Factorization.from_dict(exps)
        verdict = criteria.test_field_descent(f)
        if not verdict.excluded:
            out.append(CandidateU(f))
    out.sort(key=lambda c: c.u)
    return out


def candidates_from_cycles(g: PrimeGraph, cycles: Iterable[Cycle], bound: int) -> list[CandidateU]:
    """Augment every cycle, deduplicate the vertex sets, and collect candidates."""
    succ = g.successors()
    seen: set[frozenset[int]] = set()
    found: dict[int, CandidateU] = {}
    for c in cycles:
        for s in augment_cycle(g, c, bound, succ):
            if s.vertices in seen:
                continue
            seen.add(s.vertices)
            for cand in candidates_from_subgraph(s, bound):
                found.setdefault(cand.u, cand)
    return [found[u] for u in sorted(found)]


def screen_order(mode: Mode) -> list[Theorem]:
    order = [Theorem.LARGE_PRIME, Theorem.FIELD_DESCENT, Theorem.TURYN, Theorem.LS5, Theorem.LS1]
    if mode is Mode.BARKER:
        return [Theorem.EKS] + order
    return order + [Theorem.LS10]


def run_test(theorem: Theorem, u: Factorization, turyn_cap: int | None, ls1_cap: int | None) -> Verdict:
    if theorem is Theorem.EKS:
        return criteria.test_eks(u)
    if theorem is Theorem.LARGE_PRIME:
        return criteria.test_large_prime_cor(u)
    if theorem is Theorem.FIELD_DESCENT:
        return criteria.test_field_descent(u)
    if theorem is Theorem.TURYN:
        return criteria.test_turyn(u, omega_cap=turyn_cap)
    if theorem is Theorem.LS5:
        return criteria.test_ls5(u)
    if theorem is Theorem.LS1:
        return criteria.test_ls1(u, omega_cap=ls1_cap)
    return criteria.test_ls10(u)


def screen_one(
    cand: CandidateU,
    mode: Mode,
    turyn_cap: int | None = criteria.TURYN_OMEGA_CAP,
    ls1_cap: int | None = criteria.LS1_OMEGA_CAP,
    full_ledger: bool = False,
) -> CandidateU:
    cand.verdicts = []
    for theorem in screen_order(mode):
        v = run_test(theorem, cand.factorization, turyn_cap, ls1_cap)
        cand.verdicts.append(v)
        if v.excluded and not full_ledger:
            break
    if any(v.excluded for v in cand.verdicts):
        cand.status = Status.EXCLUDED
    elif any(v.inconclusive for v in cand.verdicts):
        cand.status = Status.INCONCLUSIVE
    else:
        cand.status = Status.ADMISSIBLE
    return cand


def screen(
    candidates: Iterable[CandidateU],
    mode: Mode,
    turyn_cap: int | None = criteria.TURYN_OMEGA_CAP,
    ls1_cap: int | None = criteria.LS1_OMEGA_CAP,
    full_ledger: bool = False,
    workers: int = 1,
) -> list[CandidateU]:
    """Apply the mode's tests in order, cheap ones first, stopping at the first exclusion."""
    cands = list(candidates)
    if workers > 1 and len(cands) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            args = [(c, mode, turyn_cap, ls1_cap, full_ledger) for c in cands]
            cands = list(pool.map(_screen_args, args))
    else:
        for c in cands:
            screen_one(c, mode, turyn_cap, ls1_cap, full_ledger)
    cands.sort(key=lambda c: c.u)
    return cands


def _screen_args(args: tuple) -> CandidateU:
    return screen_one(*args)


# -- candidates file ------------------------------------------------------

FIELDS = ["u", "factorization", "omega", "status", "excluded_by", "witness", "ledger"]


def _ledger_text(verdicts: list[Verdict]) -> str:
    return ";".join(f"{v.theorem.value}:{v.outcome.value}" for v in verdicts)


def format_candidates(cands: Iterable[CandidateU], header: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for h in header:
        buf.write(f"# {h}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for c in sorted(cands, key=lambda c: c.u):
        d = c.deciding
        w.writerow(
            [
                c.u,
                str(c.factorization),
                c.omega,
                c.status.value,
                d.theorem.value if d else "",
                " ".join(map(str, d.witness)) if d else "",
                _ledger_text(c.verdicts),
            ]
        )
    return buf.getvalue()


def write_candidates(cands: Iterable[CandidateU], path, header: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_candidates(cands, header))


class CandidateFormatError(ValueError):
    pass


def parse_candidates(text: str, source: str = "<candidates>") -> list[CandidateU]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        return []
    reader = csv.DictReader(lines)
    missing = set(FIELDS[:6]) - set(reader.fieldnames or ())
    if missing:
        raise CandidateFormatError(f"{source}: missing columns {sorted(missing)}")
    out = []
    for i, row in enumerate(reader, 2):
        try:
            f = Factorization.parse(row["factorization"])
            if f.value != int(row["u"]) or f.omega != int(row["omega"]):
                raise ValueError("factorization does not match u/omega")
            status = Status(row["status"])
            verdicts = []
            for item in filter(None, (row.get("ledger") or "").split(";")):
                name, _, outcome = item.partition(":")
                verdicts.append(Verdict(Theorem(name), Outcome(outcome)))
            if row["excluded_by"]:
                theorem = Theorem(row["excluded_by"])
                witness = tuple(int(x) for x in row["witness"].split())
                verdicts = [
                    Verdict(theorem, Outcome.EXCLUDED, witness) if v.theorem is theorem else v
                    for v in verdicts
                ] or [Verdict(theorem, Outcome.EXCLUDED, witness)]
            elif status is Status.EXCLUDED:
                raise ValueError("excluded row without excluded_by")
        except (ValueError, KeyError) as exc:
            raise CandidateFormatError(f"{source}: row {i}: {exc}") from exc
        out.append(CandidateU(f, verdicts, status))
    return out


def read_candidates(path) -> list[CandidateU]:
    with open(path) as fh:
        return parse_candidates(fh.read(), str(path))
