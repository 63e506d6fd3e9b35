"""Staged search pipeline: sieve, pairs, graph, cycles, augment, screen, report.

Every stage writes one file into the run directory.  The first line of each
file is ``# config=<hash>``; on a re-run a stage whose file carries the
current hash is loaded instead of recomputed, and a file carrying any other
hash stops the run with :class:`ConfigMismatch`.
"""

from __future__ import annotations

import hashlib
import logging
import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from . import augment, cycles, graph
from .arith import integer_root, sieve_primes
from .augment import CandidateU, Status
from .criteria import LS1_OMEGA_CAP, TURYN_OMEGA_CAP, Theorem
from .graph import Mode, PrimeGraph
from .wieferich import DEFAULT_SEGMENT, SearchTask, read_pairs, search_pairs

log = logging.getLogger(__name__)

STAGES = ("sieve", "pairs", "graph", "cycles", "augment", "screen", "report")
STAGE_FILES = {
    "sieve": "primes.txt",
    "pairs": "pairs.txt",
    "graph": "graph.txt",
    "cycles": "cycles.txt",
    "augment": "candidates.csv",
    "screen": "screened.csv",
    "report": "report.txt",
}
MANIFEST = "manifest.txt"

ALL_THEOREMS = tuple(Theorem)


class ConfigMismatch(RuntimeError):
    """A stage file in the run directory was produced by another configuration."""


def parse_bound(text: str | int) -> int:
    """Floor of a bound written as ``10^16.5``, ``5e6``, ``5*10^24`` or plain digits.

    Fractional exponents are handled exactly: ``10^16.5`` is ``isqrt(10^33)``.
    """
    if isinstance(text, int):
        value = text
    else:
        coeff = Fraction(1)
        roots: list[tuple[int, Fraction]] = []
        s = text.replace(" ", "").replace("**", "^").replace("_", "")
        if not s:
            raise ValueError("empty bound")
        for term in s.split("*"):
            base, caret, exp = term.partition("^")
            if not caret:
                coeff *= Fraction(base)
                continue
            b, e = Fraction(base), Fraction(exp)
            if b.denominator != 1 or b < 1 or e < 0:
                raise ValueError(f"unsupported power {term!r}")
            if e.denominator == 1:
                coeff *= b ** int(e)
            else:
                roots.append((int(b), e))
        L = math.lcm(*(e.denominator for _, e in roots)) if roots else 1
        y = coeff**L
        for b, e in roots:
            y *= b ** int(e * L)
        value = integer_root(math.floor(y), L)
    if value < 1:
        raise ValueError(f"bound must be positive, got {text!r}")
    return value


@dataclass(frozen=True)
class PipelineConfig:
    mode: Mode
    max_u: int
    max_prime: int | None = None
    bound_w: int | None = None
    turyn_cap: int | None = TURYN_OMEGA_CAP
    ls1_cap: int | None = LS1_OMEGA_CAP
    workers: int = 1
    segment_size: int = DEFAULT_SEGMENT
    checkpoint_dir: Path = Path("run")
    fixture: Path | None = None
    full_ledger: bool = False
    resume: bool = False

    @property
    def U(self) -> int:
        return self.max_u

    @property
    def P(self) -> int:
        return self.max_prime if self.max_prime is not None else graph.default_vertex_bound(self.max_u)

    @property
    def W(self) -> int:
        return self.bound_w if self.bound_w is not None else self.max_u

    def validate(self) -> None:
        if self.max_u < 1:
            raise ValueError("U must be positive")
        if self.W < self.U:
            raise ValueError(f"W = {self.W} is below U = {self.U}")
        if self.P < 3:
            raise ValueError(f"P = {self.P} is below 3")
        if self.workers < 1 or self.segment_size < 1:
            raise ValueError("workers and segment size must be positive")

    def describe(self) -> list[tuple[str, str]]:
        """The settings that determine the output files (workers and paths excluded)."""
        fixture = _file_hash(self.fixture) if self.fixture is not None else "none"
        return [
            ("mode", self.mode.value),
            ("U", str(self.U)),
            ("P", str(self.P)),
            ("W", str(self.W)),
            ("turyn_cap", str(self.turyn_cap)),
            ("ls1_cap", str(self.ls1_cap)),
            ("segment_size", str(self.segment_size)),
            ("full_ledger", str(int(self.full_ledger))),
            ("fixture", fixture),
        ]

    def config_hash(self) -> str:
        text = ";".join(f"{k}={v}" for k, v in self.describe())
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _file_hash(path: Path) -> str:
    """Content hash in git's blob style: sha1 of ``blob <len>\\0<bytes>``."""
    data = Path(path).read_bytes()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


# -- report ---------------------------------------------------------------


@dataclass
class RunReport:
    theorems: tuple[Theorem, ...] = ALL_THEOREMS
    rows: dict[int, dict[str, int]] = field(default_factory=dict)

    @classmethod
    def from_candidates(cls, cands: Iterable[CandidateU], theorems: Iterable[Theorem] | None = None) -> RunReport:
        rep = cls(tuple(theorems) if theorems is not None else ALL_THEOREMS)
        for c in cands:
            row = rep.rows.setdefault(c.omega, rep._blank())
            row["Initial"] += 1
            d = c.deciding
            if d is not None:
                if d.theorem not in rep.theorems:
                    rep.theorems = tuple(t for t in ALL_THEOREMS if t in rep.theorems or t is d.theorem)
                    for r in rep.rows.values():
                        r.setdefault(d.theorem.value, 0)
                row[d.theorem.value] += 1
            elif c.status is Status.ADMISSIBLE:
                row["Admissible"] += 1
            else:
                row["Inconclusive"] += 1
        return rep

    def _blank(self) -> dict[str, int]:
        row = {"Initial": 0}
        row.update((t.value, 0) for t in self.theorems)
        row["Admissible"] = 0
        row["Inconclusive"] = 0
        return row

    def totals(self) -> dict[str, int]:
        tot = self._blank()
        for row in self.rows.values():
            for k, v in row.items():
                tot[k] += v
        return tot

    def check(self) -> None:
        for omega, row in {**self.rows, -1: self.totals()}.items():
            parts = sum(row[t.value] for t in self.theorems) + row["Admissible"] + row["Inconclusive"]
            if parts != row["Initial"]:
                raise AssertionError(f"report row {omega}: {parts} != {row['Initial']}")

    def columns(self) -> list[str]:
        cols = ["Initial"] + [t.value for t in self.theorems] + ["Admissible"]
        if self.totals()["Inconclusive"]:
            cols.append("Inconclusive")
        return cols

    def render(self) -> str:
        cols = self.columns()
        table = [["Omega"] + cols]
        for omega in sorted(self.rows):
            table.append([str(omega)] + [str(self.rows[omega][c]) for c in cols])
        tot = self.totals()
        table.append(["Total"] + [str(tot[c]) for c in cols])
        widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in table]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


# -- stages ---------------------------------------------------------------


def _read_header_hash(path: Path) -> str | None:
    with open(path) as fh:
        m = re.match(r"# config=(\w+)", fh.readline())
    return m.group(1) if m else None


class Runner:
    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.dir = Path(config.checkpoint_dir)
        self.hash = config.config_hash()
        self.header = [f"config={self.hash}"]

    def path(self, stage: str) -> Path:
        return self.dir / STAGE_FILES[stage]

    def done(self, stage: str) -> bool:
        """True when the stage file exists for this config; raises if it belongs to another."""
        p = self.path(stage)
        if not p.exists():
            return False
        found = _read_header_hash(p)
        if found != self.hash:
            raise ConfigMismatch(f"{p} was written with config {found}, current config is {self.hash}")
        log.info("stage %s: reusing %s", stage, p)
        return True

    def _write(self, stage: str, body: str) -> None:
        p = self.path(stage)
        tmp = p.with_suffix(p.suffix + ".tmp")
        tmp.write_text(body)
        tmp.replace(p)

    # individual stages

    def sieve(self) -> None:
        if self.done("sieve"):
            return
        cfg = self.config
        primes = sieve_primes(3, cfg.P, cfg.mode.congruence)
        body = f"# config={self.hash}\n# mode={cfg.mode.value} P={cfg.P} count={len(primes)}\n"
        body += "".join(f"{p}\n" for p in primes)
        self._write("sieve", body)

    def pairs(self):
        cfg = self.config
        if not self.done("pairs"):
            task = SearchTask((3, cfg.P), (3, cfg.P), cfg.mode.congruence, cfg.segment_size)
            partial = self.dir / "pairs.partial"
            ckpt = self.dir / "pairs.checkpoint"
            found = search_pairs(task, partial, ckpt, workers=cfg.workers, resume=cfg.resume)
            found.sort(key=lambda pr: (pr.q, pr.p))
            body = f"# config={self.hash}\n# task={task.task_hash()} pairs={len(found)}\n"
            body += "".join(f"{q} {p}\n" for q, p in found)
            self._write("pairs", body)
            partial.unlink()
            ckpt.unlink()
        return read_pairs(self.path("pairs"))

    def graph(self) -> PrimeGraph:
        cfg = self.config
        if not self.done("graph"):
            if cfg.fixture is not None:
                g = graph.load(cfg.fixture)
                if g.mode is not cfg.mode:
                    raise ValueError(f"fixture {cfg.fixture} is a {g.mode.value} graph, run mode is {cfg.mode.value}")
                g.bound = cfg.P
            else:
                # the seed search covered every pair with both primes <= P
                g = graph.build_closure(self.pairs(), cfg.mode, cfg.P, descended=cfg.P)
            self._write("graph", graph.format_graph(g, self.header))
            return g
        return graph.load(self.path("graph"), validate=False)

    def cycles(self, g: PrimeGraph) -> list[cycles.Cycle]:
        if not self.done("cycles"):
            found = cycles.bounded_cycles(g, self.config.W)
            body = f"# config={self.hash}\n# W={self.config.W} cycles={len(found)}\n"
            body += "".join(f"{c}\n" for c in sorted(found, key=cycles.Cycle.sort_key))
            self._write("cycles", body)
            return found
        return cycles.read_cycles(self.path("cycles"))

    def augment(self, g: PrimeGraph, cyc: list[cycles.Cycle]) -> list[CandidateU]:
        if not self.done("augment"):
            cands = augment.candidates_from_cycles(g, cyc, self.config.W)
            self._write("augment", augment.format_candidates(cands, self.header + [f"W={self.config.W}"]))
            return cands
        return augment.read_candidates(self.path("augment"))

    def screen(self, cands: list[CandidateU]) -> list[CandidateU]:
        cfg = self.config
        if not self.done("screen"):
            res = augment.screen(cands, cfg.mode, cfg.turyn_cap, cfg.ls1_cap, cfg.full_ledger, cfg.workers)
            hdr = self.header + [f"mode={cfg.mode.value}"]
            self._write("screen", augment.format_candidates(res, hdr))
            return res
        return augment.read_candidates(self.path("screen"))

    def report(self, res: list[CandidateU]) -> RunReport:
        rep = RunReport.from_candidates(res, augment.screen_order(self.config.mode))
        rep.check()
        if not self.done("report"):
            self._write("report", f"# config={self.hash}\n" + rep.render())
        return rep

    def manifest(self) -> None:
        lines = [f"{k}={v}" for k, v in self.config.describe()]
        lines.append(f"config={self.hash}")
        for stage in STAGES:
            p = self.path(stage)
            if p.exists():
                lines.append(f"{STAGE_FILES[stage]}={_file_hash(p)}")
        (self.dir / MANIFEST).write_text("\n".join(lines) + "\n")


def run_pipeline(config: PipelineConfig) -> tuple[RunReport, list[CandidateU]]:
    """Run (or resume) every stage; returns the report and the screened candidates."""
    r = Runner(config)
    r.dir.mkdir(parents=True, exist_ok=True)
    t0 = time.monotonic()
    if config.fixture is None:
        r.sieve()
    g = r.graph()
    log.info("graph: %s", g.stats_line()[2:])
    cyc = r.cycles(g)
    log.info("cycles: %d with product <= %d", len(cyc), config.W)
    cands = r.augment(g, cyc)
    log.info("augment: %d candidates", len(cands))
    res = r.screen(cands)
    rep = r.report(res)
    r.manifest()
    n_adm = sum(c.status is Status.ADMISSIBLE for c in res)
    log.info("done in %.1fs: %d screened, %d admissible", time.monotonic() - t0, len(res), n_adm)
    return rep, res
