"""The directed prime graph: solid edges q -> p for Wieferich pairs (q, p),
flimsy edges r -> p whenever p divides r - 1.
"""

from __future__ import annotations

import heapq
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .arith import factorize, integer_root, is_prime
from .wieferich import WieferichPair, is_wieferich, search_descending

log = logging.getLogger(__name__)


class Mode(str, Enum):
    BARKER = "barker"
    CHM = "chm"

    @property
    def congruence(self) -> tuple[int, int]:
        return (1, 4) if self is Mode.BARKER else (1, 2)

    def admits(self, p: int) -> bool:
        r, m = self.congruence
        return p > 2 and p % m == r


class Kind(str, Enum):
    SOLID = "S"
    FLIMSY = "F"


class GraphFormatError(ValueError):
    def __init__(self, path: str, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.lineno = lineno


class GraphInvariantError(ValueError):
    """An edge or vertex fails the graph's defining property."""


def default_vertex_bound(max_u: int) -> int:
    """Largest prime that can divide an admissible u <= max_u: p^3 <= 2u^2."""
    return integer_root(2 * max_u * max_u, 3)


@dataclass
class PrimeGraph:
    mode: Mode
    bound: int
    solid: set[tuple[int, int]] = field(default_factory=set)
    flimsy: set[tuple[int, int]] = field(default_factory=set)
    vertices: set[int] = field(default_factory=set)
    complete: bool = True

    def add_edge(self, a: int, b: int, kind: Kind) -> None:
        if a == b:
            raise GraphInvariantError(f"self-loop at {a}")
        (self.solid if kind is Kind.SOLID else self.flimsy).add((a, b))
        self.vertices.update((a, b))

    def edges(self) -> list[tuple[Kind, int, int]]:
        """All edges sorted by (kind letter, from, to)."""
        out = [(Kind.SOLID, a, b) for a, b in self.solid] + [(Kind.FLIMSY, a, b) for a, b in self.flimsy]
        out.sort(key=lambda e: (e[0].value, e[1], e[2]))
        return out

    def successors(self) -> dict[int, dict[int, tuple[Kind, ...]]]:
        """Adjacency map ``v -> {w: kinds of the parallel edges v -> w}``."""
        adj: dict[int, dict[int, list[Kind]]] = {v: {} for v in self.vertices}
        for kind, a, b in self.edges():
            adj[a].setdefault(b, []).append(kind)
        return {v: {w: tuple(ks) for w, ks in nbrs.items()} for v, nbrs in adj.items()}

    def over_bound(self) -> list[int]:
        return sorted(v for v in self.vertices if v > self.bound)

    def stats_line(self) -> str:
        return f"# vertices={len(self.vertices)} solid={len(self.solid)} flimsy={len(self.flimsy)}"

    def validate(self) -> None:
        for a, b in self.solid:
            if a == b or not is_wieferich(a, b):
                raise GraphInvariantError(f"solid edge {a} -> {b} is not a Wieferich pair")
        for a, b in self.flimsy:
            if a == b or (a - 1) % b:
                raise GraphInvariantError(f"flimsy edge {a} -> {b}: {b} does not divide {a - 1}")
        for v in self.vertices:
            if not self.mode.admits(v) or not is_prime(v):
                raise GraphInvariantError(f"vertex {v} is not a {self.mode.value}-mode prime")


def _flimsy_targets(v: int, mode: Mode, bound: int) -> list[int]:
    return [p for p in factorize(v - 1).primes if mode.admits(p) and p <= bound]


def build_closure(
    seed_pairs: Iterable[WieferichPair],
    mode: Mode,
    bound: int,
    descent_bound: int | None = None,
    descended: int = 0,
    max_vertices: int | None = None,
) -> PrimeGraph:
    """Grow the graph from seed pairs until no new primes appear.

    Each new vertex v gets flimsy edges to the admissible primes p <= bound
    dividing v - 1, and a descending Wieferich search over p < min(v, bound).
    ``descent_bound`` caps that search (marking the graph incomplete when it
    bites); vertices ``<= descended`` skip it because the seed search already
    covered them.  ``max_vertices`` stops the closure early, also marking it
    incomplete.
    """
    g = PrimeGraph(mode, bound)
    # smallest-first keeps the work order independent of seed order
    queue: list[int] = []

    def touch(v: int) -> None:
        if v not in g.vertices:
            g.vertices.add(v)
            heapq.heappush(queue, v)

    for q, p in sorted(set(seed_pairs)):
        if not (mode.admits(q) and mode.admits(p)):
            raise GraphInvariantError(f"seed pair ({q}, {p}) outside the {mode.value} class")
        touch(q)
        touch(p)
        g.add_edge(q, p, Kind.SOLID)
    for v in g.over_bound():
        log.warning("seed vertex %d exceeds the vertex bound %d", v, bound)

    processed = 0
    while queue:
        if max_vertices is not None and processed >= max_vertices:
            g.complete = False
            break
        v = heapq.heappop(queue)
        processed += 1
        for p in _flimsy_targets(v, mode, bound):
            touch(p)
            g.add_edge(v, p, Kind.FLIMSY)
        if v > descended:
            limit = min(v, bound)
            if descent_bound is not None and descent_bound < limit:
                limit = descent_bound
                g.complete = False
            for q, p in search_descending(v, limit, mode.congruence):
                touch(p)
                g.add_edge(q, p, Kind.SOLID)
    return g


def format_graph(g: PrimeGraph, header: Iterable[str] = ()) -> str:
    """Edge-list text: caller header lines, the mode line, the stats line, then edges."""
    lines = [f"# {h}" for h in header]
    lines.append(f"# mode={g.mode.value} P={g.bound} complete={int(g.complete)}")
    lines.append(g.stats_line())
    lines += [f"{k.value} {a} {b}" for k, a, b in g.edges()]
    return "\n".join(lines) + "\n"


def save(g: PrimeGraph, path: str | os.PathLike, header: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g, header))


def load(path: str | os.PathLike, validate: bool = True) -> PrimeGraph:
    """Read an edge-list file; by default every edge is re-verified."""
    path = str(path)
    mode, bound, complete = None, None, True
    edges: list[tuple[int, Kind, int, int]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    try:
                        if key == "mode":
                            mode = Mode(val)
                        elif key == "P":
                            bound = int(val)
                        elif key == "complete":
                            complete = val == "1"
                    except ValueError as exc:
                        raise GraphFormatError(path, lineno, f"bad header field {tok!r}") from exc
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("S", "F"):
                raise GraphFormatError(path, lineno, f"expected 'S q p' or 'F r p', got {line!r}")
            try:
                a, b = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise GraphFormatError(path, lineno, "non-integer vertex") from exc
            edges.append((lineno, Kind(parts[0]), a, b))
    if mode is None or bound is None:
        raise GraphFormatError(path, 1, "missing '# mode=... P=...' header")
    g = PrimeGraph(mode, bound, complete=complete)
    for lineno, kind, a, b in edges:
        if a == b:
            raise GraphInvariantError(f"{path}:{lineno}: self-loop at {a}")
        g.add_edge(a, b, kind)
    if validate:
        g.validate()
    for v in g.over_bound():
        log.warning("vertex %d exceeds the vertex bound P=%d", v, bound)
    return g
