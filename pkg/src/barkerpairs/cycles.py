"""Elementary circuits of the prime graph.

Parallel solid and flimsy edges between the same two primes give distinct
cycles: a cycle is its vertex sequence plus the edge kind used at each hop.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .graph import Kind, PrimeGraph


class CycleBudgetExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"cycle budget exceeded: more than {cap} cycles")
        self.cap = cap


@dataclass(frozen=True)
class Cycle:
    """Vertices in canonical rotation (smallest first); ``kinds[i]`` labels
    the edge from ``vertices[i]`` to the next vertex (cyclically)."""

    vertices: tuple[int, ...]
    kinds: tuple[Kind, ...]

    @property
    def product(self) -> int:
        return math.prod(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def sort_key(self) -> tuple:
        return (len(self.vertices), self.vertices, tuple(k.value for k in self.kinds))

    def __str__(self) -> str:
        return " ".join(map(str, self.vertices)) + " | " + "".join(k.value for k in self.kinds)

    @classmethod
    def parse(cls, line: str) -> Cycle:
        verts, _, kinds = line.partition("|")
        vs = tuple(int(x) for x in verts.split())
        ks = tuple(Kind(ch) for ch in kinds.strip())
        if len(vs) != len(ks) or not vs:
            raise ValueError(f"malformed cycle line {line!r}")
        return cls(vs, ks)


def _canonical(path: list[int]) -> tuple[int, ...]:
    i = path.index(min(path))
    return tuple(path[i:] + path[:i])


def _expand(path: Iterable[tuple[int, ...]], adj: dict[int, dict[int, tuple[Kind, ...]]]) -> Iterator[Cycle]:
    for verts in path:
        hops = [adj[verts[i]][verts[(i + 1) % len(verts)]] for i in range(len(verts))]
        for kinds in product(*hops):
            yield Cycle(verts, kinds)


def _sccs(adj: dict[int, list[int]]) -> list[set[int]]:
    """Tarjan's strongly connected components, iteratively."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[set[int]] = []
    counter = 0
    for root in sorted(adj):
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _unblock(v: int, blocked: set[int], B: dict[int, set[int]]) -> None:
    todo = {v}
    while todo:
        x = todo.pop()
        if x in blocked:
            blocked.discard(x)
            todo |= B[x]
            B[x].clear()


def _johnson(adj: dict[int, list[int]]) -> Iterator[tuple[int, ...]]:
    """Johnson's circuit enumeration on a simple digraph without self-loops."""
    pending = [c for c in _sccs(adj) if len(c) > 1]
    while pending:
        scc = pending.pop()
        start = min(scc)
        sub = {v: [w for w in adj[v] if w in scc] for v in scc}
        path = [start]
        blocked = {start}
        closed: set[int] = set()
        B: dict[int, set[int]] = defaultdict(set)
        stack = [(start, list(sub[start]))]
        while stack:
            v, nbrs = stack[-1]
            if nbrs:
                w = nbrs.pop()
                if w == start:
                    yield _canonical(path)
                    closed.update(path)
                elif w not in blocked:
                    path.append(w)
                    stack.append((w, list(sub[w])))
                    closed.discard(w)
                    blocked.add(w)
                    continue
            if not nbrs:
                if v in closed:
                    _unblock(v, blocked, B)
                else:
                    for w in sub[v]:
                        B[w].add(v)
                stack.pop()
                path.pop()
        rest = {v: [w for w in sub[v] if w != start] for v in scc if v != start}
        pending.extend(c for c in _sccs(rest) if len(c) > 1)


def _simple_adj(g: PrimeGraph) -> dict[int, list[int]]:
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for _, a, b in g.edges():
        adj[a].add(b)
    return {v: sorted(ws) for v, ws in adj.items()}


def _finish(found: Iterable[tuple[int, ...]], g: PrimeGraph, max_cycles: int | None) -> list[Cycle]:
    adj = g.successors()
    out = []
    for c in _expand(found, adj):
        out.append(c)
        if max_cycles is not None and len(out) > max_cycles:
            raise CycleBudgetExceeded(max_cycles)
    out.sort(key=Cycle.sort_key)
    return out


def enumerate_cycles(g: PrimeGraph, max_cycles: int | None = None) -> list[Cycle]:
    """Every elementary circuit exactly once, sorted by (length, vertices, kinds)."""
    return _finish(_johnson(_simple_adj(g)), g, max_cycles)


def _dfs_cycles(adj: dict[int, list[int]], bound: int | None) -> Iterator[tuple[int, ...]]:
    for s in sorted(adj):
        if bound is not None and s > bound:
            break
        path = [s]
        on_path = {s}
        stack = [iter(adj[s])]
        prod = s
        while stack:
            for w in stack[-1]:
                if w == s:
                    yield tuple(path)
                elif w > s and w not in on_path and (bound is None or prod * w <= bound):
                    path.append(w)
                    on_path.add(w)
                    prod *= w
                    stack.append(iter(adj[w]))
                    break
            else:
                stack.pop()
                v = path.pop()
                on_path.discard(v)
                prod //= v


def naive_cycles(g: PrimeGraph, max_cycles: int | None = None) -> list[Cycle]:
    """Plain DFS from each vertex over larger vertices; the oracle for Johnson."""
    return _finish(_dfs_cycles(_simple_adj(g), None), g, max_cycles)


def bounded_cycles(g: PrimeGraph, bound: int, max_cycles: int | None = None) -> list[Cycle]:
    """Cycles with vertex product <= bound, pruned during the search.

    Same result as ``small_product_cycles(enumerate_cycles(g), bound)`` but
    practical on graphs with far too many cycles to list.
    """
    out = _finish(_dfs_cycles(_simple_adj(g), bound), g, max_cycles)
    out.sort(key=lambda c: (c.product, c.sort_key()))
    return out


def small_product_cycles(cycles: Iterable[Cycle], bound: int) -> list[Cycle]:
    kept = [c for c in cycles if c.product <= bound]
    kept.sort(key=lambda c: (c.product, c.sort_key()))
    return kept


def cycle_in_graph(c: Cycle, g: PrimeGraph) -> bool:
    n = len(c.vertices)
    if len(set(c.vertices)) != n:
        return False
    for i, kind in enumerate(c.kinds):
        edge = (c.vertices[i], c.vertices[(i + 1) % n])
        if edge not in (g.solid if kind is Kind.SOLID else g.flimsy):
            return False
    return True


def write_cycles(cycles: Iterable[Cycle], path: str | os.PathLike, header: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        for h in header:
            fh.write(f"# {h}\n")
        for c in sorted(cycles, key=Cycle.sort_key):
            fh.write(f"{c}\n")


def read_cycles(path: str | os.PathLike) -> list[Cycle]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                out.append(Cycle.parse(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return out
