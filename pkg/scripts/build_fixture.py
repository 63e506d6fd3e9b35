"""Regenerate the Barker-mode fixture files under src/barkerpairs/data/.

published_cycles.txt   the seven known small cycles, one per line
barker_fixture.graph   closure of their solid edges plus a small ascending search
witnesses.csv          expected verdicts and witnesses for eight reference values

Run from the repository root: python3 scripts/build_fixture.py
"""

from __future__ import annotations

import math
from pathlib import Path

from barkerpairs import graph
from barkerpairs.cycles import Cycle, cycle_in_graph
from barkerpairs.graph import Kind, Mode, PrimeGraph
from barkerpairs.wieferich import SearchTask, WieferichPair, is_wieferich, search_pairs

DATA = Path(__file__).resolve().parent.parent / "src" / "barkerpairs" / "data"

CYCLES = [
    "5 S 53471161 F 5",
    "5 S 188748146801 S 5",
    "41 S 138200401 F 2953 F 41",
    "53 S 97 S 76704103313 F 4794006457 F 53",
    "30109 S 1128713 S 268813277 F 2167849 F 30109",
    "37 S 76407520781 F 3301 S 24329 S 1297 S 31268910217 S 2797 S 76369 F 37",
    "53 S 97 S 76704103313 S 16229 F 4057 S 11821 F 197 S 653 S 1381 S 1777 S 53",
]
# two further small cycles through the first one
EXTRA = ["5 S 53471161 S 193 S 5", "5 S 6692367337 S 1601 S 5"]

U = math.isqrt(10**33)
ASCENDING_Q = 1000
ASCENDING_P = 10**6
DESCENT = 10**5

_R7 = 4877 * 53471161
WITNESSES = [
    # u, factorization, theorem, witness
    (217520382953549, "13*41*2953*138200401", "LS5", (138200401, 2953)),
    (1087601914767745, "5*13*41*2953*138200401", "LS5", (138200401, 5 * 2953)),
    (1258257961850525, "5^2*193*4877*53471161", "Turyn", (53471161, 2 * 4877**2 * 53471161**2)),
    (2426188886789585, "5*29*41*2953*138200401", "LS5", (138200401, 29 * 2953)),
    (5032969334448665, "5*5333*188748146801", "Turyn", (5333, 188748146801**2 * 5333**2)),
    (6308091105652921, "13*29*41*2953*138200401", "LS5", (138200401, 29 * 2953)),
    (13337534395615565, "5*53*193*4877*53471161", "Turyn", (_R7, _R7**2)),
    (31540455528264605, "5*13*29*41*2953*138200401", "", ()),
]


def parse_chain(text: str) -> tuple[list[tuple[int, int, Kind]], Cycle]:
    tok = text.split()
    verts = [int(t) for t in tok[::2]]
    kinds = [Kind(t) for t in tok[1::2]]
    assert verts[0] == verts[-1]
    edges = list(zip(verts, verts[1:], kinds))
    i = verts.index(min(verts[:-1]))
    ring = verts[:-1]
    return edges, Cycle(tuple(ring[i:] + ring[:i]), tuple(kinds[i:] + kinds[:i]))


def main() -> None:
    seeds: set[WieferichPair] = set()
    published = PrimeGraph(Mode.BARKER, graph.default_vertex_bound(U))
    cycles = []
    for text in CYCLES + EXTRA:
        edges, cyc = parse_chain(text)
        for a, b, k in edges:
            if k is Kind.SOLID:
                assert is_wieferich(a, b), (a, b)
                seeds.add(WieferichPair(a, b))
            else:
                assert (a - 1) % b == 0, (a, b)
            published.add_edge(a, b, k)
        if text in CYCLES:
            cycles.append(cyc)
    published.validate()
    assert all(cycle_in_graph(c, published) for c in cycles)

    seeds |= set(search_pairs(SearchTask((5, ASCENDING_Q), (5, ASCENDING_P), Mode.BARKER.congruence)))
    g = graph.build_closure(seeds, Mode.BARKER, graph.default_vertex_bound(U), descent_bound=DESCENT)

    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "published_cycles.txt").write_text("".join(f"{c}\n" for c in cycles))
    graph.save(
        g,
        DATA / "barker_fixture.graph",
        header=[
            "seeds: solid edges of published_cycles.txt and of the cycles 5-53471161-193, 5-6692367337-1601",
            f"plus every pair with q <= {ASCENDING_Q}, p <= {ASCENDING_P}, both 1 mod 4;",
            f"closure with descending searches capped at p < {DESCENT} (hence complete=0)",
        ],
    )
    lines = ["u,factorization,excluded_by,witness"]
    lines += [f"{u},{f},{t},{' '.join(map(str, w))}" for u, f, t, w in WITNESSES]
    (DATA / "witnesses.csv").write_text("\n".join(lines) + "\n")
    print(g.stats_line())


if __name__ == "__main__":
    main()
