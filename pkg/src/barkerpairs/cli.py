"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 bad input data, 3 checkpoint or config mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from . import augment, barker, criteria, cycles, graph
from .arith import Factorization, FactorizationError, factorize, sieve_primes
from .augment import CandidateU, Status
from .graph import Mode
from .pipeline import ConfigMismatch, PipelineConfig, RunReport, parse_bound, run_pipeline
from .wieferich import CheckpointMismatch, SearchTask, format_pairs, read_pairs, search_pairs

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MISMATCH = 0, 1, 2, 3

BUILTIN_FIXTURE = "barker_fixture.graph"

log = logging.getLogger("barkerpairs")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def data_path(name: str) -> Path:
    return Path(str(resources.files("barkerpairs") / "data" / name))


def _bound(text: str) -> int:
    try:
        return parse_bound(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a bound: {text!r}") from exc


def _fixture(text: str) -> Path:
    return data_path(BUILTIN_FIXTURE) if text == "builtin" else Path(text)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _prime_bound(args) -> int:
    if args.max_prime is not None:
        return args.max_prime
    if args.max_u is not None:
        return graph.default_vertex_bound(args.max_u)
    raise UsageError("one of --max-prime or --max-u is required")


def _w_bound(args) -> int:
    w = args.bound_w if args.bound_w is not None else args.max_u
    if w is None:
        raise UsageError("one of --bound-w or --max-u is required")
    return w


def _parse_u(text: str) -> Factorization:
    if "*" in text or "^" in text:
        f = Factorization.parse(text)
        f.check()
        return f
    return factorize(int(text))


# -- subcommands ------------------------------------------------------------


def cmd_sieve(args) -> int:
    P = _prime_bound(args)
    primes = sieve_primes(3, P, Mode(args.mode).congruence)
    _emit("".join(f"{p}\n" for p in primes), args.out)
    return EXIT_OK


def cmd_wieferich(args) -> int:
    P = _prime_bound(args)
    task = SearchTask((3, P), (3, P), Mode(args.mode).congruence, args.segment_size)
    ckdir = args.checkpoint_dir
    if ckdir is not None:
        ckdir.mkdir(parents=True, exist_ok=True)
        pairs = search_pairs(
            task, ckdir / "pairs.partial", ckdir / "pairs.checkpoint", workers=args.threads, resume=args.resume
        )
    else:
        pairs = search_pairs(task, workers=args.threads)
    _emit(format_pairs(sorted(pairs)), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    mode = Mode(args.mode)
    if args.fixture is not None:
        g = graph.load(args.fixture)
    elif args.pairs is not None:
        P = _prime_bound(args)
        g = graph.build_closure(read_pairs(args.pairs), mode, P, descended=P)
    else:
        raise UsageError("graph needs --pairs or --fixture")
    _emit(graph.format_graph(g), args.out)
    return EXIT_OK


def cmd_cycles(args) -> int:
    g = graph.load(args.graph)
    found = cycles.bounded_cycles(g, _w_bound(args))
    _emit("".join(f"{c}\n" for c in sorted(found, key=cycles.Cycle.sort_key)), args.out)
    return EXIT_OK


def cmd_augment(args) -> int:
    g = graph.load(args.graph)
    W = _w_bound(args)
    cyc = cycles.read_cycles(args.cycles) if args.cycles is not None else cycles.bounded_cycles(g, W)
    cands = augment.candidates_from_cycles(g, cyc, W)
    _emit(augment.format_candidates(cands), args.out)
    return EXIT_OK


def cmd_screen(args) -> int:
    if args.u:
        cands = [CandidateU(_parse_u(text)) for text in args.u]
    elif args.candidates is not None:
        cands = augment.read_candidates(args.candidates)
    else:
        raise UsageError("screen needs --candidates or --u")
    res = augment.screen(cands, Mode(args.mode), args.turyn_cap, args.ls1_cap, args.full_ledger, args.threads)
    _emit(augment.format_candidates(res, [f"mode={args.mode}"]), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    cands = augment.read_candidates(args.candidates)
    theorems = augment.screen_order(Mode(args.mode)) if args.mode else None
    rep = RunReport.from_candidates(cands, theorems)
    rep.check()
    _emit(rep.render(), args.out)
    return EXIT_OK


def cmd_barker_verify(args) -> int:
    expected = {1, 2, 3, 4, 5, 7, 11, 13}
    ok = True
    for n in range(1, args.max_length + 1):
        seqs = barker.exhaustive_search(n)
        reps = barker.orbit_representatives(seqs)
        gammas = {barker.autocorrelations(s).periodic[1:] for s in seqs}
        shown = " ".join(barker.to_string(s) for s in reps) or "-"
        print(f"n={n:2d} sequences={len(seqs):2d} orbits={len(reps)} {shown}")
        if bool(seqs) != (n in expected) or (seqs and len(reps) != 1):
            ok = False
        if n > 2 and seqs:
            want = 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)
            if gammas != {(want,) * (n - 1)}:
                ok = False
    print("barker ground truth:", "ok" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_DATA


def cmd_pipeline(args) -> int:
    if args.max_u is None:
        raise UsageError("pipeline needs --max-u")
    cfg = PipelineConfig(
        mode=Mode(args.mode),
        max_u=args.max_u,
        max_prime=args.max_prime,
        bound_w=args.bound_w,
        turyn_cap=args.turyn_cap,
        ls1_cap=args.ls1_cap,
        workers=args.threads,
        segment_size=args.segment_size,
        checkpoint_dir=args.checkpoint_dir or Path("run"),
        fixture=args.fixture,
        full_ledger=args.full_ledger,
        resume=args.resume,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep, res = run_pipeline(cfg)
    sys.stdout.write(rep.render())
    for c in res:
        if c.status is not Status.EXCLUDED:
            print(f"{c.status.value} {c.u} {c.factorization}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _cap(text: str) -> int | None:
    return None if text.lower() == "none" else int(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="barkerpairs", description="Wieferich-pair graph search for admissible Barker and CHM lengths.")
    p.add_argument("--quiet", action="store_true", help="only warnings on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *flags):
        sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.BARKER.value)
        if "u" in flags:
            sp.add_argument("--max-u", type=_bound)
            sp.add_argument("--max-prime", type=_bound)
        if "w" in flags:
            sp.add_argument("--bound-w", type=_bound)
        if "threads" in flags:
            sp.add_argument("--threads", type=int, default=1)
        if "seg" in flags:
            sp.add_argument("--segment-size", type=_bound, default=10**7)
        if "caps" in flags:
            sp.add_argument("--turyn-cap", type=_cap, default=criteria.TURYN_OMEGA_CAP)
            sp.add_argument("--ls1-cap", type=_cap, default=criteria.LS1_OMEGA_CAP)
            sp.add_argument("--full-ledger", action="store_true")
        if "out" in flags:
            sp.add_argument("--out", type=Path, help="write here instead of stdout")

    sp = sub.add_parser("sieve", help="list the mode's primes up to P")
    common(sp, "u", "out")
    sp.set_defaults(func=cmd_sieve)

    sp = sub.add_parser("wieferich", help="all Wieferich pairs with both primes <= P")
    common(sp, "u", "threads", "seg", "out")
    sp.add_argument("--checkpoint-dir", type=Path)
    sp.add_argument("--resume", action="store_true")
    sp.set_defaults(func=cmd_wieferich)

    sp = sub.add_parser("graph", help="build the prime graph from a pairs file, or load a fixture")
    common(sp, "u", "out")
    sp.add_argument("--pairs", type=Path)
    sp.add_argument("--fixture", type=_fixture)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("cycles", help="elementary cycles with vertex product <= W")
    common(sp, "u", "w", "out")
    sp.add_argument("--graph", type=Path, required=True)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("augment", help="candidate values of u from augmented cycles")
    common(sp, "u", "w", "out")
    sp.add_argument("--graph", type=Path, required=True)
    sp.add_argument("--cycles", type=Path)
    sp.set_defaults(func=cmd_augment)

    sp = sub.add_parser("screen", help="apply the exclusion tests")
    common(sp, "threads", "caps", "out")
    sp.add_argument("--candidates", type=Path)
    sp.add_argument("--u", action="append", help="a value of u (digits or p^e*q form); repeatable")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("barker-verify", help="exhaustive Barker search for small lengths")
    sp.add_argument("--max-length", type=int, default=16)
    sp.set_defaults(func=cmd_barker_verify)

    sp = sub.add_parser("pipeline", help="run every stage, resuming from the checkpoint directory")
    common(sp, "u", "w", "threads", "seg", "caps")
    sp.add_argument("--checkpoint-dir", type=Path)
    sp.add_argument("--fixture", type=_fixture, help="graph file replacing the search stages ('builtin' for the shipped one)")
    sp.add_argument("--resume", action="store_true")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("report", help="per-Omega summary table of a screened candidates file")
    sp.add_argument("candidates", type=Path)
    sp.add_argument("--mode", choices=[m.value for m in Mode])
    sp.add_argument("--out", type=Path)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"barkerpairs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigMismatch, CheckpointMismatch) as exc:
        print(f"barkerpairs: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, FactorizationError, OSError) as exc:
        print(f"barkerpairs: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
