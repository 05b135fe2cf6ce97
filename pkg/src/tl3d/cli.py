"""Command-line front end: ``tl3d objects|homs|compose|gram|hasse|check``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import LinComb, compose_h, compose_sh, factor, gram_det, gram_sections, singular_locus
from .checks import SUITES, run_suite
from .diagrams import Diagram, enumerate_homs, group_by_propagating
from .partitions import CompositionError
from .posets import hasse
from .trees import TreeParseError, count_trees, enumerate_trees, tree_from_string

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INTERFACE = 4
EXIT_CHECK = 5


class UsageError(Exception):
    pass


def thread_cap() -> int:
    """Worker cap from ``TL3D_THREADS``; every command currently runs on one thread."""
    raw = os.environ.get("TL3D_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TL3D_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"TL3D_THREADS must be a positive integer, got {raw!r}")
    return n


def _emit(args, text: str, stem: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        ext = {"text": "txt", "json": "json", "dot": "dot"}[args.format]
        (out / f"{stem}.{ext}").write_text(text)
    sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _tree(text: str):
    return tree_from_string(text)


def cmd_objects(args) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    levels = [(n, enumerate_trees(n)) for n in range(args.n + 1)]
    if args.format == "json":
        data = [{"loops": n, "count": count_trees(n), "trees": [t.brackets for t in ts]} for n, ts in levels]
        _emit(args, _dumps(data), "objects")
        return EXIT_OK
    lines = [f"counts: {', '.join(str(count_trees(n)) for n, _ in levels)}"]
    for n, ts in levels:
        lines.append(f"L_{n} = {len(ts)}: {' '.join(map(str, ts))}")
    _emit(args, "\n".join(lines) + "\n", "objects")
    return EXIT_OK


def cmd_homs(args) -> int:
    F, Fp = _tree(args.source), _tree(args.target)
    homs = enumerate_homs(F, Fp)
    groups = group_by_propagating(homs)
    if args.format == "json":
        data = {
            "source": F.brackets,
            "target": Fp.brackets,
            "count": len(homs),
            "groups": {str(n): [d.to_json() for d in ds] for n, ds in groups.items()},
        }
        _emit(args, _dumps(data), "homs")
        return EXIT_OK
    lines = [f"hom[{F}, {Fp}]: {len(homs)} diagrams"]
    for n, ds in groups.items():
        lines.append(f"propagating {n}: {len(ds)}")
        lines.extend(f"  {d.partition}" for d in ds)
    _emit(args, "\n".join(lines) + "\n", "homs")
    return EXIT_OK


def _load_diagram(path: str) -> Diagram:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if isinstance(data, dict) and "diagram" in data:
        data = data["diagram"]
    try:
        return Diagram.from_json(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a diagram ({exc})") from None


def cmd_compose(args) -> int:
    A, B = _load_diagram(args.file_a), _load_diagram(args.file_b)
    if args.mode == "sh":
        t = compose_sh(A, B)
        result = LinComb.of(t.diagram, t.coefficient)
    else:
        result = compose_h(A, B)
    if args.format == "json":
        data = {"source": result.source.brackets, "target": result.target.brackets, "terms": result.to_json()}
        _emit(args, _dumps(data), "compose")
    else:
        _emit(args, f"{result}\n", "compose")
    return EXIT_OK


def cmd_gram(args) -> int:
    F = _tree(args.source)
    sections = gram_sections(F)
    dets = {}
    for M in sections:
        if not M.flagged:
            dets[M.section] = gram_det(M)
    usable = [d for d in dets.values()]
    locus = singular_locus(usable) if all(usable) else None
    if args.format == "json":
        data = {
            "source": F.brackets,
            "sections": [
                {
                    **M.to_json(),
                    "determinant": str(dets[M.section]) if M.section in dets else None,
                }
                for M in sections
            ],
            "singular_locus": str(locus) if locus is not None else None,
        }
        _emit(args, _dumps(data), "gram")
        return EXIT_OK
    lines = [f"Gram sections of {F}"]
    for M in sections:
        noun = "half-diagram" if len(M) == 1 else "half-diagrams"
        lines.append(f"section {M.section}: {len(M)} {noun}")
        lines.extend(f"  h{i + 1} = {h.partition}" for i, h in enumerate(M.basis))
        width = max(len(str(c)) for row in M.entries for c in row)
        for row in M.entries:
            lines.append("  [ " + "  ".join(str(c).rjust(width) for c in row) + " ]")
        if M.flagged:
            cells = ", ".join(f"({i + 1},{j + 1})" for i, j in sorted(M.flagged))
            lines.append(f"  flagged: pairings {cells} give a nontrivial permutation; determinant not taken")
            continue
        det = dets[M.section]
        lines.append(f"  det = {det}")
        if det:
            facs = " * ".join(f"({f})" + (f"^{m}" if m > 1 else "") for f, m in factor(det)) or "unit"
            lines.append(f"  factors: {facs}")
    skipped = [str(M.section) for M in sections if M.flagged]
    if locus is None:
        lines.append("singular locus: everywhere (a determinant vanishes)")
    elif not any(a or b for a, b in locus.terms):
        lines.append("singular locus: empty (no determinant vanishes anywhere)")
    else:
        lines.append(f"singular locus: {locus} = 0")
    if skipped:
        lines.append(f"  (sections {', '.join(skipped)} excluded: flagged)")
    _emit(args, "\n".join(lines) + "\n", "gram")
    return EXIT_OK


def cmd_hasse(args) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    H = hasse(args.n)
    if args.format == "dot":
        _emit(args, H.to_dot(), "hasse")
    elif args.format == "json":
        _emit(args, _dumps(H.to_json()), "hasse")
    else:
        lines = [f"{len(H.nodes)} nodes, {len(H.covers)} covers"]
        lines.extend(f"{r.lower} -> {r.upper}  ({r.move})" for r in H.relations)
        _emit(args, "\n".join(lines) + "\n", "hasse")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    count = args.max if args.max is not None else 1000
    r = run_suite(args.suite, seed=args.seed, random_count=count)
    if args.format == "json":
        data = {"suite": r.name, "passed": r.passed, "cases": r.cases, "failures": r.failures, "notes": r.notes}
        _emit(args, _dumps(data), f"check-{r.name}")
    else:
        lines = [r.summary(), *(f"  note: {n}" for n in r.notes), *(f"  fail: {f}" for f in r.failures)]
        _emit(args, "\n".join(lines) + "\n", f"check-{r.name}")
    return EXIT_OK if r.passed else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--out", metavar="DIR", help="also write the output into DIR")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--max", type=int, metavar="N", help="bound for randomised checks")

    p = argparse.ArgumentParser(prog="tl3d", description="Diagram categories of surfaces between loop configurations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("objects", parents=[common], help="list rooted trees by loop count")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_objects)

    s = sub.add_parser("homs", parents=[common], help="enumerate a hom set")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_homs)

    s = sub.add_parser("compose", parents=[common], help="compose two diagrams stored as JSON")
    s.add_argument("file_a", metavar="A.json", help="lower diagram")
    s.add_argument("file_b", metavar="B.json", help="upper diagram")
    s.add_argument("--mode", choices=("sh", "h"), default="sh")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("gram", parents=[common], help="Gram matrices and singular locus")
    s.add_argument("source")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("hasse", parents=[common], help="Hasse diagram of the sub/fold order")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_hasse)

    s = sub.add_parser("check", parents=[common], help="run a named invariant suite")
    s.add_argument("suite")
    s.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.max is not None and args.max < 1:
        print("tl3d: --max must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        thread_cap()
        return args.func(args)
    except UsageError as exc:
        print(f"tl3d: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompositionError as exc:
        print(f"tl3d: interface mismatch: {exc}", file=sys.stderr)
        return EXIT_INTERFACE
    except TreeParseError as exc:
        print(f"tl3d: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"tl3d: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
