"""Command-line harness.

Subcommands: gen, pairs, bench, build_seq, validate, dump.  Exit codes:
0 on success, 1 when a property or validation check fails, 2 for usage
errors.  All output is deterministic given the inputs; CSV files are
comma-separated with a header row and LF line endings (the bench CSV's
trailing wall_time column is the one nondeterministic field).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path
from time import perf_counter

from avlrot.builder import build_from_plan, insertion_sequence
from avlrot.core import Tree, serialize
from avlrot.errors import AvlError, NotExpensiveError
from avlrot.expensive import (
    BPolicy,
    EType,
    classify_expensive,
    delete_reinsert_pair,
    gen_expensive,
    run_pairs,
)

PAIRS_HEADER = [
    "pair_index",
    "del_singles",
    "del_doubles",
    "del_demotions",
    "ins_promotions",
    "rank_after_delete",
    "etype_after",
    "is_member",
]

BENCH_HEADER = [
    "k",
    "n",
    "build_insertions",
    "build_rotations",
    "total_pair_rotations",
    "total_pair_promotions",
    "rotations_per_delete",
    "wall_time",
]


@dataclass(frozen=True)
class BenchRow:
    rank: int
    nodes: int
    build_insertions: int
    build_rotations: int
    total_pair_rotations: int
    total_pair_promotions: int
    rotations_per_delete: int
    wall_time: float


def run_bench(max_rank: int) -> list[BenchRow]:
    """One row per even rank: promotion-only build, then n pairs.

    Raises VerificationError (exit 1 in the CLI) unless the build uses
    zero rotations and the pairs cost exactly n * k/2 rotations total.
    """
    from avlrot.errors import VerificationError

    rows = []
    for k in range(0, max_rank + 1, 2):
        t0 = perf_counter()
        target = gen_expensive(k, EType.L, BPolicy.MINIMAL)
        plan = insertion_sequence(target)
        tree, build = build_from_plan(plan)
        if build.rotations_total or build.demotions:
            raise VerificationError(
                f"rank {k}: rebuild used rotations or demotions: {build}"
            )
        if not tree.structurally_equal(target):
            raise VerificationError(f"rank {k}: rebuild missed the target")
        n = len(tree)
        rot = prom = 0
        for _ in range(n):
            rep = delete_reinsert_pair(tree, classify=False)
            rot += (
                rep.delete_counters.rotations_total
                + rep.insert_counters.rotations_total
            )
            prom += rep.delete_counters.promotions + rep.insert_counters.promotions
        if rot != n * (k // 2):
            raise VerificationError(
                f"rank {k}: pair rotations {rot}, expected {n * (k // 2)}"
            )
        rows.append(
            BenchRow(
                rank=k,
                nodes=n,
                build_insertions=len(plan.sequence),
                build_rotations=build.rotations_total,
                total_pair_rotations=rot,
                total_pair_promotions=prom,
                rotations_per_delete=k // 2,
                wall_time=perf_counter() - t0,
            )
        )
    return rows


def _even_rank(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("rank must be >= 0")
    if value % 2:
        raise argparse.ArgumentTypeError("rank must be even")
    return value


def _read_tree(path: str, validate: bool = True) -> Tree:
    text = Path(path).read_text().removesuffix("\n")
    return Tree.from_text(text, validate=validate)


def _write_text(path, text: str) -> None:
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _write_csv(path, header, rows) -> None:
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_gen(args) -> int:
    tree = gen_expensive(args.rank, EType(args.etype), BPolicy(args.b_policy))
    report = tree.validate()
    if not report.ok:
        print(f"error: generated tree failed validation\n{report}", file=sys.stderr)
        return 1
    _write_text(args.out, serialize(tree))
    return 0


def _cmd_pairs(args) -> int:
    tree = _read_tree(args.tree)
    if not classify_expensive(tree).member:
        print("error: input tree is not in E", file=sys.stderr)
        return 1
    reports = run_pairs(tree, args.count, verify=args.verify)
    rows = []
    for i, r in enumerate(reports, start=1):
        rows.append(
            [
                i,
                r.delete_counters.single_rotations,
                r.delete_counters.double_rotations,
                r.delete_counters.demotions,
                r.insert_counters.promotions,
                r.rank_after_delete,
                r.etype_after.value if r.etype_after is not None else "",
                "true" if r.still_member else "false",
            ]
        )
    _write_csv(args.csv, PAIRS_HEADER, rows)
    return 0


def _cmd_bench(args) -> int:
    rows = run_bench(args.max_rank)
    _write_csv(
        args.csv,
        BENCH_HEADER,
        [
            [
                r.rank,
                r.nodes,
                r.build_insertions,
                r.build_rotations,
                r.total_pair_rotations,
                r.total_pair_promotions,
                r.rotations_per_delete,
                f"{r.wall_time:.6f}",
            ]
            for r in rows
        ],
    )
    return 0


def _cmd_build_seq(args) -> int:
    tree = _read_tree(args.tree)
    plan = insertion_sequence(tree)
    for level in plan.levels():
        print(" ".join(str(k) for k in level))
    rebuilt, counters = build_from_plan(plan)
    if counters.rotations_total or counters.demotions:
        print(f"error: replay used rotations or demotions: {counters}", file=sys.stderr)
        return 1
    if not rebuilt.structurally_equal(tree):
        print("error: replay did not reproduce the input tree", file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args) -> int:
    tree = _read_tree(args.tree, validate=False)
    report = tree.validate()
    print(report)
    return 0 if report.ok else 1


def _cmd_dump(args) -> int:
    tree = _read_tree(args.tree)
    if args.format == "dot":
        sys.stdout.write(tree.to_dot())
    else:
        print(serialize(tree))
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avlrot",
        description="Adversarial rotation-cost workloads on ranked AVL trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a member of the expensive family")
    p.add_argument("--rank", type=_even_rank, required=True)
    p.add_argument("--etype", choices=["L", "R"], default="L")
    p.add_argument("--b-policy", choices=["minimal", "perfect"], default="minimal")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("pairs", help="drive delete/reinsert pairs, emit CSV")
    p.add_argument("tree", metavar="TREE_FILE")
    p.add_argument("--count", type=int, required=True, metavar="M")
    p.add_argument("--csv", metavar="PATH", help="output CSV (default stdout)")
    p.add_argument("--verify", action="store_true", help="assert the exact expected costs")
    p.set_defaults(func=_cmd_pairs)

    p = sub.add_parser("bench", help="rotation totals per rank, CSV")
    p.add_argument("--max-rank", type=_even_rank, required=True)
    p.add_argument("--csv", metavar="PATH", help="output CSV (default stdout)")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("build_seq", help="print and replay the promotion-only rebuild plan")
    p.add_argument("tree", metavar="TREE_FILE")
    p.set_defaults(func=_cmd_build_seq)

    p = sub.add_parser("validate", help="check a tree file, print the report")
    p.add_argument("tree", metavar="TREE_FILE")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("dump", help="re-emit a tree file as text or DOT")
    p.add_argument("tree", metavar="TREE_FILE")
    p.add_argument("--format", choices=["text", "dot"], default="text")
    p.set_defaults(func=_cmd_dump)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except NotExpensiveError as exc:
        print(f"error: not in E: {exc}", file=sys.stderr)
        return 1
    except AvlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
