"""Command-line front end.

Subcommands: simulate, recover-abstract, recover-concrete, analyze,
verify.  Reports are JSON on standard output; exit codes follow a fixed
discipline: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical/genericity error (with the error name in the report).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import OrbitsymError
from .fileio import FileFormatError, read_group, read_orbits, write_group, write_orbits
from .gramgraph import build_gram_graph, gram_invariants
from .groupcore import (
    cayley_from_gram,
    group_invariants,
    identify_small_group,
    table_from_perm_group,
)
from .numerics import FieldTag, TolerancePolicy
from .pointsym import union_action
from .reconstruct import recover_concrete_group, verify_group
from .reptheory import orbit_threshold
from .simulate import GroupSpec, build_group, sample_orbits

_CLI_FAMILIES = (
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric",
    "sign",
    "paper_g1",
    "paper_g2",
    "regular",
)


def _add_tolerance_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--tol-label",
        type=float,
        default=None,
        help="absolute label tolerance (default: 1e-9 x largest |label|)",
    )
    parser.add_argument("--tol-rank", type=float, default=1e-10)
    parser.add_argument("--gap-factor", type=float, default=10.0)
    parser.add_argument("--tol-isometry", type=float, default=1e-8)


def _policy(args) -> TolerancePolicy:
    try:
        return TolerancePolicy(
            label_tol=args.tol_label,
            rank_tol=args.tol_rank,
            gap_factor=args.gap_factor,
            isometry_tol=args.tol_isometry,
        )
    except ValueError as exc:
        raise FileFormatError(str(exc))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitsym",
        description="Recover a hidden finite isometry group from generic orbits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="build a group and sample orbits")
    sim.add_argument("--family", required=True, choices=_CLI_FAMILIES)
    sim.add_argument("--n", type=int, default=None, help="cyclic/dihedral/symmetric size")
    sim.add_argument("--field", default="real", choices=["real", "complex"])
    sim.add_argument("--dim", type=int, default=None, help="ambient dimension")
    sim.add_argument(
        "--exponents",
        default=None,
        help="comma-separated cyclic exponents, one per coordinate/block",
    )
    sim.add_argument("--of", default=None, choices=_CLI_FAMILIES[:-1],
                     help="inner family for --family regular")
    sim.add_argument("--conjugate-seed", type=int, default=None)
    sim.add_argument("--k", type=int, default=1, help="number of orbits")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True,
                     help="output prefix: writes <out>.orbits.json and <out>.group.json")
    sim.add_argument("--figures", default=None, help="directory for PNG figures")
    _add_tolerance_flags(sim)
    sim.set_defaults(func=_cmd_simulate)

    rec_a = sub.add_parser("recover-abstract", help="recover the group up to isomorphism")
    rec_a.add_argument("orbits", help="orbit file (JSON)")
    rec_a.add_argument("--allow-insufficient", action="store_true")
    rec_a.add_argument("--figures", default=None)
    _add_tolerance_flags(rec_a)
    rec_a.set_defaults(func=_cmd_recover_abstract)

    rec_c = sub.add_parser("recover-concrete", help="recover the isometry matrices")
    rec_c.add_argument("orbits", help="orbit file (JSON)")
    rec_c.add_argument("--out", required=True, help="recovered group file")
    rec_c.add_argument("--allow-insufficient", action="store_true")
    rec_c.add_argument("--figures", default=None)
    _add_tolerance_flags(rec_c)
    rec_c.set_defaults(func=_cmd_recover_concrete)

    ana = sub.add_parser("analyze", help="orbit-count threshold of a known group")
    ana.add_argument("group", help="group file (JSON)")
    ana.add_argument("--figures", default=None)
    _add_tolerance_flags(ana)
    ana.set_defaults(func=_cmd_analyze)

    ver = sub.add_parser("verify", help="check a group file against an orbit file")
    ver.add_argument("group", help="group file (JSON)")
    ver.add_argument("orbits", help="orbit file (JSON)")
    _add_tolerance_flags(ver)
    ver.set_defaults(func=_cmd_verify)

    return parser


def _print_report(report: dict):
    print(json.dumps(report, indent=2))


def _figures_dir(args) -> Path | None:
    if getattr(args, "figures", None) is None:
        return None
    path = Path(args.figures)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _spec_from_args(args, parser_error) -> GroupSpec:
    field = FieldTag.parse(args.field)
    exponents = None
    if args.exponents:
        exponents = tuple(int(x) for x in args.exponents.split(","))
    try:
        if args.family == "regular":
            if args.of is None:
                parser_error("--family regular requires --of")
            inner = GroupSpec(
                family=args.of,
                field=field,
                dimension=args.dim,
                n=args.n,
                exponents=exponents,
            )
            return GroupSpec(family="regular", field=field, of=inner,
                             conjugate_seed=args.conjugate_seed)
        return GroupSpec(
            family=args.family,
            field=field,
            dimension=args.dim,
            n=args.n,
            exponents=exponents,
            conjugate_seed=args.conjugate_seed,
        )
    except ValueError as exc:
        parser_error(str(exc))


def _cmd_simulate(args, parser: argparse.ArgumentParser) -> int:
    def fail(message):
        parser.error(message)

    if args.k < 1:
        fail("--k must be at least 1")
    spec = _spec_from_args(args, fail)
    try:
        group = build_group(spec)
    except ValueError as exc:
        fail(str(exc))
    policy = _policy(args)
    orbits = sample_orbits(group, args.k, args.seed, policy)

    orbit_path = f"{args.out}.orbits.json"
    group_path = f"{args.out}.group.json"
    write_orbits(orbit_path, group.field, group.dimension, orbits)
    write_group(group_path, group, names=[f"g{i}" for i in range(group.order)])

    report = {
        "family": args.family,
        "field": group.field.value,
        "dimension": group.dimension,
        "order": group.order,
        "k": args.k,
        "seed": args.seed,
        "orbit_file": orbit_path,
        "group_file": group_path,
    }
    figures = _figures_dir(args)
    if figures is not None:
        from . import viz

        report["figures"] = [
            viz.save_orbit_scatter(orbits, group.field, figures / "orbits.png"),
            viz.save_gram_heatmap(
                build_gram_graph(np.vstack(orbits), policy), figures / "gram.png"
            ),
        ]
    _print_report(report)
    return 0


def _recover_table(data, policy, allow_insufficient):
    """Abstract recovery route: Cayley reading for one complex orbit,
    filtered union action otherwise."""
    if data.field is FieldTag.COMPLEX and len(data.orbits) == 1:
        graph = build_gram_graph(data.orbits[0], policy, data.field)
        return cayley_from_gram(graph), "cayley"
    pg = union_action(data.orbits, policy, allow_insufficient, data.field)
    return table_from_perm_group(pg), "union"


def _cmd_recover_abstract(args, parser) -> int:
    data = read_orbits(args.orbits)
    policy = _policy(args)
    table, route = _recover_table(data, policy, args.allow_insufficient)
    invariants = group_invariants(table)
    graphs = [build_gram_graph(o, policy, data.field) for o in data.orbits]
    gram_info = []
    for graph in graphs:
        info = gram_invariants(graph)
        gram_info.append(
            {
                "vertices": info.vertices,
                "labels": info.labels,
                "loop_class": info.loop_class,
            }
        )
    report = {
        "order": table.order,
        "identified": identify_small_group(table),
        "route": route,
        "identity": int(table.identity),
        "table": [[int(x) for x in row] for row in table.product],
        "invariants": {
            "abelian": invariants.abelian,
            "center_order": invariants.center_order,
            "element_order_histogram": dict(
                (str(k), v) for k, v in invariants.order_histogram
            ),
            "abelianization": list(invariants.abelianization),
        },
        "gram": gram_info,
    }
    figures = _figures_dir(args)
    if figures is not None:
        from . import viz

        paths = [viz.save_orbit_scatter(data.orbits, data.field, figures / "orbits.png")]
        for idx, graph in enumerate(graphs):
            paths.append(
                viz.save_gram_heatmap(
                    graph, figures / f"gram-orbit{idx}.png", f"orbit {idx}"
                )
            )
        report["figures"] = paths
    _print_report(report)
    return 0


def _cmd_recover_concrete(args, parser) -> int:
    data = read_orbits(args.orbits)
    policy = _policy(args)
    group, recovery = recover_concrete_group(
        data.orbits, policy, args.allow_insufficient, data.field
    )
    write_group(args.out, group)
    report = {
        "order": group.order,
        "identified": identify_small_group(group.table),
        "dimension": group.dimension,
        "field": group.field.value,
        "span_rank": recovery.span_rank,
        "codimension": recovery.codimension,
        "r": recovery.r_used,
        "ambiguous": recovery.ambiguous,
        "max_point_residual": max(recovery.point_residuals),
        "max_isometry_defect": max(recovery.isometry_defects),
        "closure_defect": recovery.closure_defect,
        "group_file": args.out,
    }
    figures = _figures_dir(args)
    if figures is not None:
        from . import viz

        report["figures"] = [
            viz.save_orbit_scatter(data.orbits, data.field, figures / "orbits.png"),
            viz.save_gram_heatmap(
                build_gram_graph(np.vstack(data.orbits), policy, data.field),
                figures / "gram-union.png",
                "union",
            ),
        ]
    _print_report(report)
    return 0


def _cmd_analyze(args, parser) -> int:
    group = read_group(args.group)
    report_data = orbit_threshold(group)
    report = {
        "field": report_data.field.value,
        "order": group.order,
        "identified": identify_small_group(group.table),
        "r": report_data.r,
        "k_span": report_data.k_span,
        "k_recover": report_data.k_recover,
        "irreps": [
            {
                "name": entry.name,
                "dim": entry.dim,
                "n_V": entry.n_v,
                "n_R": entry.n_reg,
            }
            for entry in report_data.entries
        ],
    }
    figures = _figures_dir(args)
    if figures is not None:
        from . import viz

        report["figures"] = [
            viz.save_threshold_chart(report_data, figures / "threshold.png")
        ]
    _print_report(report)
    return 0


def _cmd_verify(args, parser) -> int:
    group = read_group(args.group)
    data = read_orbits(args.orbits)
    if group.field is not data.field:
        raise FileFormatError(
            f"field mismatch: group is {group.field.value}, orbits are "
            f"{data.field.value}"
        )
    if group.dimension != data.dimension:
        raise FileFormatError(
            f"dimension mismatch: group is {group.dimension}-dimensional, "
            f"orbits are {data.dimension}-dimensional"
        )
    policy = _policy(args)
    result = verify_group(group, data.orbits, policy)
    report = {
        "passed": result.passed,
        "tolerance": result.tolerance,
        "max_isometry_defect": max(result.isometry_defects),
        "closure_defect": result.closure_defect,
        "invariance_defects": list(result.invariance_defects),
    }
    _print_report(report)
    return 0 if result.passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, parser)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code or 0)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrbitsymError as exc:
        _print_report({"error": exc.name, "message": str(exc)})
        return 3


if __name__ == "__main__":
    sys.exit(main())
