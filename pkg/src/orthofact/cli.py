"""Command-line front end.

Subcommands:
  build        construct a group and print its order (and an orbit size)
  claim run    run a claim catalog and print/write verification reports
  ingest       check a generator file (parse, checksum, invertibility, order)
  report       re-render a stored JSON report

Exit code 0 means: no errors, and every claim verdict matched its
expectation (refutations that were expected count as matches).
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import VerifierEnv, load_desk_catalog, parse_claims_text
from .verifier import run_claim_suite
from . import genfile


FAMILY_SUGAR = {
    "T": "tfull",
    "R": "rgroup",
    "RT": "rt",
    "SU": "su",
    "Sp": "spint",
    "spin7": "spin n=7",
    "spin9": "spin n=9",
    "G2": "g2sp6",
    "subfield-minus": "subfieldminus",
}


def _env_from_args(args):
    max_points = None
    if getattr(args, "budget_gb", None):
        # rough accounting: ~100 bytes per stored orbit point
        max_points = int(args.budget_gb * 10 ** 7)
    return VerifierEnv(data_dir=getattr(args, "data_dir", None) or None,
                       seed=getattr(args, "seed", 0) or 0,
                       max_points=max_points)


def cmd_build(args):
    env = _env_from_args(args)
    if args.family:
        ctor = FAMILY_SUGAR.get(args.family, args.family)
        if args.family in ("G2",):
            zspec = f"sp6 q={args.q}"
        else:
            zspec = f"omega_plus m={args.m} q={args.q}"
    else:
        ctor = args.x
        zspec = args.z
    world = env.world(zspec)
    handle, _ = env.group(ctor, world)
    print(f"ambient {zspec}: order {world.order()}")
    print(f"group [{ctor}]: order {handle.order()}")
    if args.orbit:
        vec = world.vector(args.orbit)
        print(f"orbit of {args.orbit}: {len(handle.orbit(vec))}")
    return 0


def cmd_claim_run(args):
    env = _env_from_args(args)
    if args.catalog:
        with open(args.catalog, "r", encoding="utf-8") as fh:
            claims = parse_claims_text(fh.read())
    else:
        claims = load_desk_catalog()
    reports, summary = run_claim_suite(claims, env, id_filter=args.filter)
    payload = {
        "summary": summary,
        "seed": env.seed,
        "reports": [r.to_dict() for r in reports],
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _print_table(reports, summary)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    bad = summary["error"] + summary["mismatched"]
    return 1 if bad else 0


def _print_table(reports, summary):
    header = f"{'claim':28s} {'verdict':10s} {'ok':3s} {'|X|':>16s} " \
             f"{'|X^Y|':>12s} {'index':>10s} {'sec':>7s}"
    print(header)
    print("-" * len(header))
    for r in reports:
        print(f"{r.claim_id:28s} {r.verdict:10s} {'y' if r.ok else 'N':3s} "
              f"{r.x_order if r.x_order is not None else '-':>16} "
              f"{r.intersection if r.intersection is not None else '-':>12} "
              f"{r.index if r.index is not None else '-':>10} "
              f"{r.seconds:7.1f}")
    print("-" * len(header))
    print(f"confirmed: {summary['confirmed']}, refuted: {summary['refuted']}, "
          f"skipped: {summary['skipped']}, errors: {summary['error']}, "
          f"mismatched: {summary['mismatched']}")


def cmd_ingest(args):
    try:
        h = genfile.ingest(args.file)
    except genfile.GeneratorFileError as exc:
        print(f"REJECTED: {exc}")
        return 1
    print(f"ok: {args.file}")
    print(f"  field GF({h.field.q}), dimension {h.dim}, "
          f"{len(h.gens)} generators, order {h.order()}")
    return 0


def cmd_report(args):
    with open(args.infile, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    rows = payload["reports"]
    print(f"{'claim':28s} {'verdict':10s} {'ok':3s} {'|X^Y|':>12s} {'sec':>7s}")
    for r in rows:
        inter = r.get("intersection")
        print(f"{r['claim']:28s} {r['verdict']:10s} "
              f"{'y' if r['ok'] else 'N':3s} "
              f"{inter if inter is not None else '-':>12} "
              f"{r['seconds']:7.1f}")
    s = payload["summary"]
    print(f"confirmed: {s['confirmed']}, refuted: {s['refuted']}, "
          f"skipped: {s['skipped']}, errors: {s['error']}, "
          f"mismatched: {s['mismatched']}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="orthofact",
        description="exact construction and verification of plus-type "
                    "orthogonal group factorizations")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_build = sub.add_parser("build", help="construct a group, print orders")
    p_build.add_argument("--family", help="shorthand: T, R, RT, SU, Sp, "
                                          "spin7, spin9, G2, subfield-minus")
    p_build.add_argument("--m", type=int, default=4)
    p_build.add_argument("--q", type=int, default=2)
    p_build.add_argument("--z", help="explicit ambient spec")
    p_build.add_argument("--x", help="explicit constructor spec")
    p_build.add_argument("--orbit", help="print the orbit size of this vector")
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--budget-gb", type=float, dest="budget_gb")
    p_build.set_defaults(fn=cmd_build)

    p_claim = sub.add_parser("claim", help="claim operations")
    claim_sub = p_claim.add_subparsers(dest="claim_cmd", required=True)
    p_run = claim_sub.add_parser("run", help="run a claim catalog")
    p_run.add_argument("--catalog", help="claims file (default: shipped)")
    p_run.add_argument("--filter", help="id glob, e.g. 'r01.*'")
    p_run.add_argument("--budget-gb", type=float, dest="budget_gb")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--data-dir", dest="data_dir",
                       help="generator file directory")
    p_run.add_argument("--format", choices=("table", "json"), default="table")
    p_run.add_argument("--out", help="write the JSON report here")
    p_run.set_defaults(fn=cmd_claim_run)

    p_ing = sub.add_parser("ingest", help="check a generator file")
    p_ing.add_argument("file")
    p_ing.set_defaults(fn=cmd_ingest)

    p_rep = sub.add_parser("report", help="re-render a stored report")
    p_rep.add_argument("--in", dest="infile", required=True)
    p_rep.add_argument("--format", choices=("table", "json"), default="table")
    p_rep.set_defaults(fn=cmd_report)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
