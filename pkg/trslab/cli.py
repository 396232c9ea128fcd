"""Command line: field, trs-info, scan, charsum, verify, witness, report.

Exit codes: 0 when every check passes (or is vacuous / sampled-consistent),
1 when any check fails, 2 on invalid arguments or configuration.
"""

import argparse
import json
import logging
import sys

import numpy as np

from trslab import __version__
from trslab.config import load_config, settings
from trslab.models import RunConfig
from trslab.services.char_sums import identity_rows
from trslab.services.code_lab import BudgetExceeded, coset_leaders, covering_radius, is_mds, min_distance
from trslab.services.deephole_service import family_word, is_deep_hole_syndrome
from trslab.services.field_service import FieldSpec, make_field, save_descriptor, split_prime_power
from trslab.services.trs_core import TrsParams, build_generator, build_parity_check, trs_code
from trslab.services.witness_service import (
    SYMMETRIC_KINDS,
    complete_witness,
    witness_cubic_line,
    witness_even_leading,
    witness_even_pair,
    witness_generic,
    witness_geometric,
    witness_leading_only,
    witness_sum_target,
    witness_symmetric,
    witness_tail_pair,
)
from trslab.storage import fields_dir, write_coset_csv
from trslab.tasks.runner import resolve_eta, run, shutdown_executor

logger = logging.getLogger(__name__)

WITNESS_KINDS = (
    "sum-target",
    "leading-only",
    "geometric",
    "tail-pair",
    "cubic-line",
    "symmetric",
    "generic",
    "even-pair",
    "even-leading",
)


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_field_args(p: argparse.ArgumentParser):
    p.add_argument("--q", type=int, help="field order p^m")
    p.add_argument("--p", type=int, help="field characteristic")
    p.add_argument("--m", type=int, default=1, help="extension degree (with --p)")


def _add_code_args(p: argparse.ArgumentParser):
    _add_field_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, help="twist position (default k - 1)")
    p.add_argument("--eta", default="1", help='"1", "xi" or a canonical index')
    p.add_argument("--evaluation", choices=("nonzero", "full"), default="nonzero")
    p.add_argument("--budget", type=int, default=settings.subset_budget, help="subset budget")
    p.add_argument("--coset-budget", type=int, default=settings.coset_budget, help="coset table budget")


def _field(args) -> FieldSpec:
    if args.q is not None:
        return make_field(*split_prime_power(args.q))
    if args.p is not None:
        return make_field(args.p, args.m)
    raise ValueError("give --q or --p/--m")


def _params(args, field: FieldSpec) -> TrsParams:
    l = args.k - 1 if args.l is None else args.l
    return TrsParams.on(field, args.evaluation, args.k, l, resolve_eta(field, args.eta))


def _print(obj):
    print(json.dumps(obj, indent=2))


# ============================================================
# Subcommands
# ============================================================


def cmd_field(args) -> int:
    field = _field(args)
    if args.save:
        path = save_descriptor(field, fields_dir())
        logger.info("saved descriptor to %s", path)
    print(field.descriptor().model_dump_json(indent=2))
    return 0


def cmd_trs_info(args) -> int:
    field = _field(args)
    params = _params(args, field)
    code = trs_code(params)
    info = {
        **params.describe(),
        "A": list(params.A),
        "sigma": params.sigma,
        "generator": build_generator(params).tolist(),
        "parity_check": build_parity_check(params).tolist(),
        "min_distance": None,
        "mds": None,
        "covering_radius": None,
    }
    try:
        info["min_distance"] = min_distance(code, settings.codeword_budget)
        info["mds"] = is_mds(code, settings.codeword_budget)
    except BudgetExceeded as e:
        logger.warning("minimum distance skipped: %s", e)
    try:
        family = code.syndrome(family_word(params, 1))
        info["covering_radius"] = covering_radius(code, [family], args.coset_budget).radius
    except BudgetExceeded as e:
        logger.warning("covering radius skipped: %s", e)
    _print(info)
    return 0


def cmd_scan(args) -> int:
    field = _field(args)
    params = _params(args, field)
    if args.syndrome is not None:
        verdict = is_deep_hole_syndrome(params, args.syndrome, args.budget)
        print(verdict.model_dump_json(indent=2))
        return 0
    table = coset_leaders(trs_code(params), args.coset_budget)
    count = write_coset_csv(table.rows(), sys.stdout)
    logger.info("%d syndromes, %d deep, covering radius %d", count, int(table.deep_mask().sum()), table.covering_radius)
    return 0


def cmd_charsum(args) -> int:
    field = _field(args)
    rng = np.random.default_rng(args.seed)
    failed = 0
    for row in identity_rows(field, rng, limit=args.limit):
        failed += not row.passed
        print(row.model_dump_json(by_alias=True))
    return 1 if failed else 0


def cmd_witness(args) -> int:
    field = _field(args)
    kind = args.kind
    if kind == "sum-target":
        _print({"subset": witness_sum_target(field, args.r, resolve_eta(field, args.eta))})
        return 0
    if kind == "symmetric":
        subset, method = witness_symmetric(field, args.symmetric_kind, args.i, args.j)
        _print({"subset": subset, "method": method})
        return 0

    if args.k is None:
        raise ValueError(f"witness {kind} needs --k")
    params = TrsParams.punctured(field, args.k, resolve_eta(field, args.eta))
    a = args.syndrome
    if kind == "cubic-line":
        _print({"subset": witness_cubic_line(params, args.b)})
    elif kind == "even-pair":
        _print({"subset": witness_even_pair(params, args.b)})
    elif kind == "even-leading":
        a0, a1 = (a or [1, 0])[:2]
        _print({"subset": witness_even_leading(params, a0, a1)})
    elif a is None:
        raise ValueError(f"witness {kind} needs --syndrome")
    elif kind == "leading-only":
        _print({"subset": witness_leading_only(params, a)})
    elif kind == "geometric":
        _print({"subset": witness_geometric(params, a)})
    elif kind == "tail-pair":
        _print({"subset": witness_tail_pair(params, a)})
    else:
        prefix, gamma = witness_generic(params, a)
        scaled = [field.mul(gamma, x) for x in prefix]
        subset, count = complete_witness(params, a, scaled)
        _print({"prefix": prefix, "gamma": gamma, "subset": subset, "surface_zeros": count})
    return 0


def _finish(report) -> int:
    print(report.summary.model_dump_json(indent=2))
    return 0 if report.summary.ok else 1


def cmd_verify(args) -> int:
    if args.q is not None:
        p, m = split_prime_power(args.q)
    elif args.p is not None:
        p, m = args.p, args.m
    else:
        raise ValueError("give --q or --p/--m")
    config = RunConfig(
        p=p,
        m=m,
        checks=[args.check],
        k=args.k,
        l=args.l,
        eta=args.eta.split(","),
        evaluation=args.evaluation.split(","),
        mode=args.mode,
        seed=args.seed,
        subset_budget=args.budget,
        coset_budget=args.coset_budget,
        codeword_budget=settings.codeword_budget,
        sample_count=args.samples,
        output=args.output,
        csv=args.csv,
        workers=args.workers or settings.workers,
    )
    return _finish(run(config))


def cmd_report(args) -> int:
    return _finish(run(load_config(args.config)))


# ============================================================
# Parser and entry point
# ============================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trslab", description="Deep holes of twisted Reed-Solomon codes")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="describe the canonical GF(q)")
    _add_field_args(p)
    p.add_argument("--save", action="store_true", help="write the descriptor under data/fields")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("trs-info", help="generator and parity-check matrices")
    _add_code_args(p)
    p.set_defaults(func=cmd_trs_info)

    p = sub.add_parser("scan", help="classify one syndrome, or print the coset table as CSV")
    _add_code_args(p)
    p.add_argument("--syndrome", type=_csv_ints)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("charsum", help="character-sum identity rows")
    _add_field_args(p)
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--limit", type=int, default=4096)
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("verify", help="run one check over a parameter grid")
    p.add_argument("check")
    _add_field_args(p)
    p.add_argument("--k", type=_csv_ints, help="dimensions (default: all)")
    p.add_argument("--l", type=_csv_ints, help="twist positions (default: all, or k - 1 for checks that need it)")
    p.add_argument("--eta", default="1")
    p.add_argument("--evaluation", default="nonzero")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--budget", type=int, default=settings.subset_budget)
    p.add_argument("--coset-budget", type=int, default=settings.coset_budget)
    p.add_argument("--samples", type=int, default=settings.sample_count)
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--workers", type=int)
    p.add_argument("--output")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="construct a rejecting subset")
    p.add_argument("kind", choices=WITNESS_KINDS)
    _add_field_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--eta", default="1")
    p.add_argument("--syndrome", type=_csv_ints)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--i", type=int, default=3)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--symmetric-kind", choices=SYMMETRIC_KINDS, default="linear")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("report", help="run every check named in a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RuntimeError as e:
        logger.error("search failed: %s", e)
        return 1
    finally:
        shutdown_executor()


if __name__ == "__main__":
    sys.exit(main())
