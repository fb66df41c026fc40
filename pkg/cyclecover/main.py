# Command-line entry point
# Exit codes: 0 success, 1 a verification failure was reported, 2 input/config error
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from harness import ExperimentConfig, ExperimentHandlers

from . import oracle
from .config import settings
from .core import verify_partition
from .errors import BadSizes, CycleCoverError
from .formats import format_instance, format_partition, read_instance, read_partition
from .instances import amplify, gen_fano_config, gen_mean_instance, gen_random_local, gen_tri_config, gen_triangle_cycle
from .schemas import CyclePartition, EdgeColouring, OracleBudget, PipelineParams, VerifyOptions
from .solvers import r_local_partition, two_local_partition, two_mean_partition

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

COMMANDS_FILE = Path(__file__).resolve().parent.parent / "harness" / "commands.json"


def _command_help() -> Dict[str, str]:
    try:
        catalogue = json.loads(COMMANDS_FILE.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return {}
    return {cmd["name"]: cmd["description"] for cmd in catalogue.get("commands", [])}


# -------------------------------------------------------------
# output helpers
# -------------------------------------------------------------
def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"✓ wrote {path}")
    else:
        sys.stdout.write(text)


def _sizes(tokens: List[str]) -> List[int]:
    try:
        return [int(t) for tok in tokens for t in tok.split(",") if t]
    except ValueError:
        raise BadSizes(f"part sizes must be integers, got {tokens}")


def _budget(args) -> OracleBudget:
    if getattr(args, "oracle_max_n", None) is not None:
        return OracleBudget(max_n=args.oracle_max_n)
    return OracleBudget.default()


def _emit_partition(p: CyclePartition, summary: str, out: Optional[str], trace: Optional[List[str]] = None) -> None:
    text = format_partition(p) + summary + "\n"
    _emit(text, out)
    for line in trace or []:
        sys.stderr.write(line + "\n")


# -------------------------------------------------------------
# 🔥 GEN / AMPLIFY
# -------------------------------------------------------------
def cmd_gen(args) -> int:
    if args.family == "random":
        c = gen_random_local(args.n, args.r, args.s, args.seed)
        notes = [f"random {args.r}-local n={args.n} s={args.s} seed={args.seed}"]
    elif args.family == "tri":
        c, cfg = gen_tri_config(_sizes(args.sizes), args.intra, args.seed)
        notes = [f"tri config V12={list(cfg.v12)} V13={list(cfg.v13)} V23={list(cfg.v23)}"]
    elif args.family == "fano":
        sizes = _sizes(args.sizes)
        c = gen_fano_config(sizes, args.seed)
        notes = [f"fano config part sizes {sizes} seed={args.seed}"]
    elif args.family == "tk":
        c, witness = gen_triangle_cycle(args.k, args.colour, args.background)
        notes = [f"triangle cycle k={witness.k} u={list(witness.u)} v={list(witness.v)} colour={witness.colour}"]
    else:
        c = gen_mean_instance(args.n, args.seed)
        notes = [f"mean instance n={args.n} seed={args.seed}"]
    _emit(format_instance(c, notes), args.out)
    return EXIT_OK


def cmd_amplify(args) -> int:
    c = amplify(read_instance(args.instance), args.rule, args.strict)
    _emit(format_instance(c, [f"amplified {args.instance} ({args.rule})"]), args.out)
    return EXIT_OK


# -------------------------------------------------------------
# 🔥 SOLVE
# -------------------------------------------------------------
def cmd_solve(args) -> int:
    c = read_instance(args.instance)
    budget = _budget(args)
    if args.solver == "two-local":
        p, trace = two_local_partition(c, budget)
    elif args.solver == "mean":
        p, trace = two_mean_partition(c, budget)
    else:
        overrides = {"c_pipeline": args.c_pipeline, "tk_min": args.tk_min, "ratio_exp": args.ratio_exp}
        params = PipelineParams(**{k: v for k, v in overrides.items() if v is not None})
        p, trace = r_local_partition(c, args.r, params, budget)
    pair = args.solver != "r-local"
    report = verify_partition(c, p, VerifyOptions(require_distinct_colours=pair, max_cycles=2 if pair else None))
    _emit_partition(p, f"cycles={report.cycle_count} valid={report.valid}", args.out, trace.as_lines() if args.trace else None)
    return EXIT_OK if report.valid else EXIT_FAILED


# -------------------------------------------------------------
# 🔥 ORACLE
# -------------------------------------------------------------
def cmd_oracle(args) -> int:
    c = read_instance(args.instance)
    budget = _budget(args)
    if args.query == "min":
        k, p = oracle.min_cycle_partition(c, budget)
        _emit_partition(p, f"min={k}", args.out)
        return EXIT_OK
    if args.query == "bt":
        found = oracle.bt_two_cycles(c, args.alpha, not args.literal_beta, budget)
        if found is None:
            _emit("none\n", args.out)
            return EXIT_FAILED
        _emit_partition(CyclePartition(cycles=found), f"cycles={len(found)} alpha={args.alpha}", args.out)
        return EXIT_OK
    robust = oracle.robustness_check(c, args.s, budget)
    _emit(f"robust={robust} s={args.s}\n", args.out)
    return EXIT_OK if robust else EXIT_FAILED


# -------------------------------------------------------------
# 🔥 VERIFY
# -------------------------------------------------------------
def cmd_verify(args) -> int:
    c = read_instance(args.instance)
    p = read_partition(args.partition)
    opts = VerifyOptions(
        require_cover=not args.cover_only,
        require_distinct_colours=args.distinct,
        max_cycles=args.max_cycles,
    )
    report = verify_partition(c, p, opts)
    line = f"cycles={report.cycle_count} valid={report.valid}"
    if not report.valid:
        line += f" reason={report.failure_reason} detail={report.detail}"
    _emit(line + "\n", None)
    return EXIT_OK if report.valid else EXIT_FAILED


# -------------------------------------------------------------
# 🔥 HARNESS COMMANDS
# -------------------------------------------------------------
def _handlers(args) -> ExperimentHandlers:
    return ExperimentHandlers(report_dir=args.report_dir, budget=_budget(args), progress=not args.no_progress)


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    overrides = {k: v for k, v in (("workers", args.workers), ("output", args.output), ("seed", args.seed)) if v is not None}
    if overrides:
        cfg = ExperimentConfig.build(**{**cfg.model_dump(), **overrides})
    summary = _handlers(args).run_experiment(cfg)
    print(f"instances={summary.instances} failures={summary.failures} max_cycles={summary.max_cycles} report={summary.output}")
    return EXIT_OK if summary.failures == 0 else EXIT_FAILED


def cmd_ramsey_probe(args) -> int:
    result = _handlers(args).ramsey_probe(args.r, args.l, args.n, args.samples, args.seed, args.s)
    print(f"all_found={result.all_found} min_cycle_len_observed={result.min_cycle_len_observed} warning={result.warning}")
    return EXIT_OK if result.all_found else EXIT_FAILED


def cmd_seed_search(args) -> int:
    hit: Optional[EdgeColouring] = _handlers(args).seed_search(args.s, args.r, args.n_max, args.seed, args.attempts)
    if hit is None:
        print("found=False")
    else:
        print(f"found=True n={hit.n}")
        sys.stdout.write(format_instance(hit))
    return EXIT_OK


# ================================
# PARSER
# ================================
def build_parser() -> argparse.ArgumentParser:
    helps = _command_help()
    parser = argparse.ArgumentParser(prog="cyclecover", description="Monochromatic cycle partitions of locally coloured K_n")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--oracle-max-n", type=int, default=None, help="override the exact-search vertex cap")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help=helps.get("gen"))
    gen_sub = gen.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--s", type=int, default=3)
    g = gen_sub.add_parser("tri")
    g.add_argument("--sizes", nargs="+", required=True, help="a,b,c or a b c")
    g.add_argument("--intra", choices=["low", "random"], default="low")
    g = gen_sub.add_parser("fano")
    g.add_argument("--sizes", nargs="+", default=["1,1,1,1,1,1,1"], help="seven part sizes")
    g = gen_sub.add_parser("tk")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--colour", type=int, default=0)
    g.add_argument("--bg", "--background", dest="background", type=int, default=1)
    g = gen_sub.add_parser("mean")
    g.add_argument("--n", type=int, required=True)
    for g in gen_sub.choices.values():
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--out", default=None)

    amp = sub.add_parser("amplify", help=helps.get("amplify"))
    amp.add_argument("--in", dest="instance", required=True)
    amp.add_argument("--rule", choices=["least_absent", "fresh"], default="least_absent")
    amp.add_argument("--strict", action="store_true", help="fail when a vertex sees every colour")
    amp.add_argument("--out", default=None)

    solve = sub.add_parser("solve", help=helps.get("solve"))
    solve.add_argument("solver", choices=["two-local", "mean", "r-local"])
    solve.add_argument("--in", dest="instance", required=True)
    solve.add_argument("--r", type=int, default=2)
    solve.add_argument("--c-pipeline", type=float, default=None)
    solve.add_argument("--tk-min", type=int, default=None, help="smallest triangle cycle worth planting")
    solve.add_argument("--ratio-exp", type=int, default=None, help="gate exponent e in |B| * r^e <= |A|")
    solve.add_argument("--trace", action="store_true", help="print the solver trace to stderr")
    solve.add_argument("--out", default=None)

    orc = sub.add_parser("oracle", help=helps.get("oracle"))
    orc.add_argument("query", choices=["min", "bt", "robust"])
    orc.add_argument("--in", dest="instance", required=True)
    orc.add_argument("--alpha", type=int, default=0)
    orc.add_argument("--literal-beta", action="store_true", help="beta must be a single colour, not every non-alpha colour")
    orc.add_argument("--s", type=int, default=2)
    orc.add_argument("--out", default=None)

    ver = sub.add_parser("verify", help=helps.get("verify"))
    ver.add_argument("--in", dest="instance", required=True)
    ver.add_argument("--partition", required=True)
    ver.add_argument("--distinct", action="store_true", help="cycles must use distinct colours")
    ver.add_argument("--max-cycles", type=int, default=None)
    ver.add_argument("--cover-only", action="store_true", help="do not require every vertex to be covered")

    for name in ("experiment", "ramsey-probe", "seed-search"):
        h = sub.add_parser(name, help=helps.get(name))
        h.add_argument("--report-dir", default=settings.REPORT_DIR)
        h.add_argument("--no-progress", action="store_true")
    exp = sub.choices["experiment"]
    exp.add_argument("--config", required=True)
    exp.add_argument("--workers", type=int, default=None)
    exp.add_argument("--output", default=None)
    exp.add_argument("--seed", type=int, default=None)

    probe = sub.choices["ramsey-probe"]
    probe.add_argument("--r", type=int, required=True)
    probe.add_argument("--l", type=int, required=True)
    probe.add_argument("--n", type=int, required=True)
    probe.add_argument("--samples", type=int, default=100)
    probe.add_argument("--s", type=int, default=None, help="palette size (default 2r)")
    probe.add_argument("--seed", type=int, default=0)

    seeds = sub.choices["seed-search"]
    seeds.add_argument("--s", type=int, required=True)
    seeds.add_argument("--r", type=int, default=None)
    seeds.add_argument("--n-max", type=int, default=8)
    seeds.add_argument("--attempts", type=int, default=200)
    seeds.add_argument("--seed", type=int, default=0)
    return parser


HANDLERS = {
    "gen": cmd_gen,
    "amplify": cmd_amplify,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
    "ramsey-probe": cmd_ramsey_probe,
    "seed-search": cmd_seed_search,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return HANDLERS[args.command](args)
    except (CycleCoverError, ValidationError, OSError) as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
