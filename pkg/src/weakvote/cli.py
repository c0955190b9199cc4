"""Command-line interface: ``weakvote tally|stv|check|search|simulate|convert``.

Exit status: 2 for usage errors, 1 for data errors (unreadable or invalid
ballots, rule preconditions), 0 otherwise, including when an axiom
violation is found.  Every run starts with a ``# config:`` line echoing the
fully resolved settings; rationals are printed exactly as ``p/q``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import ballotio
from .axioms import (
    AxiomError,
    SearchBounds,
    check_cohesive_majorities,
    check_generalized_psc,
    check_independence_of_clones,
    check_indifference_monotonicity,
    check_select_majority_alternative,
    check_unanimous_majorities,
    make_rule,
    search_counterexample,
)
from .core import ProfileError
from .rules import RULES, RuleError, elimination_trace, put_winners
from .stv import ELIMINATIONS, PAYMENTS, QUOTAS, SELECTIONS, STV_RULES, StvConfig
from .synth import ExperimentConfig, rows_to_csv, run_experiment, summarize

ALL_RULES = tuple(RULES) + tuple(STV_RULES)
CHECK_AXIOMS = ("clones", "cohesive-majorities", "unanimous-majorities",
                "majority-alternative", "indiff-mono", "gpsc")


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return ballotio.format_weight(x) if isinstance(x, Fraction) else str(x)


def _config_line(args, **extra) -> str:
    skip = {"func", "command"}
    data = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    data.update(extra)
    return "# config: " + json.dumps({"command": args.command, **data}, sort_keys=True, default=str)


def _names_list(text: str | None) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _tiebreak(text: str | None):
    if text is None or text == "lexicographic":
        return "lexicographic"
    return tuple(_names_list(text))


def _load(args):
    return ballotio.read_profile(args.input, args.format, args.truncated)


def _stv_config(args) -> StvConfig:
    return StvConfig(args.quota, args.selection, args.payment, args.elimination,
                     _tiebreak(args.tiebreak))


def _rule(args):
    if args.rule in RULES:
        return make_rule(RULES[args.rule])
    return make_rule((args.rule, _stv_config(args)), args.k)


def _winners(profile, ids) -> str:
    return ",".join(profile.candidates[c] for c in sorted(ids))


# ---------------------------------------------------------------------------
# subcommands


def cmd_tally(args, out):
    if args.trace and args.tiebreak is None:
        raise UsageError("--trace needs an explicit --tiebreak policy")
    profile = _load(args)
    system = RULES[args.rule]
    winners = put_winners(profile, system)
    print(_config_line(args, semantics="parallel-universe"), file=out)
    record = {"rule": args.rule, "winners": sorted(profile.names(winners))}
    print(f"winners: {_winners(profile, winners)}", file=out)
    if args.trace:
        trace = elimination_trace(profile, system, _tiebreak(args.tiebreak))
        out.write(ballotio.elimination_audit(trace, profile))
        record["trace"] = ballotio.elimination_records(trace, profile)
    if args.json:
        print(ballotio.to_json(record), file=out)


def cmd_stv(args, out):
    profile = _load(args)
    committee, trace = STV_RULES[args.rule](profile, args.k, _stv_config(args))
    print(_config_line(args), file=out)
    out.write(ballotio.stv_audit(trace, profile))
    if args.json:
        print(ballotio.to_json({"committee": [profile.candidates[c] for c in trace.committee],
                                "rounds": ballotio.stv_records(trace, profile)}), file=out)


def cmd_check(args, out):
    profile = _load(args)
    rule = _rule(args)
    ax = args.axiom
    if ax == "clones":
        if not args.clones or not args.keep:
            raise UsageError("clones needs --clones and --keep")
        verdict = check_independence_of_clones(rule, profile, profile.ids(_names_list(args.clones)),
                                               profile.index(args.keep))
    elif ax == "indiff-mono":
        if not args.candidate:
            raise UsageError("indiff-mono needs --candidate")
        pattern = [int(i) for i in _names_list(args.hovers)]
        verdict = check_indifference_monotonicity(rule, profile, profile.index(args.candidate),
                                                  pattern)
    else:
        winners = (profile.ids(_names_list(args.winners)) if args.winners else rule(profile))
        if ax == "cohesive-majorities":
            verdict = check_cohesive_majorities(profile, winners)
        elif ax == "unanimous-majorities":
            verdict = check_unanimous_majorities(profile, winners)
        elif ax == "majority-alternative":
            verdict = check_select_majority_alternative(profile, winners)
        else:
            verdict = check_generalized_psc(profile, winners, len(winners), args.quota)
    print(_config_line(args), file=out)
    out.write(ballotio.format_verdict(verdict))
    if args.json:
        print(ballotio.to_json(ballotio.verdict_record(verdict)), file=out)


def cmd_search(args, out):
    bounds = SearchBounds(args.max_m, args.max_ballots, args.max_weight, args.tries, args.min_m)
    hit = search_counterexample(_rule(args), args.axiom, bounds, args.seed, args.k, args.quota,
                                workers=args.workers)
    print(_config_line(args), file=out)
    if hit is None:
        print(f"no counterexample in {args.tries} tries", file=out)
        return
    profile, verdict, t = hit
    print(f"counterexample at try {t}", file=out)
    out.write(ballotio.serialize_profile(profile))
    out.write(ballotio.format_verdict(verdict))


def cmd_simulate(args, out):
    try:
        config = ExperimentConfig(
            dataset=args.dataset, n=args.n, m=args.m, k=args.k, weakener=args.weakener,
            params=tuple(float(x) for x in _names_list(args.params)), samples=args.samples,
            seed=args.seed, d=args.d, shape=args.shape, quota=args.quota,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = run_experiment(config, args.workers)
    if args.summary:
        print(f"# config: {config.to_json()}", file=out)
        print("param,rule,samples,borda,agreement", file=out)
        for (param, rule), s in sorted(summarize(rows).items()):
            print(f"{param!r},{rule},{s['samples']},{s['borda']!r},{s['agreement']!r}", file=out)
        return
    text = rows_to_csv(config, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_convert(args, out):
    if args.marks:
        with open(args.input, encoding="utf-8") as fh:
            grids = ballotio.read_mark_grids(fh.read(), _names_list(args.candidates) or None)
        policy = ballotio.MarkPolicy(args.unranked, args.gaps)
        print(_config_line(args), file=out)
        for g in grids:
            c = ballotio.interpret_mark_grid(g, policy)
            print(f"{g.ballot_id}: {c.describe(g.candidates)} partial: {','.join(c.partial)}",
                  file=out)
        return
    profile = _load(args)
    out.write(ballotio.serialize_profile(profile.canonical(), args.to))


# ---------------------------------------------------------------------------
# parser


def _add_input(p):
    p.add_argument("input", help="ballot file")
    p.add_argument("--format", choices=("native", "preflib"), default=None,
                   help="input format (default: by file extension)")
    p.add_argument("--truncated", choices=ballotio.TRUNCATION, default="complete")
    p.add_argument("--json", action="store_true", help="also print a JSON record")


def _add_stv(p, rules=ALL_RULES):
    p.add_argument("--rule", choices=rules, required=True)
    p.add_argument("-k", type=int, default=1, help="committee size")
    p.add_argument("--quota", choices=QUOTAS, default="droop")
    p.add_argument("--selection", choices=SELECTIONS, default="highest-budget")
    p.add_argument("--payment", choices=PAYMENTS, default="gregory")
    p.add_argument("--elimination", choices=ELIMINATIONS, default="lowest-budget")
    p.add_argument("--tiebreak", default=None,
                   help="'lexicographic' or a comma-separated priority list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakvote", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tally", help="single-winner elimination rules")
    _add_input(p)
    p.add_argument("--rule", choices=tuple(RULES), required=True)
    p.add_argument("--trace", action="store_true", help="print one deterministic elimination run")
    p.add_argument("--tiebreak", default=None)
    p.set_defaults(func=cmd_tally)

    p = sub.add_parser("stv", help="multi-winner STV with budgets")
    _add_input(p)
    _add_stv(p, tuple(STV_RULES))
    p.set_defaults(func=cmd_stv)

    p = sub.add_parser("check", help="check an axiom on one profile")
    _add_input(p)
    _add_stv(p)
    p.add_argument("--axiom", choices=CHECK_AXIOMS, required=True)
    p.add_argument("--clones")
    p.add_argument("--keep")
    p.add_argument("--candidate")
    p.add_argument("--hovers", default="", help="comma-separated ballot indices to c-hover")
    p.add_argument("--winners", help="check these winners instead of running the rule")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="randomized counterexample search")
    _add_stv(p)
    p.add_argument("--axiom", choices=CHECK_AXIOMS, required=True)
    p.add_argument("--min-m", type=int, default=3)
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--max-ballots", type=int, default=6)
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--tries", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("simulate", help="synthetic-election experiment to CSV")
    p.add_argument("--dataset", default="euclidean")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--weakener", default="coin")
    p.add_argument("--params", default="0.5", help="comma-separated p or r values")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--shape", default="square")
    p.add_argument("--quota", choices=QUOTAS, default="droop")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary", action="store_true", help="print per-(param, rule) means")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("convert", help="transcode ballots or classify mark grids")
    _add_input(p)
    p.add_argument("--to", choices=("native", "preflib"), default="native")
    p.add_argument("--marks", action="store_true", help="input is a ballot_id,candidate,rank CSV")
    p.add_argument("--candidates", help="roster for mark grids (default: as seen)")
    p.add_argument("--unranked", choices=("bottom", "drop"), default="bottom")
    p.add_argument("--gaps", choices=("collapse", "invalid"), default="collapse")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args, out)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"weakvote: error: {e}", file=sys.stderr)
        return 2
    except (ProfileError, RuleError, AxiomError, OSError, ValueError, KeyError) as e:
        print(f"weakvote: data error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
