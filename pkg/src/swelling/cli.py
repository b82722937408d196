"""Command-line front end.

JSON reports go to stdout (or ``--out``), a one-line human summary to stderr.
Exit codes: 0 clean, 1 an audit found a violation of a proven statement
(a bug sentinel), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from datetime import datetime, timezone

from . import __version__
from .cosets import (
    audit_inequality_chains,
    audit_theorem_part1,
    build_subgroup,
    lemma1_bound_check,
    random_lemma1_instance,
)
from .errors import PreconditionError, SwellingError, UsageError
from .finsets import check_muranov, subset, sweep_group_2swelling, sweep_group_weak_2swelling
from .groups import group_from_spec
from .intervals import check_muranov_real, parse_interval_set
from .numeric import parse_scalar
from .orbit import DEFAULT_MAX_STEPS, escape_certifies_failure, projected_gap_stats, run_orbit
from .search import default_jobs, load_config, run_search

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _manifest(command: str, argv: list[str], seed=None, config_hash: str | None = None) -> dict:
    if config_hash is None:
        config_hash = hashlib.sha256("\0".join(argv).encode()).hexdigest()
    return {
        "command": command,
        "argv": list(argv),
        "config_hash": config_hash,
        "seed": seed,
        "version": __version__,
        "started": _now(),
        "finished": None,
    }


def _emit(report, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str):
    print(msg, file=sys.stderr)


def _finite_inputs(args):
    G = group_from_spec(args.group)
    A = subset(G, G.parse_set(args.A))
    B = subset(G, G.parse_set(args.B))
    a, b, c = (G.parse_element(x) for x in (args.a, args.b, args.c))
    return G, A, B, a, b, c


# -- subcommands ------------------------------------------------------------------------


def cmd_verify(args, manifest):
    if args.real:
        A, B = parse_interval_set(args.A), parse_interval_set(args.B)
        a, b, c = (parse_scalar(x) for x in (args.a, args.b, args.c))
        verdict = check_muranov_real(A, B, a, b, c)
        report = {"manifest": manifest, "mode": "real", "verdict": verdict.to_json()}
        # on R a counterexample is a finding, not a bug
        code = EXIT_OK
    else:
        if not args.group:
            raise UsageError("verify needs --group (or --real)")
        G, A, B, a, b, c = _finite_inputs(args)
        verdict = check_muranov(G, A, B, a, b, c)
        report = {"manifest": manifest, "mode": G.spec, "verdict": verdict.to_json(G.format_element)}
        code = EXIT_VIOLATION if verdict.is_counterexample else EXIT_OK
    _say(
        f"inclusions: union={verdict.union_inclusion_holds} intersection={verdict.intersection_inclusion_holds}; "
        f"equalities: union={verdict.union_equality_holds} intersection={verdict.intersection_equality_holds}"
    )
    return report, code


def cmd_sweep(args, manifest):
    G = group_from_spec(args.group)
    fn = sweep_group_weak_2swelling if args.weak else sweep_group_2swelling
    summary = fn(G, cap=args.cap, jobs=args.jobs or default_jobs())
    _say(f"{G.spec} ({summary.variant}): {summary.tuples_checked} tuples, {len(summary.violations)} violations")
    report = {"manifest": manifest, **summary.to_json()}
    bad = summary.violations or summary.chain_failures
    return report, EXIT_VIOLATION if bad else EXIT_OK


def cmd_audit_cosets(args, manifest):
    G, A, B, a, b, c = _finite_inputs(args)
    if args.H2 is None:
        rep = audit_theorem_part1(G, A, B, a, b, c)
        ok = rep.all_collapse and rep.reassembled_union_equal and rep.reassembled_intersection_equal
        ok = ok and all(r.union_piece_equal and r.intersection_piece_equal for r in rep.rows)
    else:
        H2 = build_subgroup(G, G.parse_set(args.H2))
        rep = audit_inequality_chains(G, A, B, a, b, c, H2, args.case)
        ok = rep.all_equal and rep.all_sound
    _say(f"{len(rep.rows)} cosets audited; {'all chains collapse' if ok else 'VIOLATION'}")
    return {"manifest": manifest, "subgroup": rep.subgroup.describe(), "cosets": rep.to_json()}, (
        EXIT_OK if ok else EXIT_VIOLATION
    )


def cmd_lemma1(args, manifest):
    G = group_from_spec(args.group)
    if args.K is not None:
        K = subset(G, G.parse_set(args.K))
        H = build_subgroup(G, G.parse_set(args.H or ""))
        res = lemma1_bound_check(K, H)
        report = {"manifest": manifest, "max_coset_count": res.max_coset_count,
                  "difference_bound": res.difference_bound, "holds": res.holds}
        breaches = 0 if res.holds else 1
    else:
        rng = random.Random(args.seed)
        breaches, worst = 0, []
        for trial in range(args.trials):
            K, H = random_lemma1_instance(G, rng, args.max_size, args.max_gens)
            res = lemma1_bound_check(K, H)
            if not res.holds:
                breaches += 1
                worst.append({"trial": trial, "K": str(K), "H": H.describe()})
        report = {"manifest": manifest, "group": G.spec, "trials": args.trials,
                  "breaches": breaches, "holds": breaches == 0, "breach_examples": worst[:10]}
    _say(f"coset-count bound: {breaches} breach(es)")
    return report, EXIT_VIOLATION if breaches else EXIT_OK


def cmd_orbit(args, manifest):
    A, B = parse_interval_set(args.A), parse_interval_set(args.B)
    a, b = parse_scalar(args.a), parse_scalar(args.b)
    x0 = parse_scalar(args.x0) if args.x0 is not None else None
    try:
        trace = run_orbit(A, B, a, b, x0, args.steps)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    lines = [json.dumps(st.to_json(), sort_keys=True) for st in trace.steps]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = {"escape_index": trace.escape_index, "steps": len(trace.steps) - 1, **trace.step_counts()}
    cert = escape_certifies_failure(trace)
    if cert is not None:
        summary["certificate"] = cert.to_json()
    if args.gaps:
        summary["gaps"] = projected_gap_stats(trace).to_json()
    _say(json.dumps(summary, sort_keys=True))
    if cert is not None and not cert.validated:
        return None, EXIT_VIOLATION
    return None, EXIT_OK


def cmd_search(args, manifest):
    config = load_config(args.config)
    manifest["config_hash"] = config.config_hash
    manifest["seed"] = config.seed
    report = run_search(config, jobs=args.jobs, manifest=manifest)
    _say(f"{report['candidates_generated']} candidates, {report['fully_verified']} verified: {report['conclusion']}")
    return report, EXIT_OK


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="swelling", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def finite_args(sp, need_group=True):
        sp.add_argument("--group", required=need_group, help="Zmod:m, Zn:n, Z, S3, Q or QSqrt2")
        sp.add_argument("--A", required=True)
        sp.add_argument("--B", required=True)
        sp.add_argument("--a", required=True)
        sp.add_argument("--b", required=True)
        sp.add_argument("--c", required=True)

    sp = sub.add_parser("verify", help="decide the four inclusion/equality conditions")
    finite_args(sp, need_group=False)
    sp.add_argument("--real", action="store_true", help="interval sets on the real line")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("sweep", help="exhaustive check over a finite group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--weak", action="store_true", help="disjoint-translate variant")
    sp.add_argument("--cap", type=int, default=6, help="largest group order accepted")
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("audit-cosets", help="per-coset counting audit")
    finite_args(sp)
    sp.add_argument("--H2", default=None, help="generators of H2; switches to the inequality-chain audit")
    sp.add_argument("--case", default="a-case", choices=["a-case", "b-case", "c-case"])
    sp.set_defaults(fn=cmd_audit_cosets)

    sp = sub.add_parser("lemma1", help="check max_x |K∩Hx| <= |KK⁻¹∩H|")
    sp.add_argument("--group", required=True)
    sp.add_argument("--K", default=None, help="explicit K (otherwise random trials)")
    sp.add_argument("--H", default=None, help="generators of H for explicit K")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-size", type=int, default=20)
    sp.add_argument("--max-gens", type=int, default=2)
    sp.set_defaults(fn=cmd_lemma1)

    sp = sub.add_parser("orbit", help="run the orbit refuter (JSONL trace)")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--x0", default=None)
    sp.add_argument("--steps", type=int, default=DEFAULT_MAX_STEPS)
    sp.add_argument("--gaps", action="store_true", help="add projected gap statistics to the summary")
    sp.set_defaults(fn=cmd_orbit)

    sp = sub.add_parser("search", help="counterexample search from a key=value config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--jobs", type=int, default=None, help="worker processes (default $SWELLING_JOBS or 1)")
    sp.set_defaults(fn=cmd_search)

    for sp in sub.choices.values():
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        seed = getattr(args, "seed", None)
        manifest = _manifest(args.command, argv, seed)
        report, code = args.fn(args, manifest)
    except UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except PreconditionError as exc:
        _say(f"precondition failed: {exc}")
        return EXIT_USAGE
    except SwellingError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    if report is not None:
        manifest["finished"] = _now()
        _emit(report, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
