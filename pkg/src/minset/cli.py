"""Command-line front end.

Subcommands: compute, verify, oracle, families, conjecture, perfect.
Exit codes: 0 = success, 2 = undecided result, 1 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, replace
from typing import Optional

from .arith import FactorPolicy, factorize, is_prime
from .automata import analyze_residual, build_avoidance_dfa, intersect_all, \
    valid_numeral_dfa
from .engine import (MODE_UNDECIDED, MinimalSetReport, minimal_set_automatic,
                     minimal_set_bounded, verify_completeness)
from .numerals import DomainError, antichain_from_values, parse_numeral
from .oracles import (SpecSyntaxError, is_psi_value, is_sum_of_three_squares,
                      is_totient, parse_oracle_spec)
from . import provers


@dataclass
class RunConfig:
    """Everything needed to reproduce a run; serialized into reports."""

    command: str
    spec: str = ""
    base: int = 10
    bound: Optional[int] = None
    exact: bool = False
    fmt: str = "text"
    data_dir: Optional[str] = None
    trial_bound: int = 10**6
    rho_rounds: int = 32
    seed: int = 0
    family_cap: int = 64
    family_reps: int = 80
    iteration_cap: int = 10**5
    block_size: int = 1 << 20

    def policy(self) -> FactorPolicy:
        return FactorPolicy(trial_bound=self.trial_bound,
                            rho_rounds=self.rho_rounds, seed=self.seed)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                   default="text")
    p.add_argument("--data-dir", default=None,
                   help="directory with the Mersenne/repunit tables "
                        "(default: $MINSET_DATA_DIR, then bundled data/)")
    p.add_argument("--trial-bound", type=int, default=10**6)
    p.add_argument("--rho-rounds", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minset",
        description="Minimal sets (digit-subsequence antichains) of "
                    "arithmetic sets of integers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a minimal set")
    p.add_argument("--set", dest="spec", required=True,
                   help="primes | pow2 | 3squares | qr:<m> | "
                        "residue:<a>+<m>N[0] | totient[+<c>] | psi | perfect "
                        "| finite:<file>, combinable with '&' and '|'")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--exact", action="store_true",
                   help="exact fixpoint (residue-determined sets only)")
    p.add_argument("--iteration-cap", type=int, default=10**5)
    p.add_argument("--block-size", type=int, default=1 << 20)
    _add_common(p)

    p = sub.add_parser("verify", help="verify completeness of a candidate")
    p.add_argument("--set", dest="spec", required=True)
    p.add_argument("--candidate",
                   help="comma-separated numerals in the chosen base")
    p.add_argument("--candidate-file",
                   help="file with one numeral per line ('#' comments)")
    p.add_argument("--family-cap", type=int, default=64)
    p.add_argument("--family-reps", type=int, default=80)
    p.add_argument("--no-extend", action="store_true",
                   help="report missing elements instead of absorbing them")
    _add_common(p)

    p = sub.add_parser("oracle", help="query a membership oracle")
    p.add_argument("--kind", required=True,
                   choices=("totient", "psi", "prime", "3squares", "factor",
                            "member"))
    p.add_argument("--n", required=True)
    p.add_argument("--set", dest="spec", help="oracle spec for --kind member")
    _add_common(p)

    p = sub.add_parser("families",
                       help="residual-language analysis for a candidate")
    p.add_argument("--set", dest="spec", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--family-cap", type=int, default=64)
    _add_common(p)

    p = sub.add_parser("conjecture", help="run a conjecture checker")
    p.add_argument("which", choices=("pow2",))
    p.add_argument("--min-exp", type=int, default=4)
    p.add_argument("--max-exp", type=int, default=25000)
    _add_common(p)

    p = sub.add_parser("perfect", help="even perfect number checks")
    p.add_argument("--count", type=int, default=12)
    _add_common(p)

    return parser


def _parse_candidate(args) -> list[int]:
    texts: list[str] = []
    if getattr(args, "candidate", None):
        texts.extend(t for t in args.candidate.split(",") if t.strip())
    if getattr(args, "candidate_file", None):
        with open(args.candidate_file, "r", encoding="utf-8") as fh:
            for line in fh:
                body = line.split("#", 1)[0].strip()
                if body:
                    texts.append(body)
    if not texts:
        raise DomainError("no candidate given (use --candidate or "
                          "--candidate-file)")
    return [parse_numeral(t.strip(), args.base).value for t in texts]


def _emit(report: MinimalSetReport, config: RunConfig) -> int:
    report = replace(report, config={**report.config, **asdict(config)})
    if config.fmt == "json":
        print(report.to_json())
    elif config.fmt == "csv":
        print(report.to_csv(), end="")
    else:
        print(report.render_text())
    return 0 if report.ok else (2 if report.mode == MODE_UNDECIDED else 1)


def _config_from(args) -> RunConfig:
    return RunConfig(
        command=args.command, spec=getattr(args, "spec", "") or "",
        base=getattr(args, "base", 10), bound=getattr(args, "bound", None),
        exact=getattr(args, "exact", False), fmt=args.fmt,
        data_dir=args.data_dir, trial_bound=args.trial_bound,
        rho_rounds=args.rho_rounds, seed=args.seed,
        family_cap=getattr(args, "family_cap", 64),
        family_reps=getattr(args, "family_reps", 80),
        iteration_cap=getattr(args, "iteration_cap", 10**5),
        block_size=getattr(args, "block_size", 1 << 20))


def cmd_compute(args) -> int:
    config = _config_from(args)
    spec = parse_oracle_spec(args.spec, config.policy(), args.data_dir)
    if args.exact:
        report = minimal_set_automatic(spec, args.base, args.iteration_cap)
    else:
        bound = args.bound if args.bound is not None else 10**6
        report = minimal_set_bounded(spec, args.base, bound, args.block_size)
    return _emit(report, config)


def cmd_verify(args) -> int:
    config = _config_from(args)
    spec = parse_oracle_spec(args.spec, config.policy(), args.data_dir)
    candidate = antichain_from_values(_parse_candidate(args), args.base)
    report = verify_completeness(spec, candidate, args.base,
                                 family_cap=args.family_cap,
                                 family_reps=args.family_reps,
                                 extend=not args.no_extend)
    return _emit(report, config)


def cmd_oracle(args) -> int:
    policy = _config_from(args).policy()
    kind = args.kind
    if kind == "member":
        if not args.spec:
            raise DomainError("--kind member requires --set")
        spec = parse_oracle_spec(args.spec, policy, args.data_dir)
        m = spec.contains(int(args.n))
        status = {True: "yes", False: "no", None: "undecided"}[m.member]
        extra = f", witness {m.witness}" if m.witness else ""
    elif kind == "totient":
        r = is_totient(int(args.n), policy)
        status, extra = r.status, f", witness {r.witness}" if r.witness else ""
        m = r.to_membership()
    elif kind == "psi":
        r = is_psi_value(int(args.n), policy)
        status, extra = r.status, f", witness {r.witness}" if r.witness else ""
        m = r.to_membership()
    elif kind == "prime":
        status, extra, m = is_prime(int(args.n)), "", None
    elif kind == "3squares":
        status = "yes" if is_sum_of_three_squares(int(args.n)) else "no"
        extra, m = "", None
    else:  # factor
        fac = factorize(int(args.n), policy)
        status, extra, m = fac.status, f": {fac.render()}", None
    if args.fmt == "json":
        print(json.dumps({"kind": kind, "n": args.n, "result": status,
                          "detail": extra.lstrip(", :")}))
    else:
        print(f"{kind}({args.n}) -> {status}{extra}")
        if m is not None and m.assumptions:
            for a in m.assumptions:
                print(f"  assumption: {a}")
    return 0 if status not in ("conditional", "undecided") else 2


def cmd_families(args) -> int:
    config = _config_from(args)
    spec = parse_oracle_spec(args.spec, config.policy(), args.data_dir)
    candidate = antichain_from_values(_parse_candidate(args), args.base)
    machines = ([build_avoidance_dfa(candidate), valid_numeral_dfa(args.base)]
                + spec.necessary_conditions(args.base))
    analysis = analyze_residual(intersect_all(machines), args.family_cap)
    doc = {"tag": analysis.tag,
           "members": [str(m) for m in analysis.finite_members],
           "families": [f.render() for f in analysis.families],
           "reason": analysis.reason}
    if args.fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"residual: {analysis.tag}")
        for m in analysis.finite_members:
            print(f"  member: {m}")
        for f in analysis.families:
            print(f"  family: {f.render()}")
        if analysis.reason:
            print(f"  reason: {analysis.reason}")
    return 0 if analysis.tag != "undecided" else 2


def cmd_conjecture(args) -> int:
    report = provers.pow2_digit_check(args.min_exp, args.max_exp)
    if args.fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        verdict = ("holds" if report["holds"]
                   else f"fails at m = {report['violations'][0]}")
        print(f"{report['statement']}: {verdict}")
        if report["base_case"]:
            print(f"base case: {report['base_case']} "
                  "(the conjectured minimal element)")
    return 0 if report["holds"] else 1


def cmd_perfect(args) -> int:
    report = provers.lucas_ending_check(args.count, args.data_dir)
    if args.base != 10:
        sub = provers.perfect_minimal_set(args.base, args.count, args.data_dir)
        if args.fmt == "json":
            print(sub.to_json())
        else:
            print(sub.render_text())
        return 0
    if args.fmt == "json":
        doc = {"count": report["count"],
               "endings": {str(k): v for k, v in report["endings"].items()},
               "endings_ok": report["endings_ok"],
               "conditional_base10": report["conditional_base10"].to_dict(),
               "conditional_base2": report["conditional_base2"].to_dict(),
               "assumptions": list(report["assumptions"])}
        print(json.dumps(doc, indent=2))
    else:
        print(f"first {report['count']} even perfect numbers")
        print(f"endings (excluding 6 and 496): "
              f"{sorted(set(report['endings'].values()))} "
              f"{'OK' if report['endings_ok'] else 'VIOLATION'}")
        print("conditional minimal set base 10: "
              + report["conditional_base10"].elements.render())
        print("conditional minimal set base 2: "
              + report["conditional_base2"].elements.render(True))
        for a in report["assumptions"]:
            print(f"  assumption: {a}")
    return 0 if report["endings_ok"] else 1


_COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "families": cmd_families,
    "conjecture": cmd_conjecture,
    "perfect": cmd_perfect,
}


def main(argv: Optional[list[str]] = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(200000)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SpecSyntaxError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
