"""Command line interface: check, report, examples, certify.

Exit codes are a stable contract: 0 when the checked condition holds (or
the certificate re-validates), 1 when it fails, 2 on invalid input.  The
report command additionally exits 3 if its internal cross-condition
audit fires, which no valid input should trigger.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import checkers
from .certificates import CertificateFormat, fap_from_payload, validate_verdict
from .core import InvalidInput, Model, RandVar, constant, rat
from .fap import from_p0
from .modelio import AuditError, build_report, load_model_file, serialize_model
from .spaces import (
    example_bp,
    example_dmw,
    example_harmonic,
    random_finite_model,
)

_CONDITIONS = ("3", "4", "5", "5*", "6", "7", "8", "10", "coherence")


def _emit(payload: Any, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        if isinstance(payload, dict) and "verdicts" in payload:
            print(f"model {payload['model_digest'][:16]}")
            for v in payload["verdicts"]:
                state = "holds" if v["holds"] else "fails"
                print(f"  {v['condition']:>5} {state}: {v['narrative']}")
        elif isinstance(payload, dict) and "condition" in payload:
            state = "holds" if payload["holds"] else "fails"
            print(f"{payload['condition']} {state}: {payload['narrative']}")
        else:
            print(payload)


def _load_weight(path: str, m: Model) -> RandVar:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    values = tuple(rat(v) for v in doc["values"])
    tail = rat(doc["tail"]) if "tail" in doc else None
    x = RandVar(values, tail)
    x.check_conforms(m)
    return x


def _cmd_check(args: argparse.Namespace) -> int:
    doc = load_model_file(args.path)
    m, ls = doc.model, doc.lin_space
    cond = args.condition.strip("()")
    if cond not in _CONDITIONS:
        raise InvalidInput(
            f"unknown condition {args.condition!r}; pick one of {_CONDITIONS}"
        )
    if cond == "3":
        if args.q is not None:
            if args.q == "p0":
                q = from_p0(m)
            else:
                with open(args.q, "r", encoding="utf-8") as fh:
                    q = fap_from_payload(m, json.load(fh))
            verdict = checkers.verify_condition3(m, ls, q, rat(args.c))
        else:
            verdict = checkers.find_emfap(m, ls)
    elif cond == "4":
        verdict = checkers.check_acmfap(m, ls)
    elif cond == "5":
        verdict = checkers.cstar_verdict(m, ls)
    elif cond == "5*":
        if args.weight is not None:
            weight = _load_weight(args.weight, m)
        elif not m.has_tail:
            weight = constant(1, m)
        else:
            raise InvalidInput(
                "condition 5* on a tail model needs --weight (a positive "
                "function vanishing at the tail)"
            )
        verdict = checkers.verify_condition5star(m, ls, weight)
    elif cond == "6":
        verdict = checkers.check_no_arbitrage(m, ls)
    elif cond == "7":
        verdict = checkers.check_event_dominance(ls, doc.previsions, doc.events, m)
    elif cond == "8":
        verdict = checkers.check_condition8(m, ls)
    elif cond == "10":
        verdict = checkers.check_norm_closure(m, ls)
    else:
        verdict = checkers.check_coherence(ls.basis, doc.previsions, m)
    _emit(verdict.to_dict(), args.format)
    return 0 if verdict.holds else 1


def _cmd_report(args: argparse.Namespace) -> int:
    doc = load_model_file(args.path)
    try:
        report = build_report(doc)
    except AuditError as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return 3
    _emit(report, args.format)
    return 0


def _cmd_examples(args: argparse.Namespace) -> int:
    name = args.name
    if name == "dmw":
        m, f, s = example_dmw(rat(args.p), args.n)
        doc = serialize_model(m, filtration=f, process=s)
    elif name == "bp":
        m, f, s, _q = example_bp(args.N, args.k)
        doc = serialize_model(m, filtration=f, process=s)
    elif name == "harmonic":
        m, ls = example_harmonic(args.N)
        doc = serialize_model(m, lin_space=ls)
    elif name == "finite-random":
        m, ls = random_finite_model(
            args.seed, max_states=args.max_states, max_basis=args.max_basis
        )
        doc = serialize_model(m, lin_space=ls)
    else:  # unreachable through argparse choices
        raise InvalidInput(f"unknown example {name!r}")
    blob = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(blob + "\n")
    else:
        print(blob)
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    doc = load_model_file(args.path)
    try:
        with open(args.certificate, "r", encoding="utf-8") as fh:
            verdict = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.certificate}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(
            f"{args.certificate} is not valid JSON: {exc}"
        ) from exc
    ok = validate_verdict(doc.model, doc.lin_space, verdict, doc.extras())
    print(json.dumps({"valid": ok}))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famart",
        description="Exact checkers, with certificates, for martingale "
        "finitely additive probabilities on finite and tail-compactified "
        "models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide one condition on a model file")
    p_check.add_argument("path")
    p_check.add_argument("--condition", required=True)
    p_check.add_argument("--format", choices=("json", "text"), default="json")
    p_check.add_argument(
        "--q",
        default=None,
        help="for condition 3: 'p0' or a path to a pmf JSON "
        "({alpha, mass, tail}); switches to the explicit expectation bound",
    )
    p_check.add_argument("--c", default="1", help="constant for the explicit bound")
    p_check.add_argument(
        "--weight", default=None, help="for condition 5*: path to a weight JSON"
    )
    p_check.set_defaults(func=_cmd_check)

    p_report = sub.add_parser("report", help="run every applicable checker")
    p_report.add_argument("path")
    p_report.add_argument("--format", choices=("json", "text"), default="json")
    p_report.set_defaults(func=_cmd_report)

    p_ex = sub.add_parser("examples", help="write a built-in model file")
    p_ex.add_argument(
        "name", choices=("dmw", "bp", "harmonic", "finite-random")
    )
    p_ex.add_argument("--p", default="1/3", help="dmw: heads probability in (0,1/2)")
    p_ex.add_argument("--n", type=int, default=2, help="dmw: horizon")
    p_ex.add_argument("--N", type=int, default=8, help="bp/harmonic: truncation")
    p_ex.add_argument("--k", type=int, default=4, help="bp: number of gains")
    p_ex.add_argument("--seed", type=int, default=0, help="finite-random: seed")
    p_ex.add_argument("--max-states", type=int, default=6)
    p_ex.add_argument("--max-basis", type=int, default=4)
    p_ex.add_argument("--out", default=None, help="output path (default stdout)")
    p_ex.set_defaults(func=_cmd_examples)

    p_cert = sub.add_parser(
        "certify", help="re-validate a serialized verdict against a model"
    )
    p_cert.add_argument("path")
    p_cert.add_argument("certificate")
    p_cert.set_defaults(func=_cmd_certify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CertificateFormat as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return 2
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"invalid input: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
