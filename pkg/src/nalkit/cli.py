"""Command-line entry point.

Subcommands: ``parse``, ``check-proof``, ``validate-model``, ``eval``,
``gen-models``, ``soundness``, ``find-countermodel``.  Human-readable
text by default; ``--json`` switches to machine output.

Exit status: 0 for success/accepted, 1 for checked-and-rejected (or
falsified, or violations found), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    FAMILY_NOTE, GenConfig, GenerationError, find_countermodel,
    generate_models, soundness_check,
)
from .models import (
    NalModel, derive_signature, load_model, model_to_json, save_model,
    validate_model,
)
from .proofs import check_derivation, load_derivation
from .semantics import EvalError, EvalPoint, Evaluator
from .surface import ParseError, WellFormednessError, parse_formula, render
from .syntax import (
    Application, Equals, Exists, FalseF, Forall, Formula, Group, Implies,
    And, Not, Or, Relation, Says, Signature, Speaksfor, SpeaksforRestricted,
    Subprincipal, Term, TrueF, Variable,
)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2


class InputError(Exception):
    pass


def load_signature(path: str) -> Signature:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return Signature.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as err:
        raise InputError(f"cannot load signature {path}: {err}") from err


def _parse_with_errors(text: str, sig: Signature) -> Formula:
    try:
        return parse_formula(text, sig)
    except ParseError as err:
        raise InputError(f"syntax error at {err.line}:{err.column} "
                         f"(offset {err.span.start}): {err.message}") from err
    except WellFormednessError as err:
        raise InputError(f"ill-formed formula: {err.report.failures[0].reason}") from err


def ast_to_json(node) -> dict:
    match node:
        case Variable(name):
            return {"node": "variable", "name": name}
        case Application(symbol, args):
            return {"node": "application", "symbol": symbol,
                    "args": [ast_to_json(a) for a in args]}
        case Subprincipal(parent, child):
            return {"node": "subprincipal", "parent": ast_to_json(parent),
                    "child": ast_to_json(child)}
        case Group(var, body):
            return {"node": "group", "var": var, "body": ast_to_json(body)}
        case TrueF():
            return {"node": "true"}
        case FalseF():
            return {"node": "false"}
        case Relation(symbol, args):
            return {"node": "relation", "symbol": symbol,
                    "args": [ast_to_json(a) for a in args]}
        case Equals(left, right):
            return {"node": "equals", "left": ast_to_json(left),
                    "right": ast_to_json(right)}
        case And(left, right):
            return {"node": "and", "left": ast_to_json(left),
                    "right": ast_to_json(right)}
        case Or(left, right):
            return {"node": "or", "left": ast_to_json(left),
                    "right": ast_to_json(right)}
        case Implies(left, right):
            return {"node": "implies", "left": ast_to_json(left),
                    "right": ast_to_json(right)}
        case Not(body):
            return {"node": "not", "body": ast_to_json(body)}
        case Forall(var, body):
            return {"node": "forall", "var": var, "body": ast_to_json(body)}
        case Exists(var, body):
            return {"node": "exists", "var": var, "body": ast_to_json(body)}
        case Says(principal, body):
            return {"node": "says", "principal": ast_to_json(principal),
                    "body": ast_to_json(body)}
        case Speaksfor(left, right):
            return {"node": "speaksfor", "left": ast_to_json(left),
                    "right": ast_to_json(right)}
        case SpeaksforRestricted(left, right, var, pattern):
            return {"node": "speaksfor-restricted", "left": ast_to_json(left),
                    "right": ast_to_json(right), "var": var,
                    "pattern": ast_to_json(pattern)}
    raise TypeError(f"not a term or formula: {node!r}")


def _ast_lines(node) -> list[str]:
    return _ast_lines_from_json(ast_to_json(node), 0)


def _ast_lines_from_json(blob: dict, indent: int) -> list[str]:
    pad = "  " * indent
    head = blob["node"]
    for key in ("name", "symbol", "var"):
        if key in blob:
            head += f" {blob[key]}"
    lines = [pad + head]
    for key, value in blob.items():
        if isinstance(value, dict):
            lines += _ast_lines_from_json(value, indent + 1)
        elif isinstance(value, list):
            for item in value:
                lines += _ast_lines_from_json(item, indent + 1)
    return lines


def _signature_for_model(args, model: NalModel) -> Signature:
    if getattr(args, "sig", None):
        return load_signature(args.sig)
    return derive_signature(model)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_parse(args) -> int:
    sig = load_signature(args.sig)
    formula = _parse_with_errors(args.formula, sig)
    if args.json:
        print(json.dumps({"formula": render(formula), "ast": ast_to_json(formula)},
                         indent=2, sort_keys=True))
    else:
        print("\n".join(_ast_lines(formula)))
        print(f"rendered: {render(formula)}")
    return EXIT_OK


def cmd_check_proof(args) -> int:
    sig = load_signature(args.sig)
    try:
        derivation = load_derivation(args.file, sig)
    except (OSError, ValueError, KeyError, ParseError, WellFormednessError) as err:
        raise InputError(f"cannot load derivation {args.file}: {err}") from err
    report = check_derivation(derivation, sig, strict_group_e=args.strict_group_e)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    elif report.accepted:
        print("accepted")
    else:
        first = report.failures[0]
        print(f"rejected: {first.reason} (at {first.path})")
        for failure in report.failures[1:]:
            print(f"  also: {failure.reason} (at {failure.path})")
    return EXIT_OK if report.accepted else EXIT_REJECTED


def cmd_validate_model(args) -> int:
    model = _load_model_checked(args.file)
    report = validate_model(model, check_f1=not args.no_f1)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    elif report.accepted:
        print("accepted")
    else:
        print("rejected:")
        for failure in report.failures:
            print(f"  [{failure.tag}] {failure.path}: {failure.reason}")
    return EXIT_OK if report.accepted else EXIT_REJECTED


def _load_model_checked(path: str) -> NalModel:
    try:
        return load_model(path)
    except (OSError, ValueError, KeyError) as err:
        raise InputError(f"cannot load model {path}: {err}") from err


def cmd_eval(args) -> int:
    model = _load_model_checked(args.model)
    report = validate_model(model)
    if not report.accepted:
        raise InputError(f"model {args.model} fails validation: "
                         f"{report.failures[0]}")
    sig = _signature_for_model(args, model)
    formula = _parse_with_errors(args.formula, sig)
    if args.world not in model.worlds:
        raise InputError(f"unknown world {args.world!r}")
    valuation = {}
    for item in args.assign or []:
        if "=" not in item:
            raise InputError(f"bad --assign {item!r}, expected name=individual")
        name, _, individual = item.partition("=")
        valuation[name] = individual
    try:
        result = Evaluator(model).holds(args.world, valuation, formula)
    except EvalError as err:
        raise InputError(str(err)) from err
    if args.json:
        print(json.dumps({
            "formula": render(formula), "world": args.world,
            "valuation": valuation, "holds": result,
        }, indent=2, sort_keys=True))
    else:
        print("holds" if result else "does not hold")
    return EXIT_OK if result else EXIT_REJECTED


def cmd_gen_models(args) -> int:
    sig = load_signature(args.sig) if args.sig else None
    cfg_kwargs = dict(
        seed=args.seed,
        max_worlds=args.max_worlds,
        max_principals=args.max_principals,
        max_domain=args.max_domain,
        sample_count=args.count,
    )
    if sig is not None:
        cfg_kwargs["signature"] = sig
    cfg = GenConfig(**cfg_kwargs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        models = generate_models(cfg)
    except GenerationError as err:
        print(f"generation failed: {err}", file=sys.stderr)
        return EXIT_REJECTED
    paths = []
    for i, model in enumerate(models):
        path = out_dir / f"model-{args.seed}-{i:04d}.json"
        save_model(path, model)
        paths.append(str(path))
    if args.json:
        print(json.dumps({"count": len(paths), "models": paths},
                         indent=2, sort_keys=True))
    else:
        for path in paths:
            print(path)
        print(f"wrote {len(paths)} validated model(s) to {out_dir}")
    return EXIT_OK


def cmd_soundness(args) -> int:
    proof_dir = Path(args.proofs)
    model_dir = Path(args.models)
    model_paths = sorted(model_dir.glob("*.json"))
    models = [_load_model_checked(p) for p in model_paths]
    if not models:
        raise InputError(f"no models in {model_dir}")
    for path, model in zip(model_paths, models):
        report = validate_model(model)
        if not report.accepted:
            raise InputError(f"model {path} fails validation: {report.failures[0]}")
    if args.sig:
        sig = load_signature(args.sig)
    else:
        candidate = proof_dir.parent / "signature.json"
        if candidate.exists():
            sig = load_signature(str(candidate))
        else:
            sig = derive_signature(models[0])
    proof_paths = sorted(proof_dir.glob("*.json"))
    if not proof_paths:
        raise InputError(f"no proofs in {proof_dir}")
    proofs = []
    for path in proof_paths:
        try:
            derivation = load_derivation(path, sig)
        except (OSError, ValueError, KeyError, ParseError, WellFormednessError) as err:
            raise InputError(f"cannot load derivation {path}: {err}") from err
        report = check_derivation(derivation, sig)
        if not report.accepted:
            raise InputError(
                f"derivation {path} does not check: {report.failures[0]}"
            )
        proofs.append(derivation)
    try:
        result = soundness_check(
            proofs, models,
            proof_labels=[p.name for p in proof_paths],
            model_labels=[p.name for p in model_paths],
        )
    except EvalError as err:
        raise InputError(
            f"a model cannot interpret the proofs' symbols: {err}"
        ) from err
    if args.json:
        print(json.dumps(result.to_json(), indent=2, sort_keys=True))
    else:
        print(result.text())
    return EXIT_OK if result.passed else EXIT_REJECTED


def cmd_find_countermodel(args) -> int:
    sig = load_signature(args.sig)
    formula = _parse_with_errors(args.formula, sig)
    cfg = GenConfig(
        seed=0,
        max_worlds=args.max_worlds,
        max_principals=args.max_principals,
        max_domain=args.max_domain,
        signature=sig,
    )
    result = find_countermodel(formula, cfg)
    if args.json:
        blob = {
            "found": result.found,
            "candidates": result.candidates,
            "family": FAMILY_NOTE,
        }
        if result.found:
            blob.update({
                "model": model_to_json(result.model),
                "world": result.world,
                "valuation": result.valuation,
            })
        print(json.dumps(blob, indent=2, sort_keys=True))
    elif result.found:
        print(f"countermodel found after {result.candidates} candidate(s); "
              f"formula fails at world {result.world}:")
        print(json.dumps(model_to_json(result.model), indent=2, sort_keys=True))
    else:
        print(f"no countermodel up to the bounds after {result.candidates} "
              f"candidate(s) ({FAMILY_NOTE})")
    return EXIT_REJECTED if result.found else EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nalkit",
        description="Authorization-logic toolkit: parse formulas, check "
                    "proofs, validate and generate models, evaluate, fuzz "
                    "soundness, and search for countermodels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and echo its AST")
    p.add_argument("--sig", required=True, help="signature JSON file")
    p.add_argument("formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check-proof", help="check a derivation file")
    p.add_argument("--sig", required=True)
    p.add_argument("file")
    p.add_argument("--strict-group-e", action="store_true",
                   help="also require the group variable to avoid the context")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("validate-model", help="validate a model file")
    p.add_argument("file")
    p.add_argument("--no-f1", action="store_true",
                   help="do not enforce frame condition F1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate_model)

    p = sub.add_parser("eval", help="evaluate a formula on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--assign", action="append", metavar="VAR=INDIVIDUAL")
    p.add_argument("--sig", help="signature file (default: from the model)")
    p.add_argument("formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-models", help="generate validated random models")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--max-principals", type=int, default=3)
    p.add_argument("--max-domain", type=int, default=3)
    p.add_argument("--sig", help="signature file (default: built-in corpus signature)")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen_models)

    p = sub.add_parser("soundness", help="fuzz proofs against models")
    p.add_argument("--proofs", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--sig", help="signature file (default: signature.json "
                                 "next to the proofs, else from the models)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_soundness)

    p = sub.add_parser("find-countermodel",
                       help="search for a model falsifying a closed formula")
    p.add_argument("--sig", required=True)
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-principals", type=int, default=2)
    p.add_argument("--max-domain", type=int, default=2)
    p.add_argument("formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_find_countermodel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
