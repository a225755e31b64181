"""Command-line front end.

Exit codes: 0 ok/certified, 1 refuted (or false/invalid), 2 syntax error,
3 semantic or input error, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import frames, mvcore, search
from .generators import DEFAULT_SEED, random_formula, rng_for
from .semantics import ModelError, SemanticError, check_vocabulary, evaluate, load_model, model_to_dict
from .syntax import FormulaSyntaxError, core_axioms, instantiate_axiom, metavariables, parse, to_text

EXIT_OK, EXIT_REFUTED, EXIT_SYNTAX, EXIT_SEMANTIC, EXIT_BUDGET = 0, 1, 2, 3, 4

COMMANDS = ("eval", "check", "countermodel", "tau", "frame-check", "nframe-check", "pi-morphism", "certify")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    paths: tuple[str, ...] = ()
    n: Optional[int] = None
    max_worlds: Optional[int] = None
    fmt: str = "human"
    jobs: int = 1
    seed: int = DEFAULT_SEED
    extra: dict = field(default_factory=dict, compare=False)

    _REQUIRED = {"countermodel": ("n", "max_worlds"), "frame-check": ("n",), "certify": ("n", "max_worlds")}

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command}")
        for name in self._REQUIRED.get(self.command, ()):
            if getattr(self, name) is None:
                raise UsageError(f"{self.command} needs --{name.replace('_', '-')}")
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be a positive integer")
        if self.max_worlds is not None and self.max_worlds < 1:
            raise UsageError("--max-worlds must be at least 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        for p in self.paths:
            if not Path(p).is_file():
                raise FileNotFoundError(p)


def _formula_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    return parse(text)


def _read_premises(path: Optional[str]):
    if path is None:
        return ()
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse(line))
    return tuple(out)


def _emit(args, human: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def cmd_eval(args) -> int:
    model = load_model(args.model)
    phi = _formula_arg(args.formula)
    check_vocabulary(model, phi)
    value = evaluate(model, phi, args.world)
    _emit(args, str(value), {"formula": to_text(phi), "world": args.world, "value": str(value)})
    return EXIT_OK


def cmd_check(args) -> int:
    model = load_model(args.model)
    phi = _formula_arg(args.formula)
    check_vocabulary(model, phi)
    values = {w: evaluate(model, phi, w) for w in model.worlds}
    true = all(v == mvcore.ONE for v in values.values())
    lines = [f"{w}\t{v}" for w, v in values.items()]
    lines.append("true in model" if true else "not true in model")
    _emit(args, "\n".join(lines), {
        "formula": to_text(phi),
        "values": {w: str(v) for w, v in values.items()},
        "true_in_model": true,
    })
    return EXIT_OK if true else EXIT_REFUTED


def cmd_countermodel(args) -> int:
    phi = _formula_arg(args.formula)
    budget = search.SearchBudget(
        args.n, args.max_worlds, args.max_models, _read_premises(args.premises),
        prune_isomorphic=args.prune, jobs=args.jobs,
    )
    report = search.find_countermodel(phi, budget)
    if args.out and report.witness is not None:
        Path(args.out).write_text(json.dumps(model_to_dict(report.witness.model, args.n), indent=2) + "\n",
                                  encoding="utf-8")
    if args.format == "json":
        print(report.to_json())
    else:
        stats = report.statistics
        print(f"{report.verdict.value}  ({stats.models_examined} models, {stats.elapsed:.2f}s, {stats.status})")
        if report.witness is not None:
            w = report.witness
            print(f"fails at world {w.world} with value {w.value}")
            if not args.out:
                print(json.dumps(model_to_dict(w.model, args.n), indent=2))
            else:
                print(f"witness model written to {args.out}")
    if report.refuted:
        return EXIT_REFUTED
    return EXIT_BUDGET if report.partial else EXIT_OK


def cmd_tau(args) -> int:
    try:
        r = mvcore.truth_value(args.r)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    if r == 0:
        raise UsageError("r must lie in (0, 1]")
    if args.n is None and not mvcore.is_dyadic(r):
        raise UsageError(f"{r} is not dyadic; pass --n N to synthesize for the grid of step 1/N")
    if args.n is not None:
        surrogate = mvcore.dyadic_surrogate(r, args.n)
        points = mvcore.grid(args.n)
    else:
        surrogate = r
        points = [Fraction(k, 64) for k in range(65)]
    term = mvcore.synthesize_tau(surrogate)
    table = [(x, mvcore.eval_term(term, x)) for x in points]
    rows = [(x, v, (v == 1) == (x >= r)) for x, v in table]
    ok = all(good for *_, good in rows)
    human = [f"r = {r}" + (f"  (dyadic surrogate {surrogate} on grid 1/{args.n})" if surrogate != r else ""),
             f"term: {term}",
             "x\ttau(x)\tok"]
    human += [f"{x}\t{v}\t{'yes' if good else 'NO'}" for x, v, good in rows]
    _emit(args, "\n".join(human), {
        "r": str(r),
        "n": args.n,
        "surrogate": str(surrogate),
        "steps": [s.name for s in term.steps],
        "table": [{"x": str(x), "value": str(v), "ok": good} for x, v, good in rows],
        "ok": ok,
    })
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_frame_check(args) -> int:
    frame = frames.load_frame(args.frame)
    phi = _formula_arg(args.formula)
    witness = frames.find_frame_countermodel(frame, phi, args.n, args.max_models)
    payload = {"formula": to_text(phi), "n": args.n, "valid": witness is None,
               "properties": {p: frames.frame_property(frame, p) for p in ("reflexive", "transitive")}}
    human = "valid" if witness is None else "not valid"
    if witness is not None:
        payload["witness"] = {"world": witness.world, "value": str(witness.value),
                              "model": model_to_dict(witness.model, args.n)}
        human += f": fails at {witness.world} with value {witness.value}\n" + json.dumps(payload["witness"]["model"], indent=2)
    _emit(args, human, payload)
    return EXIT_OK if witness is None else EXIT_REFUTED


def cmd_nframe_check(args) -> int:
    nframe = frames.load_nframe(args.nframe)
    report = frames.validate_nframe(nframe)
    payload = {"valid_nframe": report.ok, "violations": report.to_list()}
    human = ["n+1-frame ok" if report.ok else "n+1-frame violates its laws:"]
    human += [f"  [{v.clause}] {v.message}" for v in report.violations]
    code = EXIT_OK if report.ok else EXIT_REFUTED
    if args.formula is not None and report.ok:
        phi = _formula_arg(args.formula)
        witness = frames.find_frame_countermodel(nframe, phi, None, args.max_models)
        payload["formula"] = to_text(phi)
        payload["formula_valid"] = witness is None
        human.append(f"{to_text(phi)}: " + ("valid" if witness is None else
                                             f"fails at {witness.world} with value {witness.value}"))
        if witness is not None:
            payload["witness"] = {"world": witness.world, "value": str(witness.value),
                                  "model": model_to_dict(witness.model, nframe.n)}
            code = EXIT_REFUTED
    _emit(args, "\n".join(human), payload)
    return code


def cmd_pi_morphism(args) -> int:
    source = frames.load_nframe(args.source)
    target = frames.load_nframe(args.target)
    f = frames.load_world_map(args.map)
    report = frames.is_pi_morphism(f, source, target)
    surjective = report.ok and frames.is_surjective(f, target)
    payload = {"pi_morphism": report.ok, "surjective": surjective, "violations": report.to_list()}
    human = ["pi-morphism" + (" (surjective)" if surjective else "") if report.ok else "not a pi-morphism:"]
    human += [f"  [{v.clause}] {v.message}" for v in report.violations]
    _emit(args, "\n".join(human), payload)
    return EXIT_OK if report.ok else EXIT_REFUTED


def cmd_certify(args) -> int:
    extra = []
    if args.random_instances:
        rng = rng_for(args.seed)
        for axiom in core_axioms():
            for i in range(args.random_instances):
                sigma = {v: random_formula(rng, 2, ("p", "q"), constants=False) for v in sorted(metavariables(axiom))}
                extra.append((f"{axiom}#{i}", instantiate_axiom(axiom, sigma)))
    if args.refute_check:
        extra.append((search.NON_THEOREM[0], parse(search.NON_THEOREM[1])))
    rows = search.certify_theorem_list(args.n, args.max_worlds, extra, jobs=args.jobs, prune_isomorphic=args.prune)
    payload = [{"label": r.label, "formula": to_text(r.formula), "verdict": r.verdict.value} for r in rows]
    width = max(len(r.label) for r in rows)
    human = "\n".join(f"{r.label:<{width}}  {r.verdict.value}  {to_text(r.formula)}" for r in rows)
    _emit(args, human, payload)
    return EXIT_REFUTED if any(r.report.refuted for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for the search")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized instances")

    parser = argparse.ArgumentParser(prog="lukmodal", description="Modal Łukasiewicz logic toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="value of a formula at a world")
    p.add_argument("model")
    p.add_argument("formula", help="formula text, or @FILE")
    p.add_argument("world")
    p.set_defaults(func=cmd_eval, paths=("model",))

    p = sub.add_parser("check", parents=[common], help="is a formula true in a model")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(func=cmd_check, paths=("model",))

    p = sub.add_parser("countermodel", parents=[common], help="bounded counter-model search")
    p.add_argument("formula")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("--max-models", type=int)
    p.add_argument("--premises", help="file with one premise formula per line")
    p.add_argument("--out", help="write the witness model here")
    p.add_argument("--prune", action="store_true", help="skip relations isomorphic to earlier ones")
    p.set_defaults(func=cmd_countermodel, paths=("premises",))

    p = sub.add_parser("tau", parents=[common], help="synthesize a threshold term")
    p.add_argument("r")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_tau, paths=())

    p = sub.add_parser("frame-check", parents=[common], help="validity of a formula on a frame")
    p.add_argument("frame")
    p.add_argument("formula")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-models", type=int, default=frames.DEFAULT_MAX_MODELS)
    p.set_defaults(func=cmd_frame_check, paths=("frame",))

    p = sub.add_parser("nframe-check", parents=[common], help="validate an n+1-frame, optionally a formula on it")
    p.add_argument("nframe")
    p.add_argument("formula", nargs="?")
    p.add_argument("--max-models", type=int, default=frames.DEFAULT_MAX_MODELS)
    p.set_defaults(func=cmd_nframe_check, paths=("nframe",))

    p = sub.add_parser("pi-morphism", parents=[common], help="check a map between n+1-frames")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")
    p.set_defaults(func=cmd_pi_morphism, paths=("source", "target", "map"))

    p = sub.add_parser("certify", parents=[common], help="run the theorem and axiom battery")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("--random-instances", type=int, default=0,
                   help="also check this many random substitution instances per schema")
    p.add_argument("--refute-check", action="store_true", help="append the known non-theorem as a control")
    p.add_argument("--prune", action="store_true")
    p.set_defaults(func=cmd_certify, paths=())
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        paths = tuple(getattr(args, name) for name in args.paths if getattr(args, name, None))
        RunConfig(args.command, paths, getattr(args, "n", None), getattr(args, "max_worlds", None),
                  args.format, args.jobs, args.seed).validate()
        return args.func(args)
    except (FormulaSyntaxError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except (SemanticError, ModelError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except frames.FrameBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
