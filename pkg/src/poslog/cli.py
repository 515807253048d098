"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input, 3 size guard hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .duality import free_BA, verify_dualities
from .errors import InputError, PoslogError
from .finposet import Poset, discrete
from .formula import beta_translate, parse_formula, positive_normal_form
from .io import load_lattice, load_poset
from .logic import (
    OrderedCoalgebra, build_beta, build_beta_variant, eval_bool, eval_pos, n_step_injectivity,
    parse_model, wk_counterexample,
)
from .posetification import NAMED_POS_FUNCTORS, posetify_obj, preserves_exact_squares
from .predlift import bijection_check, enumerate_liftings, is_monotone, load_lifting_table
from .report import Report
from .setfunctor import parse_functor, preserves_weak_pullbacks


def _functor(text: str):
    return parse_functor(text, loader=lambda path: load_poset(path).elements)


def _poset(spec: str) -> Poset:
    """A poset file, or ``chain:n`` / ``discrete:n``."""
    kind, _, n = spec.partition(":")
    if kind in ("chain", "discrete") and n.isdigit():
        k = int(n)
        return Poset.chain(k) if kind == "chain" else discrete(tuple(str(i) for i in range(k)))
    return load_poset(spec)


def _algebra(spec: str):
    kind, _, n = spec.partition(":")
    if kind == "free" and n.isdigit():
        return free_BA(int(n))
    if spec == "two":
        return free_BA(0)
    a = load_lattice(spec)
    if not a.boolean:
        raise InputError(f"{spec} is a distributive lattice, beta needs a Boolean algebra")
    return a


def _emit(args, report: Report | None = None, payload: dict | None = None, text: list | None = None) -> int:
    if args.json:
        data = report.as_dict() if report is not None else payload
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        for line in (report.lines() if report is not None else text):
            print(line)
    return 0 if report is None or report.ok else 1


def cmd_posetify(args) -> int:
    t = _functor(args.functor)
    x = _poset(args.poset)
    q, _ = posetify_obj(t, x)
    names = [t.show_value(v) for v in q.elements]
    covers = [(t.show_value(a), t.show_value(b)) for a, b in q.hasse()]
    text = [f"{t}' on a {len(x)}-element poset: {len(q)} elements",
            "elements: " + " ".join(names)] + [f"le: {a} {b}" for a, b in covers]
    return _emit(args, payload={"functor": str(t), "elements": names,
                                "covers": [list(c) for c in covers]}, text=text)


def cmd_check_wpb(args) -> int:
    return _emit(args, preserves_weak_pullbacks(_functor(args.functor), args.bound))


def cmd_check_exact(args) -> int:
    return _emit(args, preserves_exact_squares(_functor(args.functor), args.bound, args.apex_bound))


def cmd_duality(args) -> int:
    return _emit(args, verify_dualities(args.bound, args.dl_size))


def cmd_beta(args) -> int:
    t = _functor(args.functor)
    a = _algebra(args.algebra)
    if args.pos_functor:
        if args.pos_functor not in NAMED_POS_FUNCTORS:
            raise InputError(f"unknown Pos-functor {args.pos_functor!r}; known: {', '.join(NAMED_POS_FUNCTORS)}")
        return _emit(args, build_beta_variant(a, t, NAMED_POS_FUNCTORS[args.pos_functor]()))
    return _emit(args, build_beta(a, t).report)


def cmd_translate(args) -> int:
    if args.nnf:
        out = positive_normal_form(parse_formula(args.formula))
    else:
        out = beta_translate(parse_formula(args.formula, positive=True))
    return _emit(args, payload={"input": args.formula, "output": str(out)}, text=[str(out)])


def cmd_eval(args) -> int:
    model = parse_model(_read(args.model))
    if isinstance(model, OrderedCoalgebra):
        phi = parse_formula(args.formula, positive=True)
        result = eval_pos(phi, model)
        order = model.carrier.elements
    else:
        phi = parse_formula(args.formula)
        table = load_lifting_table(_read(args.liftings)) if args.liftings else None
        result = eval_bool(phi, model, table)
        order = model.carrier.elements
    states = [s for s in order if s in result]
    return _emit(args, payload={"formula": str(phi), "states": states},
                 text=["{" + ",".join(states) + "}"])


def cmd_liftings(args) -> int:
    t = _functor(args.functor)
    if args.bijection:
        return _emit(args, bijection_check(t, args.arity))
    ls = enumerate_liftings(t, args.arity)
    if args.monotone:
        ls = [l for l in ls if is_monotone(l)]
    rows = [(l.show(), is_monotone(l)) for l in ls]
    text = [f"{len(rows)} liftings of {t} at arity {args.arity}"]
    text += [f"{s}{'  monotone' if m else ''}" for s, m in rows]
    return _emit(args, payload={"functor": str(t), "arity": args.arity,
                                "liftings": [{"value": s, "monotone": m} for s, m in rows]}, text=text)


def cmd_repro(args) -> int:
    if args.name != "dunn-counterexample":
        raise InputError(f"unknown reproduction {args.name!r}")
    r = wk_counterexample()
    if args.json:
        return _emit(args, r)
    for line in r.lines():
        print(line)
    print(r.details.get("WK(P'e)", ""))
    return 0 if r.ok else 1


def cmd_nstep(args) -> int:
    return _emit(args, n_step_injectivity(_functor(args.functor), args.n))


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poslog", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("posetify", help="the poset T'X in Hasse form")
    s.add_argument("functor")
    s.add_argument("poset", help="poset file, or chain:n / discrete:n")
    s.set_defaults(run=cmd_posetify)

    s = sub.add_parser("check-wpb", help="weak pullback preservation up to a bound")
    s.add_argument("functor")
    s.add_argument("--bound", type=int, default=2)
    s.set_defaults(run=cmd_check_wpb)

    s = sub.add_parser("check-exact", help="exact square preservation of T' up to a bound")
    s.add_argument("functor")
    s.add_argument("--bound", type=int, default=2)
    s.add_argument("--apex-bound", type=int, default=None)
    s.set_defaults(run=cmd_check_exact)

    s = sub.add_parser("duality", help="finite Birkhoff and Stone duality checks")
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--dl-size", type=int, default=6)
    s.set_defaults(run=cmd_duality)

    s = sub.add_parser("beta", help="the comparison L'W -> WL on a finite Boolean algebra")
    s.add_argument("functor")
    s.add_argument("--algebra", default="free:1", help="lattice file, free:n or two")
    s.add_argument("--pos-functor", default=None, help="use a named Pos-functor (DC, [2,-]) for T'")
    s.set_defaults(run=cmd_beta)

    s = sub.add_parser("translate", help="positive formula to Boolean syntax")
    s.add_argument("formula")
    s.add_argument("--nnf", action="store_true", help="instead push negations of a Boolean formula to atoms")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("eval", help="states satisfying a formula")
    s.add_argument("formula")
    s.add_argument("model")
    s.add_argument("--liftings", default=None, help="lifting table for lift modalities")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("liftings", help="predicate liftings of a functor")
    s.add_argument("functor")
    s.add_argument("--arity", type=int, default=1)
    s.add_argument("--monotone", action="store_true", help="only the monotone ones")
    s.add_argument("--bijection", action="store_true", help="match them with liftings of T'")
    s.set_defaults(run=cmd_liftings)

    s = sub.add_parser("repro", help="reproduce a worked counterexample")
    s.add_argument("name", choices=["dunn-counterexample"])
    s.set_defaults(run=cmd_repro)

    s = sub.add_parser("nstep", help="injectivity of the n-step comparison")
    s.add_argument("functor")
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(run=cmd_nstep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except PoslogError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except RecursionError:
        print("error: input nested too deeply", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
