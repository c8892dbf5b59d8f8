"""Command-line front end.

Exit codes: 0 all verdicts pass, 1 a check failed (the report carries the
witness), 2 undecided within the given bounds, 3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .config import ConfigError, dumps, load, parse_config, serialize
from .lattice import hnf
from .nilgroup import make_subgroup
from .registry import EXAMPLES, example_params, make_example, theta_recurrence
from .selfsim import AtomTable, Engine, parse_word, perm_cycles
from .verify import verify_example
from .vend import (
    Triple,
    bounds_report,
    core_compute,
    derived_chain,
    finite_state_predict,
    simplicity_decide,
    strong_simplicity,
    thm13_check,
    triple_validate,
)

OK, FAILED, UNDECIDED, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


def default_cap() -> int:
    raw = os.environ.get("VEND_MAX_STATES")
    if raw is None:
        return 10000
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"VEND_MAX_STATES must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError("VEND_MAX_STATES must be positive")
    return cap


# ---------------------------------------------------------------------------
# loading

def _load_source(source: str):
    """A config path, or example:NAME for a registered example with defaults."""
    if source.startswith("example:"):
        obj = make_example(source.split(":", 1)[1])
        if isinstance(obj, AtomTable):
            return None, obj
        return obj, None
    try:
        cfg = load(source)
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_config(cfg)


def _need_triple(triple: Triple | None) -> Triple:
    if triple is None:
        raise InputError("this command needs a triple (group, subgroup, f)")
    return triple


def _engine(triple, atoms) -> Engine:
    return Engine([triple] if triple is not None else [], atoms)


def _word(eng: Engine, text: str):
    try:
        return parse_word(eng, text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"cannot parse {text!r}: {exc.args[0] if exc.args else exc}") from None


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        try:
            out[key] = int(val)
        except ValueError:
            raise InputError(f"parameter {key} must be an integer") from None
    return out


# ---------------------------------------------------------------------------
# commands; each returns (exit code, result dict)

def cmd_check(args, triple, atoms):
    result = {}
    code = OK
    if triple is not None:
        rep = triple_validate(triple)
        result["triple"] = rep.to_json()
        if not rep.ok:
            code = FAILED
    if atoms is not None:
        eng = _engine(None, atoms)
        result["atoms"] = {"m": atoms.m, "names": sorted(atoms.atoms)}
        if atoms.presentation is not None:
            pres = eng.verify_presentation()
            result["presentation"] = pres
            if not pres["ok"]:
                code = FAILED
    return code, result


def cmd_repr(args, triple, atoms):
    eng = _engine(triple, atoms)
    a = _word(eng, args.element)
    if args.depth < 0 or eng.m ** args.depth > 10 ** 6:
        raise InputError("depth out of range")
    result = {"element": str(a), "depth": args.depth}
    kids, perm = eng.decompose(a)
    result["decomposition"] = {"children": [str(k) for k in kids], "perm": perm_cycles(perm)}
    if args.depth:
        result["level_perm"] = perm_cycles(eng.level_perm(a, args.depth))
        result["portrait"] = eng.portrait(a, args.depth).to_json()
    return OK, result


def cmd_states(args, triple, atoms):
    eng = _engine(triple, atoms)
    res = eng.states(_word(eng, args.element), args.max or default_cap())
    return (OK if res.finite else UNDECIDED), res.to_json()


def cmd_core(args, triple, atoms):
    rep = core_compute(_need_triple(triple), args.max_iter)
    return (OK if rep.exact else UNDECIDED), rep.to_json()


def cmd_simple(args, triple, atoms):
    rep = simplicity_decide(_need_triple(triple))
    return (UNDECIDED if rep.status == "Undecided" else OK), rep.to_json()


def cmd_strong(args, triple, atoms):
    rep = strong_simplicity(_need_triple(triple), args.bound)
    return (UNDECIDED if rep.verdict == "NoWitnessUpTo" else OK), rep.to_json()


def cmd_chain(args, triple, atoms):
    steps, reason = derived_chain(_need_triple(triple), args.steps)
    code = OK if len(steps) == args.steps + 1 or reason.startswith("stationary") else UNDECIDED
    return code, {"steps": [s.to_json() for s in steps], "reason": reason}


def cmd_predict(args, triple, atoms):
    rep = finite_state_predict(_need_triple(triple))
    return (UNDECIDED if rep["verdict"] == "Inapplicable" else OK), rep


def cmd_equal(args, triple, atoms):
    eng = _engine(triple, atoms)
    a, b = _word(eng, args.w1), _word(eng, args.w2)
    res = eng.equal(a, b, args.max_pairs or default_cap())
    code = {"Equal": OK, "NotEqual": FAILED, "Unknown": UNDECIDED}[res.verdict]
    return code, {"w1": str(a), "w2": str(b), **res.to_json()}


def cmd_indices(args, triple, atoms):
    t = _need_triple(triple)
    try:
        rows = [tuple(int(x) for x in r.split(",")) for r in args.subgroup]
    except ValueError:
        raise InputError("subgroup rows must be comma-separated integers") from None
    if any(len(r) != t.n for r in rows):
        raise InputError(f"subgroup rows must have {t.n} entries")
    u0 = tuple(int(x) for x in args.u0.split(",")) if args.u0 else None
    try:
        U = make_subgroup(t.G, hnf(rows, t.n), args.e, u0)
        rep = thm13_check(t, U).data
    except ValueError as exc:
        raise InputError(str(exc)) from None
    code = {"PairFound": OK, "Violated": FAILED, "Inapplicable": UNDECIDED}[rep["verdict"]]
    return code, rep


def cmd_bounds(args, triple, atoms):
    data = bounds_report(_need_triple(triple), args.bound).data
    failed = data["thm10"].get("holds") is False or data.get("thm15", {}).get("holds") is False
    return (FAILED if failed else OK), data


def _verify_one(name: str, params: dict, cap: int) -> dict:
    c = verify_example(name, params, max_pairs=cap)
    out = c.to_json()
    if name == "sec54":
        out["theta"] = [str(x) for x in theta_recurrence(params.get("n", example_params(name)["n"]))]
    return out


def cmd_example(args, triple, atoms):
    name = args.name
    if name not in EXAMPLES:
        raise InputError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}")
    params = _parse_params(args.params)
    extra = set(params) - set(example_params(name)) - {"steps", "bound"}
    if extra:
        raise InputError(f"example {name} takes no parameter(s) {sorted(extra)}")
    try:
        if not args.verify:
            build = {k: v for k, v in params.items() if k in example_params(name)}
            obj = make_example(name, **build)
            if isinstance(obj, AtomTable):
                return OK, serialize(None, obj)
            return OK, serialize(obj, None)
        out = _verify_one(name, params, default_cap())
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return (OK if out["pass"] else FAILED), out


def verify_all(workers: int | None = None) -> tuple[int, dict]:
    cap = default_cap()
    names = sorted(EXAMPLES)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {n: pool.submit(_verify_one, n, {}, cap) for n in names}
        results = {n: futures[n].result() for n in names}
    ok = all(r["pass"] for r in results.values())
    return (OK if ok else FAILED), {"examples": results, "pass": ok}


COMMANDS = {
    "check": cmd_check,
    "repr": cmd_repr,
    "states": cmd_states,
    "core": cmd_core,
    "simple": cmd_simple,
    "strong": cmd_strong,
    "chain": cmd_chain,
    "predict": cmd_predict,
    "equal": cmd_equal,
    "indices": cmd_indices,
    "bounds": cmd_bounds,
    "example": cmd_example,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilvend", description="Self-similar actions from virtual endomorphisms.")
    p.add_argument("--verify-all", action="store_true", help="verify every registered example")
    p.add_argument("--no-timings", action="store_true", help="omit timings from the report")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command")

    def with_cfg(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("cfg", help="config path, or example:NAME")
        return sp

    with_cfg("check", "validate a triple or atom table")
    sp = with_cfg("repr", "decomposition and portrait of an element")
    sp.add_argument("--element", required=True)
    sp.add_argument("--depth", type=int, default=2)
    sp = with_cfg("states", "state set of an element")
    sp.add_argument("--element", required=True)
    sp.add_argument("--max", type=int, default=None)
    sp = with_cfg("core", "f-core with exact or bounded result")
    sp.add_argument("--max-iter", type=int, default=32)
    with_cfg("simple", "simplicity via the centre")
    sp = with_cfg("strong", "search for nontrivial f-invariant subgroups")
    sp.add_argument("--bound", type=int, default=3)
    sp = with_cfg("chain", "derived triples G(i), H(i)")
    sp.add_argument("--steps", type=int, default=5)
    with_cfg("predict", "finite-state heuristic (abelian triples)")
    sp = with_cfg("equal", "bisimulation equality of two words")
    sp.add_argument("w1")
    sp.add_argument("w2")
    sp.add_argument("--max-pairs", type=int, default=None)
    sp = with_cfg("indices", "index relation for a subgroup U of H")
    sp.add_argument("--subgroup", nargs="+", required=True, metavar="ROW", help="lattice rows like 0,16")
    sp.add_argument("--e", type=int, default=0)
    sp.add_argument("--u0", default=None)
    sp = with_cfg("bounds", "numeric bounds and divisibility checks")
    sp.add_argument("--bound", type=int, default=3)
    sp = sub.add_parser("example", help="print or verify a registered example", parents=[common])
    sp.add_argument("name")
    sp.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    sp.add_argument("--verify", action="store_true")
    return p


def _digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:16]


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    t0 = time.perf_counter()
    try:
        if args.verify_all:
            command = "verify-all"
            inputs = {}
            code, result = verify_all()
        elif args.command is None:
            parser.print_help(sys.stderr)
            return INPUT_ERROR
        else:
            command = args.command
            triple = atoms = None
            if hasattr(args, "cfg"):
                triple, atoms = _load_source(args.cfg)
            inputs = {k: v for k, v in vars(args).items() if k not in ("no_timings", "verify_all")}
            if triple is not None or atoms is not None:
                inputs["config"] = serialize(triple, atoms)
            code, result = COMMANDS[command](args, triple, atoms)
    except (InputError, ConfigError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR
    report = {
        "command": command,
        "inputs_digest": _digest(inputs),
        "exit_code": code,
        "result": result,
    }
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 4)}
    out.write(dumps(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
