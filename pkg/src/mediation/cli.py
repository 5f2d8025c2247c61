"""Command line entry point.

Exit codes: 0 success, 1 domain failure (invalid model, incompatible
protocols, failed verification), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .decompose import DecomposeConfig, enumerate_traces
from .lts import Lts, LtsError, export_dot, linear_lts, parse_lts, parse_trace, serialize_lts, validate
from .mismatch import AlignConfig, StepKind, match_components
from .semantics import parse_map
from .synthesis import synthesize
from .verify import DEFAULT_CAP, StateSpaceExceeded, check, parallel_compose, simulate

OK, FAILED, USAGE = 0, 1, 2
DEFAULT_RUN_DIR = "mediation-run"


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def load_model(path: str) -> Lts:
    """Read a ``.lts`` machine or wrap a ``.trace`` file into a linear one."""
    text = _read(path)
    try:
        if path.endswith(".trace"):
            return linear_lts(parse_trace(text), name=Path(path).stem)
        return parse_lts(text)
    except LtsError as e:
        raise InputError(f"{path}: {e}") from None


def load_map(path: str):
    try:
        return parse_map(_read(path))
    except ValueError as e:
        raise InputError(f"{path}: {e}") from None


def _require_valid(lts: Lts, path: str):
    problems = validate(lts)
    if problems:
        raise InputError(f"{path}: invalid LTS: " + "; ".join(problems))


def _cost(text: str) -> tuple[str, int]:
    kind, sep, value = text.partition("=")
    try:
        StepKind(kind.lower())
        return kind.lower(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected KIND=N with KIND one of {[k.value for k in StepKind]}")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _non_negative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _configs(args) -> tuple[DecomposeConfig, AlignConfig]:
    try:
        dcfg = DecomposeConfig(args.unroll, args.max_traces)
        acfg = AlignConfig.from_overrides(args.reorder_window, dict(args.cost or []))
    except ValueError as e:
        raise InputError(str(e)) from None
    return dcfg, acfg


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    p.write_text(text, encoding="utf-8")
    return p


def _emit(args, name: str, text: str):
    if getattr(args, "out", None):
        _write(Path(args.out), name, text)
    sys.stdout.write(text)


def cmd_validate(args) -> int:
    status = OK
    for path in args.paths:
        if path.endswith(".map"):
            load_map(path)
            print(f"{path}: ok")
            continue
        lts = load_model(path)
        problems = validate(lts)
        if problems:
            status = FAILED
            for p in problems:
                print(f"{path}: {p}")
        else:
            print(f"{path}: ok")
    return status


def cmd_decompose(args) -> int:
    dcfg, _ = _configs(args)
    lts = load_model(args.lts)
    _require_valid(lts, args.lts)
    ts = enumerate_traces(lts, dcfg)
    text = "".join((str(t) or "(empty)") + "\n" for t in ts)
    if ts.truncated:
        print(f"warning: trace set truncated at {dcfg.max_traces}", file=sys.stderr)
    _emit(args, "traces.txt", text)
    return OK


def _traces(path: str, dcfg: DecomposeConfig):
    lts = load_model(path)
    _require_valid(lts, path)
    ts = enumerate_traces(lts, dcfg)
    if ts.truncated:
        raise InputError(f"{path}: more than {dcfg.max_traces} traces (raise --max-traces)")
    return lts, ts


def cmd_match(args) -> int:
    dcfg, acfg = _configs(args)
    _, lt = _traces(args.left, dcfg)
    _, rt = _traces(args.right, dcfg)
    matrix = match_components(lt.traces, rt.traces, load_map(args.map), acfg)
    _emit(args, "report.txt", matrix.render())
    return OK if matrix.potentially_compatible else FAILED


def cmd_synthesize(args) -> int:
    dcfg, acfg = _configs(args)
    left, lt = _traces(args.left, dcfg)
    right, rt = _traces(args.right, dcfg)
    cmap = load_map(args.map)
    syn = synthesize(left, right, cmap, dcfg, acfg, loop=args.loop)
    out = Path(args.out or DEFAULT_RUN_DIR)
    _write(out, "report.txt", syn.matrix.render())
    manifest = {
        "tool": "mediation",
        "version": __version__,
        "command": "synthesize",
        "inputs": {
            role: {"path": p, "sha256": hashlib.sha256(Path(p).read_bytes()).hexdigest()}
            for role, p in (("left", args.left), ("right", args.right), ("map", args.map))
        },
        "config": {
            "unroll": dcfg.unroll_bound,
            "max_traces": dcfg.max_traces,
            "reorder_window": acfg.reorder_window,
            "costs": {k.value: v for k, v in acfg.costs.items()},
            "loop": args.loop,
        },
        "compatible": syn.compatible,
    }
    if not syn.compatible:
        _write(out, "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        print("not potentially compatible")
        for row in syn.matrix.results:
            for r in row:
                print(f"  frontier {r.frontier[0]},{r.frontier[1]}: {r.reason}")
        return FAILED
    _write(out, "mediator.lts", serialize_lts(syn.mediator))
    _write(out, "mediator.dot", export_dot(syn.mediator))
    manifest["outputs"] = ["mediator.lts", "mediator.dot", "report.txt"]
    _write(out, "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(
        f"mediator: {len(syn.mediator.states)} states, {len(syn.mediator.transitions)} transitions, "
        f"{len(syn.mediator_traces)} traces -> {out}"
    )
    return OK


def _three(args):
    machines = []
    for path in (args.left, args.mediator, args.right):
        lts = load_model(path)
        _require_valid(lts, path)
        machines.append(lts)
    return machines


def cmd_verify(args) -> int:
    left, med, right = _three(args)
    try:
        product = parallel_compose(left, med, right)
    except ValueError as e:
        raise InputError(str(e)) from None
    report = check(product, cap=args.cap)
    _emit(args, "verify.txt", report.render())
    return OK if report.ok else FAILED


def cmd_simulate(args) -> int:
    left, med, right = _three(args)
    script = None
    if args.script:
        try:
            script = [int(x) for x in args.script.split(",")]
        except ValueError:
            raise InputError("--script expects comma-separated integers") from None
    try:
        log = simulate(left, med, right, script=script, seed=args.seed)
    except (IndexError, ValueError) as e:
        raise InputError(str(e)) from None
    _emit(args, "simulation.txt", log.render())
    return OK if log.outcome == "ALL FINAL" else FAILED


def cmd_export_dot(args) -> int:
    lts = load_model(args.lts)
    _require_valid(lts, args.lts)
    _emit(args, Path(args.lts).stem + ".dot", export_dot(lts))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--unroll", type=_non_negative, default=1, help="times a path may revisit a state")
    common.add_argument("--max-traces", type=_positive, default=1000)
    common.add_argument("--reorder-window", type=_positive, default=4)
    common.add_argument("--cost", type=_cost, action="append", metavar="KIND=N")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="product state-space cap")
    common.add_argument("--seed", type=int, default=None)
    # parents share action objects, so per-command defaults for --out live in the handlers
    common.add_argument("--out", default=None, help="output directory (synthesize: mediation-run)")

    parser = argparse.ArgumentParser(prog="mediation", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check .lts/.trace/.map files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", parents=[common], help="list elementary traces")
    p.add_argument("lts")
    p.set_defaults(func=cmd_decompose)

    for name, func, helptext in (
        ("match", cmd_match, "align every trace pair and report mismatches"),
        ("synthesize", cmd_synthesize, "build the mediator"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("map")
        p.set_defaults(func=func)
    p.add_argument("--loop", action="store_true", help="return to the root after each completed trace")

    for name, func, helptext in (
        ("verify", cmd_verify, "check the closed system"),
        ("simulate", cmd_simulate, "run one interleaving"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("left")
        p.add_argument("mediator")
        p.add_argument("right")
        p.set_defaults(func=func)
    p.add_argument("--script", help="comma-separated choice indices")

    p = sub.add_parser("export-dot", parents=[common], help="render a machine as graphviz dot")
    p.add_argument("lts")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except StateSpaceExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
