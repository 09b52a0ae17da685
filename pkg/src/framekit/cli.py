"""Command-line front end.

Every command prints one JSON report ``{command, inputs, outcome, exit_code}``
with sorted keys and exits with ``exit_code``:

    0   success / expected outcome
    1   a check or verification did not pass
    2   necessary conditions fail
    3   condition (II) fails, no single extra pair
    4   internal construction error
    5   cascade did not converge
    64  usage error
    65  malformed input
    66  input file unreadable
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .algebra import GaussianRational, ParseError
from .extension import (
    DEMO_NAMES,
    ConditionIIFails,
    ExtensionError,
    MaskSystem,
    NecessaryConditionsFail,
    UnknownDemo,
    Verdict,
    b2_system,
    b2_three_term_criterion,
    condition_II_holds,
    demo_registry,
    extend_one_pair,
    extend_two_pairs,
    mep_verify,
    run_demo,
)
from .masks import SetupViolated, compute_m_alpha_beta, necessary_conditions
from .render import (
    DEFAULT_JMAX,
    DEFAULT_JMIN,
    DEFAULT_LEVEL,
    DEFAULT_MAX_ITER,
    DEFAULT_SAMPLES,
    DEFAULT_TOL,
    ComplexMask,
    NonConvergence,
    mep_residual_float,
    reconstruction_experiment,
    render_system,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NECESSARY = 2
EXIT_CONDITION_II = 3
EXIT_INTERNAL = 4
EXIT_NONCONVERGENCE = 5
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66

SEED_ENV = "FRAMEKIT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _clean(obj):
    """Make floats JSON-safe: non-finite values become strings."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


def _report(command: str, inputs: dict, outcome, code: int) -> tuple[dict, int]:
    return {"command": command, "inputs": inputs, "outcome": outcome, "exit_code": code}, code


# input loading --------------------------------------------------------------------


def _unwrap(data):
    """Accept a bare system, an extension outcome, or a full extend report."""
    if isinstance(data, dict) and isinstance(data.get("outcome"), dict):
        data = data["outcome"]
    if isinstance(data, dict) and isinstance(data.get("system"), dict):
        data = data["system"]
    return data


def _load_system(args) -> tuple[MaskSystem, dict]:
    if args.input is not None:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read {args.input}: {exc.strerror or exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.input}: invalid JSON ({exc.msg})") from None
        return MaskSystem.from_json(_unwrap(data)), {"input": str(args.input)}
    demo = demo_registry(args.demo, args.l)
    inputs = {"demo": args.demo}
    if args.demo == "b2l-two-pairs":
        inputs["l"] = args.l
    return demo.system, inputs


# commands ------------------------------------------------------------------------


def cmd_check(args):
    sys_, inputs = _load_system(args)
    rep = necessary_conditions(sys_.m0, sys_.mt0, sys_.gens[0], sys_.tgens[0], require_setup=False)
    return _report("check", inputs, rep.to_json(), EXIT_OK if rep.all_pass else EXIT_FAIL)


def cmd_extend(args):
    sys_, inputs = _load_system(args)
    inputs["mode"] = args.mode
    m0, mt0, m1, mt1 = sys_.m0, sys_.mt0, sys_.gens[0], sys_.tgens[0]
    build = extend_one_pair if args.mode == "one" else extend_two_pairs
    try:
        out = build(m0, mt0, m1, mt1)
    except ExtensionError as exc:
        return _report("extend", inputs, *_extension_failure(exc))
    return _report("extend", inputs, out.to_json(), EXIT_OK)


def _extension_failure(exc: ExtensionError) -> tuple[dict, int]:
    if isinstance(exc, NecessaryConditionsFail):
        return {"error": "NecessaryConditionsFail", "necessary": exc.report.to_json()}, EXIT_NECESSARY
    if isinstance(exc, ConditionIIFails):
        return {"error": "ConditionIIFails", "m_alpha": exc.ma.to_json(), "m_beta": exc.mb.to_json()}, EXIT_CONDITION_II
    return {"error": type(exc).__name__, "message": str(exc)}, EXIT_INTERNAL


def cmd_verify(args):
    sys_, inputs = _load_system(args)
    rep = mep_verify(sys_)
    return _report("verify", inputs, rep.to_json(), EXIT_OK if rep.verdict is Verdict.DUAL_FRAMES else EXIT_FAIL)


def cmd_render(args):
    if args.jmin > args.jmax:
        raise UsageError(f"--jmin {args.jmin} exceeds --jmax {args.jmax}")
    if args.level < 1:
        raise UsageError("--level must be >= 1")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    sys_, inputs = _load_system(args)
    inputs.update(level=args.level, jmin=args.jmin, jmax=args.jmax, tol=args.tol, samples=args.samples,
                  out=None if args.out is None else str(args.out), extend=args.extend)
    if args.extend is not None:
        build = extend_one_pair if args.extend == "one" else extend_two_pairs
        try:
            sys_ = build(sys_.m0, sys_.mt0, sys_.gens[0], sys_.tgens[0]).system
        except ExtensionError as exc:
            return _report("render", inputs, *_extension_failure(exc))

    verdict = mep_verify(sys_).verdict
    r1, r2 = mep_residual_float(sys_, args.samples)
    outcome: dict = {"verdict": verdict.value, "mep_residual_float": [r1, r2]}
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NonConvergence)
            rendered = render_system(sys_, args.level, args.tol, DEFAULT_MAX_ITER)
    except ComplexMask as exc:
        outcome["error"] = "ComplexMask"
        outcome["message"] = str(exc)
        return _report("render", inputs, outcome, EXIT_FAIL)
    notes = [str(w.message) for w in caught if issubclass(w.category, NonConvergence)]
    outcome["cascade"] = {"phi": rendered.phi.info, "phit": rendered.phit.info}
    outcome["non_convergence"] = notes

    files = {"phi.csv": rendered.phi, "phit.csv": rendered.phit}
    for i, (p, q) in enumerate(zip(rendered.psis, rendered.psits), start=1):
        files[f"psi{i}.csv"] = p
        files[f"psit{i}.csv"] = q

    recon = None
    if verdict is Verdict.DUAL_FRAMES and not notes:
        recon = reconstruction_experiment(sys_, args.level, args.jmin, args.jmax, tol=args.tol)
    outcome["reconstruction"] = recon

    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, fn in files.items():
            fn.to_csv(out / name)
        if recon is not None:
            (out / "reconstruction.json").write_text(dumps(recon) + "\n", encoding="utf-8")
        outcome["files"] = sorted(files) + (["reconstruction.json"] if recon is not None else [])

    if notes:
        code = EXIT_NONCONVERGENCE
    elif verdict is not Verdict.DUAL_FRAMES:
        code = EXIT_FAIL
    else:
        code = EXIT_OK
    return _report("render", inputs, outcome, code)


def cmd_demo(args):
    name = args.name
    inputs = {"name": name, "l": args.l}
    if name == "list":
        listing = [{"name": n, "tag": demo_registry(n).tag.value, "description": demo_registry(n).description}
                   for n in DEMO_NAMES]
        return _report("demo", inputs, {"demos": listing}, EXIT_OK)
    names = DEMO_NAMES if name == "all" else (name,)
    results = [run_demo(demo_registry(n, args.l)).to_json() for n in names]
    ok = all(r["matched"] for r in results)
    outcome = {"results": results} if name == "all" else results[0]
    return _report("demo", inputs, outcome, EXIT_OK if ok else EXIT_FAIL)


def _random_gaussian(rng: random.Random, bound: int) -> GaussianRational:
    def part():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    return GaussianRational(part(), part())


def random_quadruple(rng: random.Random, bound: int = 16, on_criterion: float = 0.5):
    """Random ``(d0, d1, dt0, dt1)``; with probability ``on_criterion`` solve for ``dt1``
    so the closed-form criterion equals 2 (when it can be solved)."""
    d0, d1, dt0, dt1 = (_random_gaussian(rng, bound) for _ in range(4))
    if rng.random() < on_criterion:
        # criterion is affine in dt1 with slope 3 conj(d1) - conj(d0)
        slope = 3 * d1.conj() - d0.conj()
        if slope:
            rest = 3 * d0.conj() * dt0 - d1.conj() * dt0
            dt1 = (GaussianRational(2) - rest) * slope.inverse()
    return d0, d1, dt0, dt1


def cmd_corollary(args):
    seed = os.environ.get(SEED_ENV, "0")
    try:
        seed_val = int(seed)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {seed!r}") from None
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    rng = random.Random(seed_val)
    agree = 0
    on = 0
    mismatches = []
    for _ in range(args.count):
        q = random_quadruple(rng, args.bound)
        ok, value = b2_three_term_criterion(*q)
        s = b2_system(*q)
        ma, mb = compute_m_alpha_beta(s.m0, s.mt0, s.gens[0], s.tgens[0])
        c2 = condition_II_holds(ma, mb)
        on += ok
        if c2 == ok:
            agree += 1
        else:
            mismatches.append({"quadruple": [str(x) for x in q], "criterion": str(value), "condition_II": c2})
    outcome = {"seed": seed_val, "cases": args.count, "agree": agree, "criterion_equals_2": on,
               "mismatches": mismatches}
    return _report("corollary", {"count": args.count, "bound": args.bound}, outcome,
                   EXIT_OK if agree == args.count else EXIT_FAIL)


# wiring -------------------------------------------------------------------------


def _source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", type=Path, help="mask-system JSON file")
    g.add_argument("--demo", help="use the system of a named demo")
    p.add_argument("--l", type=int, default=2, help="ell for b2l-two-pairs (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="framekit", description="Exact extension and verification of dual wavelet frame masks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="evaluate the necessary conditions")
    _source(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("extend", help="add one or two pairs of wavelet masks")
    _source(p)
    p.add_argument("--mode", choices=("one", "two"), default="one")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="exact matrix-identity and Bessel check")
    _source(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="sample all functions and run a reconstruction experiment")
    _source(p)
    p.add_argument("--level", type=int, default=DEFAULT_LEVEL)
    p.add_argument("--jmin", type=int, default=DEFAULT_JMIN)
    p.add_argument("--jmax", type=int, default=DEFAULT_JMAX)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--out", type=Path, help="directory for CSV and JSON output")
    p.add_argument("--extend", choices=("one", "two"), help="complete the system with extra masks first")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("demo", help="run a named example ('list' or 'all' also work)")
    p.add_argument("name")
    p.add_argument("--l", type=int, default=2)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("corollary", help=f"randomized B2 criterion check, seeded by ${SEED_ENV}")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--bound", type=int, default=16)
    p.set_defaults(func=cmd_corollary)
    return parser


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    """Parse and dispatch; returns the report and exit code without printing."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "l", 2) < 2:
            raise UsageError("--l must be >= 2")
        return args.func(args)
    except UsageError as exc:
        return _report(argv[0] if argv else "", {"argv": argv}, {"error": "UsageError", "message": str(exc)},
                       EXIT_USAGE)
    except UnknownDemo as exc:
        msg = f"unknown demo {exc.args[0]!r}; known: {', '.join(DEMO_NAMES)}"
        return _report(argv[0], {"argv": argv}, {"error": "UnknownDemo", "message": msg}, EXIT_USAGE)
    except (ParseError, SetupViolated) as exc:
        return _report(argv[0], {"argv": argv}, {"error": type(exc).__name__, "message": str(exc)}, EXIT_DATAERR)
    except OSError as exc:
        return _report(argv[0], {"argv": argv}, {"error": "IoError", "message": str(exc)}, EXIT_NOINPUT)


def main(argv: list[str] | None = None) -> int:
    report, code = run(argv)
    sys.stdout.write(dumps(report) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
