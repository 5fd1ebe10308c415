"""Command-line interface.

    covrecon reconstruct {binary-odd,binary-even,sum64,genus3,genus4} [options]
    covrecon selftest [--level quick|full] [--seed N]

Exit codes: 0 verified reconstruction, 2 typed mathematical failure,
1 input error (or an unverified reconstruction).
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import CovreconError, MathematicalFailure, ParseError, Unsupported
from .fields import format_scalar
from .poly import Form, format_form, lift, parse_form, primal
from .quadrics import DEFAULT_HEIGHT_BOUND
from .recon import scale_to
from . import pipelines

KINDS = ("binary-odd", "binary-even", "sum64", "genus3", "genus4")


def _read(text: str, n: int, name: str) -> Form:
    """Parse a form in ``n`` variables written with ``x`` or ``X`` letters."""
    spaces = (lift(n),) if "X" in text else (primal(n),)
    try:
        f = parse_form(text, spaces)
    except ParseError as exc:
        raise ParseError(f"{name}: {exc.message}", exc.position, text) from exc
    return f.relabel((primal(n),)) if n < 4 else f


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ParseError(f"missing option(s): {', '.join('--' + m for m in missing)}")


def _fmt(x):
    return None if x is None else format_scalar(x)


def _expect(outputs, texts):
    """Scaling factors ``c`` with ``output_i = c * expect_i`` (``None`` if not proportional)."""
    out = []
    for g, text in zip(outputs, texts):
        ref = parse_form(text, g.spaces)
        c = scale_to(ref, g)
        out.append({"form": format_form(ref), "scale": _fmt(c), "proportional": c is not None})
    return out


def _run_reconstruct(args):
    kind = args.kind
    hb = args.height_bound
    job = {"command": "reconstruct", "kind": kind, "seed": args.seed, "height_bound": hb}
    if kind in ("binary-odd", "binary-even"):
        _require(args, "form")
        f = _read(args.form, 2, "--form")
        job["inputs"] = {"form": format_form(f)}
        if kind == "binary-odd":
            res = pipelines.reconstruct_binary_odd(f, normalize=not args.raw)
        else:
            res = pipelines.reconstruct_binary_even(f, hb, normalize=not args.raw)
        outputs = {"form": res.output}
    elif kind == "sum64":
        _require(args, "form6", "form4")
        f6, f4 = _read(args.form6, 2, "--form6"), _read(args.form4, 2, "--form4")
        job["inputs"] = {"form6": format_form(f6), "form4": format_form(f4)}
        res = pipelines.reconstruct_sum_6_4(f6, f4, hb)
        outputs = {"form6": res.output[0], "form4": res.output[1]}
    elif kind == "genus3":
        _require(args, "form")
        F = _read(args.form, 3, "--form")
        job["inputs"] = {"form": format_form(F)}
        res = pipelines.reconstruct_genus3(F, normalize=not args.raw)
        outputs = {"form": res.output}
    else:
        if args.form6 is not None or args.form4 is not None:
            _require(args, "form6", "form4")
            f6, f4 = _read(args.form6, 2, "--form6"), _read(args.form4, 2, "--form4")
            job["inputs"] = {"form6": format_form(f6), "form4": format_form(f4)}
            res = pipelines.reconstruct_genus4_rank3(f6, f4, hb)
        else:
            _require(args, "quadric", "cubic")
            Q, E = _read(args.quadric, 4, "--quadric"), _read(args.cubic, 4, "--cubic")
            job["inputs"] = {"quadric": format_form(Q), "cubic": format_form(E)}
            res = pipelines.reconstruct_genus4_rank4(Q, E, hb, normalize=not args.raw,
                                                     seed=args.seed)
        outputs = {"Q": res.output.Q, "E": res.output.E}
    if args.battery and res.fingerprint_in and args.battery != res.fingerprint_in.battery:
        raise ParseError(f"battery {args.battery!r} does not match input shape "
                         f"(uses {res.fingerprint_in.battery!r})")
    results = {k: format_form(v) for k, v in outputs.items()}
    covs = res.meta.get("covariants", [])
    report = {
        "job": job,
        "results": results,
        "provenance": {
            "covariants": covs,
            "covariant_values": [format_form(q) for q in res.covariants],
            "extension": str(res.extension) if res.extension else None,
            "normalization": res.meta.get("normalization"),
            "battery": res.fingerprint_in.battery if res.fingerprint_in else None,
        },
        "verdict": {
            "status": "VERIFIED" if res.verified else "FAILED",
            "fingerprint_scale": _fmt(res.scale),
        },
    }
    if "certification" in res.meta:
        report["provenance"]["certification"] = res.meta["certification"]
    if args.expect:
        report["verdict"]["expect"] = _expect(list(outputs.values()), args.expect)
    return report, (0 if res.verified else 1)


def _run_selftest(args):
    from .selftest import run_selftest
    suites = run_selftest(args.level, args.seed)
    report = {
        "job": {"command": "selftest", "level": args.level, "seed": args.seed},
        "results": {name: ("PASS" if not fails else f"FAIL {fails}") for name, fails in suites},
        "verdict": {"status": "PASS" if all(not f for _, f in suites) else "FAIL"},
    }
    return report, (0 if report["verdict"]["status"] == "PASS" else 1)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, "none" if obj is None else str(obj)


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2)
    return "\n".join(f"{k}: {v}" for k, v in _flatten(report))


def build_parser():
    p = argparse.ArgumentParser(prog="covrecon",
                                description="Reconstruct forms and curves from covariants.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("reconstruct", help="run a reconstruction pipeline")
    r.add_argument("kind", choices=KINDS)
    r.add_argument("--form", help="binary form or ternary quartic")
    r.add_argument("--form6", help="binary sextic (sum64, rank-3 genus4)")
    r.add_argument("--form4", help="binary quartic (sum64, rank-3 genus4)")
    r.add_argument("--quadric", help="quadric in X0..X3 (genus4)")
    r.add_argument("--cubic", help="cubic in X0..X3 (genus4)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--height-bound", type=int, default=DEFAULT_HEIGHT_BOUND)
    r.add_argument("--battery", help="fingerprint battery id (checked against the input)")
    r.add_argument("--expect", action="append",
                   help="reference form for an output, in output order; repeatable")
    r.add_argument("--raw", action="store_true",
                   help="skip output normalization (keeps the covariant scaling)")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--no-timings", action="store_true", help="omit timings (byte-stable output)")
    s = sub.add_parser("selftest", help="run the identity suites")
    s.add_argument("--level", choices=("quick", "full"), default="full")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--no-timings", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "reconstruct":
            report, code = _run_reconstruct(args)
        else:
            report, code = _run_selftest(args)
    except (MathematicalFailure, Unsupported) as exc:
        report, code = _error_report(args, exc), 2
    except CovreconError as exc:
        report, code = _error_report(args, exc), 1
    if not args.no_timings:
        report["timings"] = {"total_s": f"{time.perf_counter() - t0:.3f}"}
    print(render(report, args.format))
    return code


def _error_report(args, exc):
    err = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("position", "family", "delta", "rank", "bound"):
        v = getattr(exc, attr, None)
        if v is not None:
            err[attr] = v if isinstance(v, (int, str)) else str(v)
    job = {"command": args.command}
    if args.command == "reconstruct":
        job["kind"] = args.kind
    return {"job": job, "error": err, "verdict": {"status": "ERROR"}}


if __name__ == "__main__":
    sys.exit(main())
