"""Batch command-line surface.

JSON on stdout for machines, a one-line summary on stderr for humans. Floats
are rounded to 12 significant digits before serialization and keys are sorted,
so identical configs produce byte-identical output.

Exit codes: 0 semistable/stable (or plain success), 2 parse/input error,
3 unstable, 4 unknown-sampled, 5 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import binaryforms, kempfness, planecurves, rep, stability
from .lattice import Cocharacter

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSTABLE = 3
EXIT_UNKNOWN = 4
EXIT_COMPUTE = 5


def _round12(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(payload: dict, out: str | None, summary: str) -> None:
    text = json.dumps(_round12(payload), sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    sys.stdout.write(text + "\n")
    sys.stderr.write(summary + "\n")


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON input {path}: {exc}") from exc


class InputError(ValueError):
    pass


def _load_pair(path: str) -> stability.Pair:
    data = _load_json(path)
    try:
        if "binary" in data:
            f = binaryforms.parse_form(data["binary"]["f"])
            g = binaryforms.parse_form(data["binary"]["g"])
            return stability.Pair(f.to_vector(), g.to_vector())
        return stability.Pair(
            rep.vector_from_json(data["v"]), rep.vector_from_json(data["w"])
        )
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad pair descriptor: {exc}") from exc


def _parse_lambda(text: str) -> Cocharacter:
    try:
        return Cocharacter([int(p) for p in text.replace(" ", "").split(",")])
    except ValueError as exc:
        raise InputError(f"bad cocharacter {text!r}") from exc


def cmd_check_pair(args) -> int:
    pair = _load_pair(args.input)
    if args.group_sampled:
        verdict = stability.group_verdict_sampled(pair, samples=args.samples, seed=args.seed)
        mode = "group-sampled"
    else:
        verdict = stability.pair_semistable_torus(pair)
        mode = "torus-exact"
    _emit(
        {"command": "check-pair", "mode": mode, "verdict": verdict.to_json()},
        args.out,
        f"check-pair [{mode}]: {verdict.status}",
    )
    if verdict.status == "unstable":
        return EXIT_UNSTABLE
    if verdict.status == "unknown-sampled":
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_destabilize(args) -> int:
    pair = _load_pair(args.input)
    lam = stability.destabilizer(pair)
    payload = {
        "command": "destabilize",
        "witness": list(lam.coords) if lam is not None else None,
    }
    if lam is not None:
        payload["weight_v"] = stability.weight(lam, pair.v)
        payload["weight_w"] = stability.weight(lam, pair.w)
    _emit(payload, args.out, f"destabilize: {'found ' + str(payload['witness']) if lam else 'none'}")
    return EXIT_OK


def cmd_kn_profile(args) -> int:
    pair = _load_pair(args.input)
    lam = _parse_lambda(args.cocharacter)
    grid = [float(t) for t in args.t_grid.split(",")]
    profile = kempfness.ray_profile(pair, lam, grid)
    if args.emit_csv:
        lines = ["t,energy"] + [f"{t:.12g},{e:.12g}" for t, e in profile]
        Path(args.emit_csv).write_text("\n".join(lines) + "\n")
    _emit(
        {
            "command": "kn-profile",
            "lambda": list(lam.coords),
            "profile": [[t, e] for t, e in profile],
        },
        args.out,
        f"kn-profile: {len(profile)} grid points along {list(lam.coords)}",
    )
    return EXIT_OK


def cmd_kn_inf(args) -> int:
    pair = _load_pair(args.input)
    est = kempfness.infimum_estimate(
        pair, iterations=args.iterations, restarts=args.restarts, seed=args.seed
    )
    _emit(
        {
            "command": "kn-inf",
            "value": est.value,
            "diverged": est.diverged,
            "evaluations": len(est.trace),
        },
        args.out,
        f"kn-inf: best {est.value:.6g}{' (diverged)' if est.diverged else ''}",
    )
    return EXIT_OK


def cmd_chow(args) -> int:
    curve = planecurves.PlaneCurve.from_string(args.curve)
    chow = planecurves.chow_form(curve)
    _emit(
        {
            "command": "chow",
            "degree": chow.degree,
            "polynomial": str(chow.expr),
            "support": [list(s) for s in chow.support()],
        },
        args.out,
        f"chow: degree {chow.degree}",
    )
    return EXIT_OK


def cmd_dual(args) -> int:
    curve = planecurves.PlaneCurve.from_string(args.curve)
    dual = planecurves.hyperdiscriminant(curve)
    _emit(
        {
            "command": "dual",
            "degree": dual.degree,
            "polynomial": str(dual.expr),
            "support": [list(s) for s in dual.support()],
        },
        args.out,
        f"dual: degree {dual.degree}",
    )
    return EXIT_OK


def cmd_futaki(args) -> int:
    curve = planecurves.PlaneCurve.from_string(args.curve)
    lam = _parse_lambda(args.cocharacter)
    if lam.is_trivial:
        payload = {"command": "futaki", "lambda": list(lam.coords), "futaki": 0,
                   "k_stability": "antecedent-vacuous"}
        _emit(payload, args.out, "futaki: 0 (trivial lambda)")
        return EXIT_OK
    verdict = planecurves.k_stability_along(curve, lam)
    _emit(
        {
            "command": "futaki",
            "lambda": list(lam.coords),
            "futaki": verdict.futaki,
            "k_stability": verdict.status,
            "weights": verdict.to_json(),
        },
        args.out,
        f"futaki: {verdict.futaki} ({verdict.status})",
    )
    return EXIT_OK


def cmd_deg(args) -> int:
    data = _load_json(args.input)
    try:
        spec = rep.rep_from_json(data)
        value = stability.deg_of_rep(spec)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad representation descriptor: {exc}") from exc
    _emit({"command": "deg", "family": spec.family, "deg": value}, args.out, f"deg: {value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairstab", description="stability of pairs: exact verdicts and energy probes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="JSON descriptor file")
        p.add_argument("--out", default=None, help="also write the JSON payload here")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("check-pair", help="torus-exact or sampled stability verdict")
    common(p)
    p.add_argument("--group-sampled", action="store_true")
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_check_pair)

    p = sub.add_parser("destabilize", help="explicit destabilizing cocharacter, if any")
    common(p)
    p.set_defaults(func=cmd_destabilize)

    p = sub.add_parser("kn-profile", help="energy profile along a one-parameter subgroup")
    common(p)
    p.add_argument("--lambda", dest="cocharacter", required=True, help="e.g. 1,-1")
    p.add_argument("--t-grid", default="1e-6,1e-4,1e-2,1,10")
    p.add_argument("--emit-csv", default=None)
    p.set_defaults(func=cmd_kn_profile)

    p = sub.add_parser("kn-inf", help="descent upper bound for the energy infimum")
    common(p)
    p.add_argument("--iterations", type=int, default=60)
    p.add_argument("--restarts", type=int, default=4)
    p.set_defaults(func=cmd_kn_inf)

    p = sub.add_parser("chow", help="Chow form of a plane curve")
    common(p, needs_input=False)
    p.add_argument("--curve", required=True, help="e.g. 'x*z - y**2'")
    p.set_defaults(func=cmd_chow)

    p = sub.add_parser("dual", help="hyperdiscriminant (dual curve)")
    common(p, needs_input=False)
    p.add_argument("--curve", required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("futaki", help="Futaki number and K-criterion at one lambda")
    common(p, needs_input=False)
    p.add_argument("--curve", required=True)
    p.add_argument("--lambda", dest="cocharacter", required=True, help="e.g. 1,0,-1")
    p.set_defaults(func=cmd_futaki)

    p = sub.add_parser("deg", help="deg(V) of a representation descriptor")
    common(p)
    p.set_defaults(func=cmd_deg)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # computation errors map to exit 5
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
