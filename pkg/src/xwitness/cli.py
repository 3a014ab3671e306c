"""Command-line interface.

Exit codes: 0 success, 1 negative verdict where a certificate was asked
for (or a failed fuzz invariant), 2 precondition violation, 3 I/O or parse
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

from . import oracle
from .exceptions import NotDecomposableError, NotFullyBiBlockPositiveError, XWitnessError
from .io import dense_to_list, dumps, staircase, xmatrix_from_dict, xmatrix_to_dict
from .multiindex import PartySet, position_string
from .witness import (
    classify_witness,
    construct_optimal,
    decompose,
    is_genuine_witness,
    split_bipartition,
)
from .xcore import XMatrix, pairing, to_dense
from .xstate import classify_state, detection_witness, regularize

DEFAULT_SEED = 0xC0FFEE
DEFAULT_TOL = 1e-9
DEFAULT_RESTARTS = 32

EXIT_OK, EXIT_NEGATIVE, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable or malformed input (exit 3)."""


def _default_seed() -> int:
    raw = os.environ.get("XWITNESS_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise InputError(f"XWITNESS_SEED={raw!r} is not an integer") from None


def parse_angle(text: str) -> float:
    """Float, or a multiple/fraction of pi such as ``pi``, ``-pi/2``, ``3*pi/4``."""
    text = text.strip().replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot read angle {text!r}")
    coef = m.group(1)
    coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
    denom = float(m.group(2)) if m.group(2) else 1.0
    return coef * math.pi / denom


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parties(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated parties, got {text!r}")


def _read_json(source: str) -> dict:
    try:
        if source == "-":
            text = sys.stdin.read()
        elif source.lstrip().startswith("{"):
            text = source
        else:
            text = Path(source).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {source[:60]!r}: {exc}") from None


def _load_matrix(source: str, role: str | None = None) -> XMatrix:
    data = _read_json(source)
    try:
        return xmatrix_from_dict(data, role)
    except (XWitnessError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from None


def _emit(args, payload: dict, text: str | None = None) -> None:
    out = dumps(payload) if args.format == "json" or text is None else text
    if args.out:
        Path(args.out).write_text(out + "\n")
    else:
        print(out)


def cmd_classify(args) -> int:
    X = _load_matrix(args.input, args.role)
    if args.role == "state" or (args.role is None and X.role == "state"):
        rep = classify_state(X.with_role("state"), normalized=not args.unnormalized, tol=args.tol)
        payload = {"role": "state", **rep.to_dict()}
        text = f"{rep.label}\n" + "\n".join(
            f"  {k}: {v}" for k, v in (("fully_bi_separable margin", rep.fully_bi_separable.margin),
                                       ("bi_separable margin", rep.bi_separable.margin)))
    else:
        rep = classify_witness(X, args.tol)
        payload = {"role": "witness", **rep.to_dict()}
        text = staircase(X) + "\n" + "\n".join(
            f"{k}: {v}" for k, v in payload.items() if k not in ("margins", "violations"))
    _emit(args, payload, text)
    return EXIT_OK


def cmd_optimal(args) -> int:
    i0 = args.i0 if args.i0 is not None else "0" * args.n
    scales = None
    if args.scales is not None:
        scales = args.scales[0] if len(args.scales) == 1 else args.scales
    W = construct_optimal(args.n, i0, args.theta, scales, args.r)
    _emit(args, xmatrix_to_dict(W), staircase(W))
    return EXIT_OK


def cmd_decompose(args) -> int:
    W = _load_matrix(args.input)
    if args.subset is not None:
        S = PartySet.of(W.n, args.subset)
        try:
            split = split_bipartition(W, S, args.tol)
        except NotFullyBiBlockPositiveError as exc:
            print(f"not fully bi-block positive: margin {exc.margin:.12g} at {exc.pair}",
                  file=sys.stderr)
            return EXIT_NEGATIVE
        _emit(args, split.to_dict())
        return EXIT_OK
    try:
        cert = decompose(W, args.tol)
    except NotDecomposableError as exc:
        print(f"not decomposable: margin {exc.margin:.12g}", file=sys.stderr)
        _emit(args, {"decomposable": False, "margin": exc.margin})
        return EXIT_NEGATIVE
    _emit(args, cert.to_dict())
    return EXIT_OK


def cmd_detect(args) -> int:
    rho = _load_matrix(args.state, "state")
    if args.epsilon:
        rho = regularize(rho, args.epsilon)
    if args.witness is not None:
        W = _load_matrix(args.witness, "witness")
        if W.n != rho.n:
            raise XWitnessError(f"state has n={rho.n}, witness has n={W.n}")
        value = pairing(rho, W)
        gew = is_genuine_witness(W, args.tol).holds
        payload = {"pairing": value, "witness_is_gew": gew,
                   "detected": bool(gew and value < -args.tol)}
    else:
        results = []
        for p in range(rho.size):
            W = detection_witness(rho, p)
            results.append({"index": position_string(rho.n, p), "pairing": pairing(rho, W)})
        best = min(results, key=lambda r: r["pairing"])
        payload = {"pairing": best["pairing"], "index": best["index"], "per_index": results,
                   "witness_is_gew": True, "detected": bool(best["pairing"] < -args.tol)}
    text = f"pairing: {payload['pairing']:.12g}"
    if payload["detected"]:
        text += "\nDETECTED: genuinely entangled"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    from .fuzz import run_fuzz
    if not 2 <= args.n <= 10:
        raise XWitnessError("fuzz needs 2 <= n <= 10")
    report = run_fuzz(args.n, args.trials, args.seed, args.restarts, args.inject_fault)
    _emit(args, report)
    return EXIT_OK if report["ok"] else EXIT_NEGATIVE


def cmd_export(args) -> int:
    X = _load_matrix(args.input)
    if args.format == "text":
        _emit(args, {}, staircase(X))
    else:
        _emit(args, {"n": X.n, "dense": dense_to_list(to_dense(X))})
    return EXIT_OK


def cmd_verify(args) -> int:
    W = _load_matrix(args.input)
    rep = oracle.verify_witness_numeric(W, restarts=args.restarts, seed=args.seed)
    _emit(args, rep.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="xwitness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a witness or a state")
    p.add_argument("input", help="JSON file, inline JSON or '-' for stdin")
    p.add_argument("--role", choices=("witness", "state"), default=None)
    p.add_argument("--unnormalized", action="store_true", help="skip the trace-one check")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("optimal", parents=[common], help="construct an optimal witness")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--i0", default=None)
    p.add_argument("--theta", type=parse_angle, default=math.pi)
    p.add_argument("--scales", type=_floats, default=None)
    p.add_argument("--r", type=float, default=1.0)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("decompose", parents=[common], help="decomposition certificate")
    p.add_argument("input")
    p.add_argument("--subset", type=_parties, default=None,
                   help="split W = P + Q^T(S) for this subset instead")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("detect", parents=[common], help="pair a state with a witness")
    p.add_argument("state")
    p.add_argument("--witness", default=None, help="witness JSON; omit for automatic witnesses")
    p.add_argument("--epsilon", type=float, default=0.0, help="mix the state with epsilon*I")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("fuzz", parents=[common], help="randomized invariant checks")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("export", parents=[common], help="dense matrix or staircase text")
    p.add_argument("input")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", parents=[common], help="numeric bi-product check")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except XWitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
