"""Command-line front end.

Every subcommand prints JSON on stdout except ``region``, which emits CSV
(and optionally renders a figure next to it). Exit codes are the machine
channel: 0 success/possible, 1 malformed input, 2 invalid state file,
3 negative decision (decide only), 4 oracle disagreement beyond the margin
band (oracle-check only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import criteria, oracle, states
from .channels import GaussianCPMap, System1Map
from .exceptions import GaussOrderError, InvalidStateError
from .states import CovarianceMatrix, InvariantVector

__all__ = ["main", "run"]

#: Oracle agreement is only demanded when the decision margin clears this.
MARGIN_BAND = 1e-6


class _CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit 1 instead of 2."""

    def error(self, message):
        raise _CLIError(1, message)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _CLIError(1, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _CLIError(1, f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise _CLIError(1, f"{path}: top-level JSON value must be an object")
    return data


def _load_state(path: str) -> CovarianceMatrix:
    """State file: JSON object with exactly one of "covariance" or "xi"."""
    data = _load_json(path)
    keys = set(data)
    if len(keys & {"covariance", "xi"}) != 1 or keys - {"covariance", "xi"}:
        raise _CLIError(
            1, f'{path}: state object must have exactly one of "covariance" or "xi"'
        )
    try:
        if "covariance" in data:
            matrix = np.asarray(data["covariance"], dtype=float)
            if matrix.shape == (16,):
                matrix = matrix.reshape(4, 4)
            if matrix.shape != (4, 4):
                raise _CLIError(1, f"{path}: covariance must be a 4x4 matrix")
            return CovarianceMatrix(matrix)
        xi = [float(v) for v in data["xi"]]
        if len(xi) != 4:
            raise _CLIError(1, f"{path}: xi must have exactly 4 entries")
        return states.from_xi(xi)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GaussOrderError):
            raise
        raise _CLIError(1, f"{path}: malformed numbers: {exc}") from exc


def _print_json(payload) -> None:
    print(json.dumps(payload))


def _xi_list(xi: InvariantVector) -> list[float]:
    return [xi.xi1, xi.xi2, xi.xi3, xi.xi4]


def _build_parser() -> _Parser:
    parser = _Parser(prog="gaussorder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a state file and print its invariants")
    p.add_argument("file")

    p = sub.add_parser("invariants", help="print the invariant vector of a state")
    p.add_argument("file")

    p = sub.add_parser("reduce", help="print a normal-form reduction of a state")
    p.add_argument("file")

    p = sub.add_parser("decide", help="decide whether source -> target is possible")
    p.add_argument("--from", dest="source", required=True, metavar="FILE")
    p.add_argument("--to", dest="target", required=True, metavar="FILE")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--local", type=int, choices=(1, 2), help="one-sided decision")
    kind.add_argument("--general", action="store_true", help="general decision (default)")
    p.add_argument("--tol", type=float, default=states.DEFAULT_TOL)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="degenerate branch verbatim (default)")
    mode.add_argument(
        "--reflexive-closure",
        action="store_true",
        help="accept exact self-transformations in the degenerate branch",
    )
    p.add_argument("--witness-out", metavar="FILE", help="write the witness map JSON here")

    p = sub.add_parser("compare", help="classify mutual convertibility of two states")
    p.add_argument("--a", dest="a", required=True, metavar="FILE")
    p.add_argument("--b", dest="b", required=True, metavar="FILE")
    p.add_argument("--tol", type=float, default=states.DEFAULT_TOL)

    p = sub.add_parser("region", help="sample the one-sided accessible region")
    p.add_argument("--state", required=True, metavar="FILE")
    p.add_argument("--xi1pp", type=float, required=True)
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--ymin", type=float, required=True)
    p.add_argument("--ymax", type=float, required=True)
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--tol", type=float, default=states.DEFAULT_TOL)
    p.add_argument("--out", default="-", metavar="CSV", help="CSV path, - for stdout")
    p.add_argument("--plot", metavar="IMAGE", help="also render the region figure here")

    p = sub.add_parser("oracle-check", help="cross-check the decision against the grid oracle")
    p.add_argument("--from", dest="source", required=True, metavar="FILE")
    p.add_argument("--to", dest="target", required=True, metavar="FILE")
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=512)
    p.add_argument("--tol", type=float, default=states.DEFAULT_TOL)
    return parser


def _cmd_validate(args) -> int:
    try:
        state = _load_state(args.file)
    except InvalidStateError as exc:
        _print_json({"valid": False, "xi": None, "error": str(exc)})
        return 2
    _print_json({"valid": True, "xi": _xi_list(states.invariants(state))})
    return 0


def _cmd_invariants(args) -> int:
    _print_json(_xi_list(states.invariants(_load_state(args.file))))
    return 0


def _cmd_reduce(args) -> int:
    reduction = states.reduce_to_normal_form(_load_state(args.file))
    _print_json(
        {
            "s1": reduction.s1.tolist(),
            "s2": reduction.s2.tolist(),
            "normal_form": reduction.normal_form.matrix.tolist(),
            "xi": _xi_list(states.invariants(reduction.normal_form)),
        }
    )
    return 0


def _cmd_decide(args) -> int:
    source = states.invariants(_load_state(args.source))
    target = states.invariants(_load_state(args.target))
    mode = criteria.MODE_REFLEXIVE_CLOSURE if args.reflexive_closure else criteria.MODE_STRICT
    if args.local == 1:
        decision = criteria.decide_local_1(source, target, args.tol, mode)
    elif args.local == 2:
        decision = criteria.decide_local_2(source, target, args.tol, mode)
    else:
        decision = criteria.decide_general(source, target, args.tol, mode)
    _print_json(decision.to_dict())
    if args.witness_out and decision.witness_map is not None:
        wmap = decision.witness_map
        if isinstance(wmap, System1Map):
            wmap = wmap.as_cp_map()
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            json.dump(wmap.to_dict(), fh)
    return 0 if decision.possible else 3


def _cmd_compare(args) -> int:
    a = states.invariants(_load_state(args.a))
    b = states.invariants(_load_state(args.b))
    forward = criteria.decide_general(a, b, args.tol).possible
    backward = criteria.decide_general(b, a, args.tol).possible
    order = criteria.compare(a, b, args.tol)
    _print_json({"order": order.value, "forward": forward, "backward": backward})
    return 0


def _cmd_region(args) -> int:
    source = states.invariants(_load_state(args.state))
    grid = criteria.accessible_region(
        source,
        args.xi1pp,
        np.linspace(args.xmin, args.xmax, args.nx),
        np.linspace(args.ymin, args.ymax, args.ny),
        args.tol,
    )
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["xi3pp", "xi4pp", "feasible", "f1"])
    for j, y in enumerate(grid.grid_y):
        for i, x in enumerate(grid.grid_x):
            writer.writerow(
                [repr(float(x)), repr(float(y)), int(grid.feasible[i, j]), repr(float(grid.f1_values[i, j]))]
            )
    if args.out == "-":
        sys.stdout.write(buffer.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buffer.getvalue())
    if args.plot:
        from .plotting import render_region

        render_region(grid, source, args.plot)
    return 0


def _cmd_oracle_check(args) -> int:
    source = states.invariants(_load_state(args.source))
    target = states.invariants(_load_state(args.target))
    decision = criteria.decide_general(source, target, args.tol)
    scan = oracle.region_scan_decide(
        source, target, oracle.ScanConfig(args.nx, args.ny, args.tol)
    )
    agree = decision.possible == scan
    within_band = decision.margin is not None and abs(decision.margin) < MARGIN_BAND
    _print_json(
        {
            "decide": decision.to_dict(),
            "region_scan": scan,
            "agree": agree,
            "margin": decision.margin,
            "band": MARGIN_BAND,
        }
    )
    return 0 if agree or within_band else 4


_COMMANDS = {
    "validate": _cmd_validate,
    "invariants": _cmd_invariants,
    "reduce": _cmd_reduce,
    "decide": _cmd_decide,
    "compare": _cmd_compare,
    "region": _cmd_region,
    "oracle-check": _cmd_oracle_check,
}


def run(argv: list[str]) -> int:
    """Parse and execute one command; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GaussOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
