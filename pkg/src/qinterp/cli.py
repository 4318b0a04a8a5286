"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 infeasible size, 3 internal invariant breach.
All randomness comes from ``--seed``; identical arguments give identical output.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bernstein_vazirani as bv
from . import interpolation as ip
from . import secret_sharing as ss
from .finite_field import FieldError, field_new, format_poly
from .polynomial import random_polynomial
from .qudit_sim import SimulationError

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 1, 2, 3
FIELD_TABLE_MAX = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(rows: list[dict], fmt: str, out, columns=None):
    if fmt == "json":
        json.dump(rows if len(rows) != 1 else rows[0], out, indent=2, sort_keys=columns is None)
        out.write("\n")
    else:
        w = csv.DictWriter(out, fieldnames=columns or list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def _require_seed(args):
    if args.seed is None:
        raise UsageError("--seed is required for stochastic runs")


# -- subcommands ---------------------------------------------------------------

def cmd_field(args) -> int:
    F = field_new(args.p, args.r, args.modulus)
    report = {"p": F.p, "r": F.r, "q": F.q, "modulus": list(F.modulus),
              "modulus_str": format_poly(F.modulus)}
    if F.q <= FIELD_TABLE_MAX:
        report["trace"] = [int(t) for t in F.trace_table]
        report["character"] = [[round(float(c.real), 12) + 0.0, round(float(c.imag), 12) + 0.0]
                               for c in F.character_table]
    with _sink(args.output) as out:
        json.dump(report, out, indent=2)
        out.write("\n")
    return EXIT_OK


def cmd_bv(args) -> int:
    if args.N > bv.MAX_QUBITS:
        raise bv.OversizeError(f"N={args.N} exceeds {bv.MAX_QUBITS} input qubits")
    if args.random:
        _require_seed(args)
        instance = bv.BvInstance.random(args.N, np.random.default_rng(args.seed))
    else:
        if args.a is None:
            raise UsageError("give --a BITS or --random")
        instance = bv.BvInstance.from_bits(args.a)
        if instance.N != args.N:
            raise UsageError(f"--a has {instance.N} bits, expected {args.N}")
    rng = np.random.default_rng(0 if args.seed is None else args.seed)
    result = bv.bv_run(instance, rng)
    with _sink(args.output) as out:
        _emit([result.to_dict()], args.format, out)
    return EXIT_OK if result.success else EXIT_INTERNAL


def _protocol_params(args) -> ip.ProtocolParams:
    return ip.ProtocolParams.create(field_new(args.p, args.r), args.n, args.d, args.k)


def cmd_interpolate(args) -> int:
    params = _protocol_params(args)
    table = ip.build_image(params)
    if args.trials:
        _require_seed(args)
        summary = ip.trials(params, args.trials, args.seed, args.mode, table)
    else:
        summary = ip.TrialSummary(params, table.size, 0, 0, args.seed, args.mode)
    with _sink(args.output) as out:
        _emit([summary.to_row()], args.format, out, ip.CSV_COLUMNS)
    return EXIT_OK


SHARE_COLUMNS = ("p", "r", "n", "d", "k", "intercept", "sessions", "destroyed", "decoded",
                 "successes", "p_exact", "empirical_rate", "seed", "transcripts")


def cmd_share(args) -> int:
    _require_seed(args)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    params = _protocol_params(args)
    bad = [i for i in args.intercept if not 1 <= i <= params.k]
    if bad:
        raise UsageError(f"interception indices {bad} outside 1..{params.k}")
    table = ip.build_image(params)
    destroyed = successes = 0
    transcripts = io.StringIO()
    for t, child in enumerate(ip.trial_seeds(args.seed, args.trials)):
        poly_seed, run_seed = child.generate_state(2, np.uint64)
        f = random_polynomial(params.basis, params.field, int(poly_seed))
        outcome = ss.deal_and_reconstruct(f, params, table, np.random.default_rng(int(run_seed)),
                                          args.intercept)
        destroyed += outcome.destroyed
        successes += bool(outcome.result and outcome.result.success)
        for rec in outcome.transcript.records:
            transcripts.write(json.dumps({"session": t, **rec}, sort_keys=True) + "\n")
    if args.transcripts:
        Path(args.transcripts).write_text(transcripts.getvalue())
    exact = ip.success_probability(params, table)
    decoded = args.trials - destroyed
    row = {"p": params.field.p, "r": params.field.r, "n": params.n, "d": params.basis.d,
           "k": params.k, "intercept": ",".join(map(str, args.intercept)),
           "sessions": args.trials, "destroyed": destroyed, "decoded": decoded,
           "successes": successes, "p_exact": f"{exact.numerator}/{exact.denominator}",
           "empirical_rate": repr(successes / decoded) if decoded else "",
           "seed": args.seed, "transcripts": args.transcripts or ""}
    with _sink(args.output) as out:
        _emit([row], args.format, out, SHARE_COLUMNS)
    return EXIT_OK


def cmd_adversary(args) -> int:
    if (args.structure is None) == (args.threshold is None):
        raise UsageError("give exactly one of --structure or --threshold")
    if args.threshold is not None:
        A = ss.threshold_structure(args.players, args.threshold)
    else:
        text = args.structure
        path = Path(text)
        if not text.lstrip().startswith("[") and path.exists():
            text = path.read_text()
        try:
            A = ss.AdversaryStructure.from_json(args.players, text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad structure: {exc}")
    report = {"players": args.players, "structure": A.to_list(), **ss.structure_report(A)}
    with _sink(args.output) as out:
        json.dump(report, out, indent=2)
        out.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qinterp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=True):
        p.add_argument("--seed", type=int)
        p.add_argument("--output", "-o")
        if formats:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("field", help="describe GF(p^r): modulus, trace and character tables")
    p.add_argument("p", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--modulus", type=_int_list, help="little-endian coefficients c0,..,cr")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("bv", help="Bernstein-Vazirani over N qubits")
    p.add_argument("N", type=int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--a", help="hidden bits a_1..a_N, e.g. 101")
    group.add_argument("--random", action="store_true")
    common(p)
    p.set_defaults(func=cmd_bv)

    for name, func, helptext in (
            ("interpolate", cmd_interpolate, "success probability of quantum interpolation"),
            ("share", cmd_share, "k-party secret-sharing sessions")):
        p = sub.add_parser(name, help=helptext)
        for arg in ("p", "r", "n", "d"):
            p.add_argument(arg, type=int)
        p.add_argument("k", type=int, nargs="?", help="query count (default: optimal)")
        p.add_argument("--trials", type=int, default=0 if name == "interpolate" else 1)
        common(p)
        if name == "interpolate":
            p.add_argument("--mode", choices=("analytic", "circuit"), default="analytic")
        else:
            p.add_argument("--intercept", type=_int_list, default=[])
            p.add_argument("--transcripts", help="write session transcripts as JSON lines")
        p.set_defaults(func=func)

    p = sub.add_parser("adversary", help="Q2 / dual predicates for an adversary structure")
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--structure", help="JSON array of subsets, or a file containing one")
    p.add_argument("--threshold", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_adversary)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ip.InfeasibleError, bv.OversizeError) as exc:
        print(f"qinterp: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SimulationError, ArithmeticError) as exc:
        print(f"qinterp: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, FieldError, ValueError, ss.NotDownwardClosedError) as exc:
        print(f"qinterp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
