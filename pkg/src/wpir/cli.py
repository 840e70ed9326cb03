"""Command-line entry point.

Subcommands: curve (tradeoff CSV/JSON), simulate (Monte-Carlo run),
verify (oracle-equivalence checks at a given size), dump-table (symbolic
query/answer table). Exit codes: 0 success, 1 check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import optimize, tables
from .core import PatternDistribution, SystemParams
from .leakage import (
    MAX_ENUM_KEYS,
    TooLarge,
    analytic_mi,
    enumerate_query_law,
    maximal_leakage,
    mutual_info_leakage,
)
from .scheme import (
    WpirScheme,
    download_cost,
    download_cost_by_enumeration,
    wpir_answer,
    wpir_decode,
    wpir_query,
)
from .core import MessageStore, enumerate_keys
from .sim import SimConfig, run_simulation

#: Default RNG seed when --seed is omitted; never wall-clock entropy.
DEFAULT_SEED = 1729
DEFAULT_MESSAGE_SEED = 271828


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _guard_size(params: SystemParams) -> None:
    if params.num_servers**params.num_messages > MAX_ENUM_KEYS:
        raise TooLarge(
            f"N^K = {params.num_servers}^{params.num_messages} exceeds the "
            f"enumeration guard of {MAX_ENUM_KEYS}"
        )


def cmd_curve(args) -> int:
    params = SystemParams(args.servers, args.messages)
    if args.metric == "maxl":
        points = optimize.maxl_curve(params, args.points)
        baseline = optimize.legacy_maxl_curve(params, args.points)
    else:
        points = optimize.mi_curve(params, args.points)
        baseline = optimize.mi_sweep(params, args.points)

    def emit(pts, out):
        if args.format == "json":
            json.dump(optimize.curve_to_json(pts), out, indent=2)
            out.write("\n")
        else:
            optimize.write_curve_csv(pts, out)

    with _open_out(args.out) as out:
        emit(points, out)
    if args.baseline_out is not None:
        with _open_out(args.baseline_out) as out:
            emit(baseline, out)
    return 0


def _mi_scheme_for_rho(params: SystemParams, rho: float) -> WpirScheme:
    # pure (no direct mass) optimum with the requested leakage, found by
    # bisection on the free ratio; leakage is clamped to the sweep's range
    lo, hi = 1.0, optimize.X_MAX
    top = optimize.mi_point(params, hi).rho
    if rho >= top:
        x = hi
    else:
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if optimize.mi_point(params, mid).rho < rho:
                lo = mid
            else:
                hi = mid
        x = math.sqrt(lo * hi)
    dist = optimize.p_from_x(params, optimize.solve_x_recursion(params, x))
    return WpirScheme(params, dist)


def cmd_simulate(args) -> int:
    if args.scheme_file is not None:
        with open(args.scheme_file, encoding="utf-8") as fh:
            scheme = WpirScheme.from_json(json.load(fh))
    else:
        if args.metric is None or args.rho is None:
            raise ValueError("either --scheme-file or both --metric and --rho are required")
        params = SystemParams(args.servers, args.messages)
        if args.metric == "maxl":
            scheme = WpirScheme(params, optimize.solve_maxl(params, args.rho))
        else:
            scheme = _mi_scheme_for_rho(params, args.rho)
    _guard_size(scheme.params)
    report = run_simulation(
        SimConfig(scheme, args.trials, args.seed, args.message_seed)
    )
    with _open_out(args.out) as out:
        json.dump({"scheme": scheme.to_json(), **report.to_json()}, out, indent=2)
        out.write("\n")
    return 0


def _verify_checks(params: SystemParams):
    N, K = params.num_servers, params.num_messages
    rng = np.random.default_rng(DEFAULT_SEED)

    def check_decode():
        scheme = WpirScheme(params, PatternDistribution.uniform(params))
        for trial in range(3):
            store = MessageStore.random(params, DEFAULT_MESSAGE_SEED + trial)
            for key in enumerate_keys(params):
                for k in range(1, K + 1):
                    queries = [wpir_query(scheme, k, key, n) for n in range(1, N + 1)]
                    answers = [wpir_answer(scheme, q, store) for q in queries]
                    if wpir_decode(scheme, k, key, answers) != store.message(k):
                        return f"decode mismatch for key {key}, message {k}"
        return None

    def check_mi_equivalence():
        for _ in range(20):
            raw = rng.random(K)
            mass = N * sum(
                math.comb(K - 1, w) * (N - 1) ** w * raw[w] for w in range(K)
            )
            dist = PatternDistribution(0.0, tuple(float(r / mass) for r in raw))
            scheme = WpirScheme(params, dist)
            exact = mutual_info_leakage(enumerate_query_law(scheme, 1))
            closed = analytic_mi(params, dist.p_weights)
            if abs(exact - closed) > 1e-9:
                return f"analytic vs enumeration MI differ by {abs(exact - closed):.3g}"
        return None

    def check_maxl_solution():
        cap = optimize.maxl_leakage_cap(params)
        for rho in np.linspace(0.0, 1.2 * cap, 10):
            scheme = WpirScheme(params, optimize.solve_maxl(params, float(rho)))
            leak = maximal_leakage(enumerate_query_law(scheme, 1))
            if abs(leak - min(rho, cap)) > 1e-9:
                return f"maximal leakage off by {abs(leak - min(rho, cap)):.3g} at rho={rho:.4f}"
            cost = download_cost(scheme)
            bound = optimize.optimal_maxl_download(params, float(rho))
            if abs(cost - bound) > 1e-9:
                return f"download cost off by {abs(cost - bound):.3g} at rho={rho:.4f}"
            enum_cost = download_cost_by_enumeration(scheme, 1)
            if abs(enum_cost - cost) > 1e-9:
                return f"enumerated cost off by {abs(enum_cost - cost):.3g}"
        return None

    def check_kkt():
        for x_last in np.logspace(0, 6, 10):
            x = optimize.solve_x_recursion(params, float(x_last))
            dist = optimize.p_from_x(params, x)
            res = optimize.kkt_residual(params, x, dist.p_weights)
            if res.stationarity > 1e-6:
                return f"KKT residual {res.stationarity:.3g} at x_last={x_last:.4g}"
        return None

    return [
        ("decode-exhaustive", check_decode),
        ("mi-analytic-vs-enumeration", check_mi_equivalence),
        ("maxl-closed-form", check_maxl_solution),
        ("kkt-stationarity", check_kkt),
    ]


def cmd_verify(args) -> int:
    params = SystemParams(args.servers, args.messages)
    _guard_size(params)
    failed = None
    for name, check in _verify_checks(params):
        error = check()
        if error is None:
            print(f"PASS {name}")
        else:
            print(f"FAIL {name}: {error}")
            if failed is None:
                failed = name
    if failed is not None:
        print(f"first failing check: {failed}", file=sys.stderr)
        return 1
    return 0


def cmd_dump_table(args) -> int:
    params = SystemParams(args.servers, args.messages)
    _guard_size(params)
    if not 1 <= args.message <= params.num_messages:
        raise ValueError(f"message index {args.message} outside 1..{params.num_messages}")
    with _open_out(args.out) as out:
        out.write(tables.format_table(params, args.message) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpir",
        description="Weakly private information retrieval: curves, simulation, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_size(p):
        p.add_argument("--servers", "-N", type=int, required=True, help="number of servers N")
        p.add_argument("--messages", "-K", type=int, required=True, help="number of messages K")

    p = sub.add_parser("curve", help="emit a (leakage, download) tradeoff curve")
    add_size(p)
    p.add_argument("--metric", choices=["maxl", "mi"], required=True)
    p.add_argument("--points", type=int, default=200, help="grid size (>= 2)")
    p.add_argument("--out", default="-", help="output path, - for stdout")
    p.add_argument(
        "--baseline-out",
        default=None,
        help="also write the no-direct-pattern baseline curve here",
    )
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", help="run a Monte-Carlo retrieval simulation")
    p.add_argument("--scheme-file", default=None, help="JSON scheme description")
    p.add_argument("--metric", choices=["maxl", "mi"], default=None)
    p.add_argument("--rho", type=float, default=None, help="leakage budget in bits")
    p.add_argument("--servers", "-N", type=int, default=3)
    p.add_argument("--messages", "-K", type=int, default=2)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--message-seed", type=int, default=DEFAULT_MESSAGE_SEED)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run oracle-equivalence checks at a given size")
    add_size(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-table", help="print the symbolic query/answer table")
    add_size(p)
    p.add_argument("--message", "-k", type=int, default=1, help="requested message index")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_dump_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TooLarge, ValueError, optimize.OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
