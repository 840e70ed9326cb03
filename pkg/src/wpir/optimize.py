"""Optimal pattern distributions and (leakage, download) tradeoff curves.

Under the maximal-leakage metric the optimum is a closed form in the
leakage budget. Under mutual information the optimal no-direct-pattern
distributions are parametrized by the probability-ratio sequence
x_w = p_{w-1} / p_w, whose components follow from the last one by a
backward recursion; the direct pattern then enters through the lower
convex envelope with the extreme point ((log2 K)/N, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, exp, log, log2
from typing import Iterable, Sequence, TextIO

import numpy as np

from .core import PatternDistribution, SystemParams
from .leakage import analytic_mi

#: Largest swept ratio; beyond this the curve point moves negligibly.
X_MAX = 1e9

#: Offset of the log-spaced grid so x_last = 1 is included exactly.
GRID_EPS = 1e-6

X_MIN_TOL = 1e-9


class OutOfRange(Exception):
    """A ratio left the valid branch (some component fell below 1)."""


# ---------------------------------------------------------------------------
# maximal leakage


def maxl_leakage_cap(params: SystemParams) -> float:
    """Leakage of the minimum-download scheme, log2(1 + (K-1)/N) bits."""
    N, K = params.num_servers, params.num_messages
    return log2(1 + (K - 1) / N)


def solve_maxl(params: SystemParams, rho: float) -> PatternDistribution:
    """Optimal distribution for leakage budget rho (bits) under maximal leakage."""
    if rho < 0:
        raise ValueError(f"leakage budget must be nonnegative, got {rho}")
    N, K = params.num_servers, params.num_messages
    p_direct = min(1.0 / N, (2.0**rho - 1.0) / (K - 1))
    p_w = (1.0 - N * p_direct) / N**K
    return PatternDistribution(p_direct, (p_w,) * K)


def optimal_maxl_download(params: SystemParams, rho: float) -> float:
    """Download cost achieved by solve_maxl: affine in 2^rho until it clamps at 1."""
    N, K = params.num_servers, params.num_messages
    geo = sum(N**-j for j in range(1, K))
    return 1.0 + max(0.0, 1.0 - N * (2.0**rho - 1.0) / (K - 1)) * geo


# ---------------------------------------------------------------------------
# mutual information: ratio recursion and KKT verification


def solve_x_recursion(params: SystemParams, x_last: float) -> tuple[float, ...]:
    """Ratios (x_1, ..., x_{K-1}) from the free component x_{K-1} = x_last.

    Step i determines x_{K-i} in closed form from the later components;
    every component must stay >= 1 or the input is outside the valid branch.
    """
    N, K = params.num_servers, params.num_messages
    if not 1.0 <= x_last <= X_MAX:
        raise OutOfRange(f"x_last must lie in [1, {X_MAX:g}], got {x_last}")
    x = [0.0] * K  # 1-indexed, x[1..K-1]
    x[K - 1] = x_last
    anchor = log(((K - 1) * x_last + 1) / K)
    for i in range(1, K):
        rhs = sum((1 - N) ** j for j in range(i)) * anchor
        rhs -= sum((1 - N) ** j * log(x[K - i + j]) for j in range(1, i))
        xi = (K * exp(rhs) - i) / (K - i)
        if xi < 1.0 - X_MIN_TOL:
            raise OutOfRange(f"x_{K - i} = {xi} < 1 for x_last = {x_last}")
        x[K - i] = max(xi, 1.0)
    return tuple(x[1:])


def p_from_x(params: SystemParams, x: Sequence[float]) -> PatternDistribution:
    """Weight-class probabilities induced by the ratio sequence (no direct mass)."""
    N, K = params.num_servers, params.num_messages
    prods = [1.0]
    for xi in x:
        prods.append(prods[-1] / xi)
    p0 = 1.0 / (N + N * sum(comb(K - 1, w) * (N - 1) ** w * prods[w] for w in range(1, K)))
    return PatternDistribution(0.0, tuple(p0 * prods[w] for w in range(K)))


def x_from_p(p_weights: Sequence[float]) -> tuple[float, ...]:
    """Ratio sequence of an arbitrary positive weight vector."""
    return tuple(p_weights[w - 1] / p_weights[w] for w in range(1, len(p_weights)))


@dataclass(frozen=True)
class KktResidual:
    stationarity: float
    dual_nu: float
    dual_lambda: tuple[float, ...]
    y: tuple[float, ...]


def kkt_residual(
    params: SystemParams, x: Sequence[float], p_weights: Sequence[float]
) -> KktResidual:
    """Max stationarity residual of the Lagrangian partials at (x, p).

    Uses the explicit partial derivatives (natural logs) with all
    inequality multipliers zero and the equality multiplier y_{K-1}/N.
    """
    N, K = params.num_servers, params.num_messages
    y = tuple(log((w * x[w - 1] + K - w) / K) for w in range(1, K))
    nu = y[K - 2] / N
    residuals = []
    for w in range(1, K - 1):
        r = comb(K - 1, w) * (N - 1) ** w * (
            -y[w - 1] - (N - 1) * y[w] + (N - 1) * log(x[w]) + N * nu
        )
        residuals.append(r)
    residuals.append((N - 1) ** (K - 1) * (-y[K - 2] + N * nu))
    return KktResidual(
        stationarity=max(abs(r) for r in residuals),
        dual_nu=nu,
        dual_lambda=(0.0,) * (K - 1),
        y=y,
    )


# ---------------------------------------------------------------------------
# tradeoff points and curves


@dataclass(frozen=True)
class TradeoffPoint:
    rho: float
    download: float
    provenance: dict = field(compare=False)

    def __post_init__(self):
        if self.rho < -1e-15 or self.download < 1.0 - 1e-12:
            raise ValueError(f"invalid tradeoff point ({self.rho}, {self.download})")


def mi_point(params: SystemParams, x_last: float) -> TradeoffPoint:
    """(leakage, download) of the optimal no-direct-pattern scheme at x_last."""
    N = params.num_servers
    dist = p_from_x(params, solve_x_recursion(params, x_last))
    rho = analytic_mi(params, dist.p_weights)
    download = N / (N - 1) * (1 - dist.p_weights[0])
    return TradeoffPoint(
        rho,
        download,
        {
            "kind": "tsc",
            "x_last": x_last,
            "p_direct": 0.0,
            "p_weights": list(dist.p_weights),
        },
    )


def direct_extreme_point(params: SystemParams) -> TradeoffPoint:
    """Minimum download with the clean single-server pattern only."""
    N, K = params.num_servers, params.num_messages
    return TradeoffPoint(
        log2(K) / N,
        1.0,
        {
            "kind": "direct",
            "p_direct": 1.0 / N,
            "p_weights": [0.0] * K,
        },
    )


def x_grid(grid_size: int) -> np.ndarray:
    """Log-spaced sweep of x_last over [1, X_MAX], endpoint 1 included exactly."""
    if grid_size < 2:
        raise ValueError(f"grid size must be at least 2, got {grid_size}")
    g = np.logspace(math.log10(GRID_EPS), math.log10(X_MAX - 1 + GRID_EPS), grid_size)
    xs = 1.0 - GRID_EPS + g
    xs[0] = 1.0
    xs[-1] = X_MAX
    return xs


def mi_sweep(params: SystemParams, grid_size: int) -> list[TradeoffPoint]:
    """The p_direct = 0 curve: one point per grid value of x_last."""
    return [mi_point(params, float(x)) for x in x_grid(grid_size)]


def _lower_hull(points: list[tuple[float, float]]) -> list[int]:
    """Indices of the lower convex hull, points pre-sorted by (rho, D)."""
    hull: list[int] = []
    for i, (r, d) in enumerate(points):
        if hull and points[hull[-1]][0] == r:
            continue  # ties in rho keep the smaller D (sorted first)
        while len(hull) >= 2:
            r1, d1 = points[hull[-2]]
            r2, d2 = points[hull[-1]]
            if (r2 - r1) * (d - d1) - (d2 - d1) * (r - r1) <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def mi_curve(params: SystemParams, grid_size: int) -> list[TradeoffPoint]:
    """Lower convex envelope of the swept curve and the direct extreme point.

    Swept points cut off by the envelope are replaced by points on the
    supporting segment, realized by probabilistic sharing between the last
    tangent scheme and the pure direct pattern; their provenance records the
    resulting positive direct mass. Swept points with leakage at or beyond
    the extreme point's are dominated by it (their download exceeds 1) and
    are dropped.
    """
    N = params.num_servers
    extreme = direct_extreme_point(params)
    sweep = [pt for pt in mi_sweep(params, grid_size) if pt.rho < extreme.rho]
    pts = sweep + [extreme]
    order = sorted(range(len(pts)), key=lambda i: (pts[i].rho, pts[i].download))
    coords = [(pts[i].rho, pts[i].download) for i in order]
    hull_idx = {order[j] for j in _lower_hull(coords)}

    hull_pts = sorted((pts[i] for i in hull_idx), key=lambda p: p.rho)

    def envelope_at(rho: float) -> tuple[float, TradeoffPoint, TradeoffPoint]:
        for a, b in zip(hull_pts, hull_pts[1:]):
            if a.rho <= rho <= b.rho:
                t = (rho - a.rho) / (b.rho - a.rho)
                return a.download + t * (b.download - a.download), a, b
        return hull_pts[-1].download, hull_pts[-1], hull_pts[-1]

    out: list[TradeoffPoint] = []
    for i, pt in enumerate(sweep):
        if i in hull_idx:
            out.append(pt)
            continue
        download, a, b = envelope_at(pt.rho)
        # share between the tangent scheme a and the extreme point b
        t = (pt.rho - a.rho) / (b.rho - a.rho)
        p_direct = t * (1.0 / N)
        shared_weights = [(1.0 - N * p_direct) * pw for pw in a.provenance["p_weights"]]
        out.append(
            TradeoffPoint(
                pt.rho,
                download,
                {
                    "kind": "shared",
                    "x_last": a.provenance.get("x_last"),
                    "share": t,
                    "p_direct": p_direct,
                    "p_weights": shared_weights,
                },
            )
        )
    out.append(extreme)
    return out


def maxl_curve(params: SystemParams, grid_size: int) -> list[TradeoffPoint]:
    """Optimal curve under maximal leakage, sampled uniformly in rho."""
    if grid_size < 2:
        raise ValueError(f"grid size must be at least 2, got {grid_size}")
    cap = maxl_leakage_cap(params)
    out = []
    for rho in np.linspace(0.0, cap, grid_size):
        dist = solve_maxl(params, float(rho))
        out.append(
            TradeoffPoint(
                float(rho),
                optimal_maxl_download(params, float(rho)),
                {
                    "kind": "maxl",
                    "p_direct": dist.p_direct,
                    "p_weights": list(dist.p_weights),
                },
            )
        )
    return out


def legacy_maxl_dist(params: SystemParams, share: float) -> PatternDistribution:
    """No-direct-pattern family: share the uniform scheme with the weight-0 pattern."""
    N, K = params.num_servers, params.num_messages
    base = (1.0 - share) / N**K
    return PatternDistribution(0.0, (share / N + base,) + (base,) * (K - 1))


def legacy_maxl_curve(params: SystemParams, grid_size: int) -> list[TradeoffPoint]:
    """Previously best known curve (p_direct = 0) under maximal leakage.

    Its minimum-download pattern reads the message from N-1 servers, so the
    leakage axis extends to log2((1 + (N-1)K)/N).
    """
    if grid_size < 2:
        raise ValueError(f"grid size must be at least 2, got {grid_size}")
    N, K = params.num_servers, params.num_messages
    cap = log2((1 + (N - 1) * K) / N)
    geo = sum(N**-j for j in range(1, K))
    out = []
    for rho in np.linspace(0.0, cap, grid_size):
        share = min(1.0, N * (2.0 ** float(rho) - 1.0) / ((K - 1) * (N - 1)))
        dist = legacy_maxl_dist(params, share)
        out.append(
            TradeoffPoint(
                float(rho),
                1.0 + (1.0 - share) * geo,
                {
                    "kind": "legacy-maxl",
                    "p_direct": 0.0,
                    "p_weights": list(dist.p_weights),
                },
            )
        )
    return out


# ---------------------------------------------------------------------------
# serialization


def tangency_x1(params: SystemParams) -> float:
    """First ratio component where the envelope leaves the swept curve."""
    N, K = params.num_servers, params.num_messages
    if N == 2:
        return math.inf  # K^((N-2)/(N-1)) = 1: tangency recedes to infinity
    return (K - 1) / (K ** ((N - 2) / (N - 1)) - 1)


def write_curve_csv(points: Iterable[TradeoffPoint], out: TextIO) -> None:
    """CSV rows `rho_bits,download_cost,p_direct,p_w0,...` at 12 significant digits."""
    points = list(points)
    n_weights = len(points[0].provenance["p_weights"])
    header = ["rho_bits", "download_cost", "p_direct"]
    header += [f"p_w{w}" for w in range(n_weights)]
    out.write(",".join(header) + "\n")
    for pt in points:
        row = [pt.rho, pt.download, pt.provenance["p_direct"], *pt.provenance["p_weights"]]
        out.write(",".join(f"{v:.12g}" for v in row) + "\n")


def curve_to_json(points: Iterable[TradeoffPoint]) -> list[dict]:
    return [
        {"rho_bits": pt.rho, "download_cost": pt.download, **pt.provenance}
        for pt in points
    ]
