"""alpha-Lorenz curves and the alpha-more-capable order between BISO channels.

The order ``W1 >= W2`` holds when W1's Sibson mutual information is at least
W2's for every input distribution. Two routes decide it here:

* a sufficient condition based on pointwise comparison of alpha-Lorenz curves
  of capacity-matched channels, whose direction depends on the order regime
  of alpha (see :func:`regime`);
* an exhaustive check on a uniform grid of inputs in [0, 1/2] (the mutual
  information of a BISO channel is symmetric under x -> 1 - x).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from .channel import BisoChannel, bec, bsc, mix_toward_useless
from .core import AlphaLike, AlphaParam, as_alpha, binary_entropy_alpha, shannon_binary_entropy
from .errors import DomainError, UnsupportedAlphaError, UsageError
from .measures import LN2, capacity_value, pair_statistics_full, sibson_mi_curve

DC_TOL = 1e-9
CAPACITY_TOL = 1e-9
MERGE_TOL = 1e-12
LORENZ_TOL = 1e-10
GRID_TOL = 1e-9


class Regime(str, enum.Enum):
    FORWARD = "forward"
    REVERSED = "reversed"
    BOTH = "both"


class Dominance(str, enum.Enum):
    A_LEQ_B = "a_leq_b"
    B_LEQ_A = "b_leq_a"
    EQUAL = "equal"
    CROSSING = "crossing"


class Verdict(str, enum.Enum):
    FIRST_MORE_CAPABLE = "FirstMoreCapable"
    SECOND_MORE_CAPABLE = "SecondMoreCapable"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"
    INCONCLUSIVE = "Inconclusive"


class Method(str, enum.Enum):
    LORENZ_SUFFICIENT = "LorenzSufficient"
    GRID_EXHAUSTIVE = "GridExhaustive"
    SPECIAL_ALPHA = "SpecialAlpha"


DIRECTED = (Verdict.FIRST_MORE_CAPABLE, Verdict.SECOND_MORE_CAPABLE)


@dataclass(frozen=True, eq=False)
class LorenzCurve:
    """Piecewise-linear convex curve F(t) on [0, d_c].

    ``breakpoints`` has one more entry than ``step_values``; segment ``i``
    spans ``(breakpoints[i], breakpoints[i+1]]`` with slope ``step_values[i]``.
    """

    alpha: AlphaParam
    breakpoints: np.ndarray
    step_values: np.ndarray
    masses: np.ndarray
    d_c: float
    values: np.ndarray  # F at each breakpoint

    def __call__(self, t):
        return evaluate_lorenz(self, t)


@dataclass(frozen=True, eq=False)
class Refinement:
    breakpoints: np.ndarray
    steps_a: np.ndarray
    steps_b: np.ndarray
    values_a: np.ndarray
    values_b: np.ndarray


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of an order test between two channels.

    ``worst_gap`` is the smallest margin (nats) by which the claimed ordering
    holds on the grid, oriented along the verdict: for ``SecondMoreCapable``
    it is min over x of I(W2) - I(W1), otherwise min of I(W1) - I(W2). It is
    ``None`` for verdicts that did not evaluate mutual information.
    """

    verdict: Verdict
    method: Method
    worst_gap: Optional[float]
    witness_x: Optional[float]
    capacity_gap: float
    alpha: float
    regime: Regime
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "method": self.method.value,
            "worst_gap": self.worst_gap,
            "witness_x": self.witness_x,
            "capacity_gap": self.capacity_gap,
            "alpha": self.alpha,
            "regime": self.regime.value,
            **self.details,
        }


# ------------------------------------------------------------------ curves


def _require_renyi(a: AlphaParam, what: str):
    if a.is_unit:
        raise UnsupportedAlphaError(f"{what} is not defined for alpha = 1")


def lorenz_curve(ch: BisoChannel, alpha: AlphaLike) -> LorenzCurve:
    a = as_alpha(alpha)
    _require_renyi(a, "the alpha-Lorenz curve")
    al = a.value
    mass, q, qbar = pair_statistics_full(ch, al)
    beta = 1.0 / al
    steps = q ** beta + qbar ** beta
    qc = np.minimum(q, qbar)
    # ascending step value; ties by canonical q descending, then mass descending
    order = np.lexsort((-mass, -qc, steps))
    mass = mass[order]
    steps = steps[order]
    breaks = np.empty(len(mass) + 1)
    breaks[0] = 0.0
    breaks[1:] = [math.fsum(mass[: i + 1]) for i in range(len(mass))]
    values = np.empty_like(breaks)
    values[0] = 0.0
    values[1:] = [math.fsum(mass[: i + 1] * steps[: i + 1]) for i in range(len(mass))]
    assert np.all(np.diff(steps) >= 0.0)
    assert abs(values[-1] - 1.0) <= 1e-10, values[-1]
    return LorenzCurve(a, breaks, steps, mass, float(breaks[-1]), values)


def evaluate_lorenz(curve: LorenzCurve, t):
    """F(t) by linear interpolation between breakpoints; accepts arrays."""
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > curve.d_c + MERGE_TOL):
        raise DomainError(f"t must lie in [0, {curve.d_c!r}]")
    out = np.interp(arr, curve.breakpoints, curve.values)
    return float(out) if out.ndim == 0 else out


def _check_matched(a: LorenzCurve, b: LorenzCurve):
    if abs(a.d_c - b.d_c) > DC_TOL:
        raise UsageError(
            f"curves live on different domains (d_c {a.d_c!r} vs {b.d_c!r}); "
            "channels must have equal alpha-capacity"
        )
    if abs(a.alpha.value - b.alpha.value) > 1e-12:
        raise UsageError("curves were built for different orders")


def common_refinement(a: LorenzCurve, b: LorenzCurve) -> Refinement:
    _check_matched(a, b)
    end = min(a.d_c, b.d_c)
    pts = np.sort(np.concatenate([a.breakpoints, b.breakpoints]))
    pts = pts[pts < end - MERGE_TOL]
    merged = [0.0]
    for p in pts:
        if p - merged[-1] > MERGE_TOL:
            merged.append(float(p))
    merged.append(end)
    bp = np.array(merged)
    mids = 0.5 * (bp[:-1] + bp[1:])

    def steps_on(c):
        idx = np.searchsorted(c.breakpoints, mids, side="left") - 1
        return c.step_values[np.clip(idx, 0, len(c.step_values) - 1)]

    return Refinement(bp, steps_on(a), steps_on(b), evaluate_lorenz(a, bp), evaluate_lorenz(b, bp))


def lorenz_dominates(a: LorenzCurve, b: LorenzCurve, tol: float = LORENZ_TOL) -> Dominance:
    """Compare two matched curves at the breakpoints of their common refinement."""
    ref = common_refinement(a, b)
    diff = ref.values_a - ref.values_b
    if np.max(np.abs(diff)) <= tol:
        return Dominance.EQUAL
    if np.max(diff) <= tol:
        return Dominance.A_LEQ_B
    if np.min(diff) >= -tol:
        return Dominance.B_LEQ_A
    return Dominance.CROSSING


# ----------------------------------------------------------------- regimes


def regime(alpha: AlphaLike) -> Regime:
    """Direction in which Lorenz dominance transfers to the order.

    Reversed on the open interval (1/3, 1/2), bidirectional at its endpoints,
    forward elsewhere (alpha = 1 included).
    """
    v = as_alpha(alpha).value
    if abs(v - 1.0 / 3.0) < 1e-12 or abs(v - 0.5) < 1e-12:
        return Regime.BOTH
    if 1.0 / 3.0 < v < 0.5:
        return Regime.REVERSED
    return Regime.FORWARD


def _capacity_gap(w1, w2, a) -> float:
    return abs(capacity_value(w1, a) - capacity_value(w2, a))


def sufficient_condition(w1: BisoChannel, w2: BisoChannel, alpha: AlphaLike,
                         tol: float = LORENZ_TOL) -> ComparisonReport:
    a = as_alpha(alpha)
    _require_renyi(a, "the Lorenz sufficient condition")
    reg = regime(a)
    gap = _capacity_gap(w1, w2, a)

    def report(verdict, method=Method.LORENZ_SUFFICIENT, **details):
        return ComparisonReport(verdict, method, None, None, gap, a.value, reg, details)

    if gap > CAPACITY_TOL:
        return report(Verdict.INCONCLUSIVE, reason="capacities differ")
    if reg is Regime.BOTH:
        return report(Verdict.EQUIVALENT, Method.SPECIAL_ALPHA)
    try:
        dom = lorenz_dominates(lorenz_curve(w1, a), lorenz_curve(w2, a), tol)
    except UsageError:
        return report(Verdict.INCONCLUSIVE, reason="Lorenz domains differ")
    if dom is Dominance.EQUAL:
        return report(Verdict.EQUIVALENT, dominance=dom.value)
    if dom is Dominance.CROSSING:
        return report(Verdict.INCONCLUSIVE, dominance=dom.value)
    first = (dom is Dominance.A_LEQ_B) == (reg is Regime.FORWARD)
    return report(Verdict.FIRST_MORE_CAPABLE if first else Verdict.SECOND_MORE_CAPABLE,
                  dominance=dom.value)


def mi_gap_curve(w1: BisoChannel, w2: BisoChannel, alpha: AlphaLike, xs) -> np.ndarray:
    a = as_alpha(alpha)
    return sibson_mi_curve(w1, xs, a) - sibson_mi_curve(w2, xs, a)


def more_capable_grid(w1: BisoChannel, w2: BisoChannel, alpha: AlphaLike,
                      grid_points: int = 1001, tol: float = GRID_TOL) -> ComparisonReport:
    """Decide the order by evaluating I(W1) - I(W2) on a uniform grid of [0, 1/2]."""
    if grid_points < 3:
        raise DomainError("grid_points must be >= 3")
    a = as_alpha(alpha)
    xs = np.linspace(0.0, 0.5, grid_points)
    delta = mi_gap_curve(w1, w2, a, xs)
    lo, hi = float(delta.min()), float(delta.max())
    if max(-lo, hi) <= tol:
        verdict, oriented = Verdict.EQUIVALENT, delta
    elif lo >= -tol:
        verdict, oriented = Verdict.FIRST_MORE_CAPABLE, delta
    elif hi <= tol:
        verdict, oriented = Verdict.SECOND_MORE_CAPABLE, -delta
    else:
        verdict, oriented = Verdict.INCOMPARABLE, delta
    i = int(np.argmin(oriented))
    return ComparisonReport(
        verdict, Method.GRID_EXHAUSTIVE, float(oriented[i]), float(xs[i]),
        _capacity_gap(w1, w2, a), a.value, regime(a),
        {"max_abs_gap": float(np.max(np.abs(delta))), "grid_points": grid_points},
    )


# ------------------------------------------------------------- calibration


class Family(str, enum.Enum):
    BSC = "bsc"
    BEC = "bec"


def _bisect(f, lo, hi):
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        # only reachable when rounding puts the root at an endpoint
        return lo if abs(flo) <= abs(fhi) else hi
    return optimize.bisect(f, lo, hi, xtol=1e-17, rtol=4 * np.finfo(float).eps, maxiter=200)


def calibrate(family, target_c: float, alpha: AlphaLike) -> float:
    """Parameter of the BSC (crossover) or BEC (erasure) with the given alpha-capacity."""
    fam = Family(family.lower() if isinstance(family, str) else family)
    a = as_alpha(alpha)
    c = float(target_c)
    if not (0.0 <= c <= LN2 + 1e-12):
        raise DomainError(f"target capacity must lie in [0, ln 2], got {c!r}")
    c = min(c, LN2)
    if fam is Family.BEC:
        if a.is_unit:
            eps = 1.0 - c / LN2
        else:
            al = a.value
            target_d = math.exp((al - 1.0) / al * (c - LN2))
            eps = (1.0 - target_d) / (1.0 - 2.0 ** ((1.0 - al) / al))
        return min(max(eps, 0.0), 1.0)
    if c == 0.0:
        return 0.5
    if c == LN2:
        return 0.0
    goal = LN2 - c
    if a.is_unit:
        def h(p):
            return shannon_binary_entropy(p) - goal
    else:
        def h(p):
            return binary_entropy_alpha(p, a) - goal
    return _bisect(h, 0.0, 0.5)


def degrade_to_capacity(ch: BisoChannel, target_c: float, alpha: AlphaLike) -> BisoChannel:
    """Degrade ``ch`` along :func:`mix_toward_useless` until its capacity is ``target_c``.

    The capacity is increasing in the mixing parameter, so bisection applies.
    ``target_c`` must not exceed the capacity of ``ch``.
    """
    a = as_alpha(alpha)
    top = capacity_value(ch, a)
    if target_c > top + 1e-15 or target_c < 0.0:
        raise DomainError(f"target {target_c!r} outside [0, {top!r}]")
    if target_c >= top:
        return ch
    lam = _bisect(lambda t: capacity_value(mix_toward_useless(ch, t), a) - target_c, 0.0, 1.0)
    return mix_toward_useless(ch, lam)


def match_capacities(w1: BisoChannel, w2: BisoChannel, alpha: AlphaLike):
    """Degrade whichever channel has the larger capacity so both agree."""
    a = as_alpha(alpha)
    c1, c2 = capacity_value(w1, a), capacity_value(w2, a)
    if c1 > c2:
        return degrade_to_capacity(w1, c2, a), w2
    return w1, degrade_to_capacity(w2, c1, a)


def calibrated_pair(target_c: float, alpha: AlphaLike) -> tuple[BisoChannel, BisoChannel]:
    """The BEC and BSC with the given alpha-capacity."""
    a = as_alpha(alpha)
    return bec(calibrate(Family.BEC, target_c, a)), bsc(calibrate(Family.BSC, target_c, a))


# ------------------------------------------------------------ extremality


@dataclass(frozen=True)
class ExtremalityReport:
    """Comparisons of a channel against its capacity-matched BEC and BSC.

    ``bec_vs_w`` and ``w_vs_bsc`` are grid reports; the ``lorenz_*`` fields
    hold the corresponding sufficient-condition reports.
    """

    alpha: float
    regime: Regime
    capacity: float
    bec_eps: float
    bsc_p: float
    bec_vs_w: ComparisonReport
    w_vs_bsc: ComparisonReport
    lorenz_bec_vs_w: ComparisonReport
    lorenz_w_vs_bsc: ComparisonReport
    holds: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "regime": self.regime.value,
            "capacity_nats": self.capacity,
            "bec_eps": self.bec_eps,
            "bsc_p": self.bsc_p,
            "bec_vs_w": self.bec_vs_w.to_dict(),
            "w_vs_bsc": self.w_vs_bsc.to_dict(),
            "lorenz_bec_vs_w": self.lorenz_bec_vs_w.to_dict(),
            "lorenz_w_vs_bsc": self.lorenz_w_vs_bsc.to_dict(),
            "sandwich_holds": self.holds,
        }


def _sandwich_ok(rep: ComparisonReport, reg: Regime, tol: float) -> bool:
    if rep.worst_gap is None or rep.worst_gap < -tol:
        return False
    allowed = {
        Regime.FORWARD: (Verdict.FIRST_MORE_CAPABLE, Verdict.EQUIVALENT),
        Regime.REVERSED: (Verdict.SECOND_MORE_CAPABLE, Verdict.EQUIVALENT),
        Regime.BOTH: (Verdict.EQUIVALENT,),
    }[reg]
    return rep.verdict in allowed


def _lorenz_consistent(lz: ComparisonReport, grid: ComparisonReport) -> bool:
    if lz.verdict in DIRECTED:
        return grid.verdict in (lz.verdict, Verdict.EQUIVALENT)
    if lz.verdict is Verdict.EQUIVALENT and lz.method is Method.SPECIAL_ALPHA:
        return grid.verdict is Verdict.EQUIVALENT
    return True


def extremality_report(w: BisoChannel, alpha: AlphaLike, grid_points: int = 1001,
                       tol: float = GRID_TOL) -> ExtremalityReport:
    a = as_alpha(alpha)
    _require_renyi(a, "the Lorenz-based extremality report")
    c = capacity_value(w, a)
    if c <= 1e-12:
        raise DomainError("channel is useless at this order; no extremality to report")
    eps = calibrate(Family.BEC, c, a)
    p = calibrate(Family.BSC, c, a)
    e_ch, s_ch = bec(eps), bsc(p)
    reg = regime(a)
    upper = more_capable_grid(e_ch, w, a, grid_points, tol)
    lower = more_capable_grid(w, s_ch, a, grid_points, tol)
    lz_upper = sufficient_condition(e_ch, w, a)
    lz_lower = sufficient_condition(w, s_ch, a)
    holds = (
        _sandwich_ok(upper, reg, tol)
        and _sandwich_ok(lower, reg, tol)
        and _lorenz_consistent(lz_upper, upper)
        and _lorenz_consistent(lz_lower, lower)
    )
    return ExtremalityReport(a.value, reg, c, eps, p, upper, lower, lz_upper, lz_lower, holds)
