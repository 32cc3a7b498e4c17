"""Named end-to-end verification checks.

Each ``check_*`` function runs one property over a seeded ensemble and
returns a :class:`Check`. The CLI ``verify`` command and the acceptance tests
both drive these functions; sizes are parameters so a quick run and the full
run share one code path.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channel import BisoChannel, bec, bsc, make_biso, random_biso
from .core import binary_entropy_alpha
from .errors import DomainError
from .measures import (
    alpha_capacity,
    arimoto_cond_entropy,
    arimoto_mi_biso,
    arimoto_mi_curve,
    capacity_value,
    shannon_mi,
    sibson_mi_biso,
    sibson_mi_curve,
    special_mi,
    tilt,
)
from .oracle import (
    HajekOutcome,
    capacity_argmax_scan,
    convexity_scan,
    corrupt_hajek_instance,
    hajek_check,
    random_convex_function,
    random_hajek_instance,
    variational_sibson_biso,
)
from .ordering import (
    DIRECTED,
    Family,
    Regime,
    Verdict,
    calibrate,
    common_refinement,
    extremality_report,
    lorenz_curve,
    match_capacities,
    more_capable_grid,
    regime,
    sufficient_condition,
)

REGIME_ALPHAS = (0.25, 0.4, 0.75, 1.5, 2.0, 3.0, 5.0)
CONVEXITY_ALPHAS = (0.3, 0.5, 0.8, 1.5, 2.0, 2.5, 3.0, 4.0)
SPECIAL_ALPHAS = (1.0 / 3.0, 0.5)


@dataclass
class Check:
    name: str
    passed: bool
    worst: float
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "worst": self.worst,
                "seconds": round(self.seconds, 3), **self.detail}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        out.seconds = time.perf_counter() - t0
        return out
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --------------------------------------------------------------- ensembles


def _zero_heavy(ch: BisoChannel) -> BisoChannel:
    # fold the first pair onto one side and make the last pair an erasure
    pairs = [list(p) for p in ch.pairs]
    pairs[0] = [pairs[0][0] + pairs[0][1], 0.0]
    if len(pairs) > 1:
        s = pairs[-1][0] + pairs[-1][1]
        pairs[-1] = [s / 2.0, s / 2.0]
    return make_biso(pairs, label=f"{ch.label}-z")


def ensemble(count: int = 100, seed: int = 0, max_pairs: int = 6) -> list[BisoChannel]:
    """Seeded random channels with 1..max_pairs pairs; every fourth one has exact zeros."""
    out = []
    for i in range(count):
        ch = random_biso(1 + i % max_pairs, seed * 1_000_003 + i)
        out.append(_zero_heavy(ch) if i % 4 == 3 else ch)
    return out


def matched_pairs(count: int, alpha: float, seed: int = 0, max_pairs: int = 6):
    """Capacity-matched channel pairs; one member is degraded to match the other.

    A few pairs use a BEC or BSC as one member so Lorenz-ordered pairs occur.
    """
    rng = np.random.default_rng([seed, int(round(alpha * 1e6))])
    pairs = []
    while len(pairs) < count:
        n1, n2 = rng.integers(1, max_pairs + 1, size=2)
        w1 = random_biso(int(n1), int(rng.integers(2**31)))
        w2 = random_biso(int(n2), int(rng.integers(2**31)))
        kind = len(pairs) % 5
        if kind == 1:
            w1 = bec(float(rng.uniform(0.05, 0.95)))
        elif kind == 2:
            w2 = bsc(float(rng.uniform(0.01, 0.45)))
        if capacity_value(w1, alpha) <= 1e-9 or capacity_value(w2, alpha) <= 1e-9:
            continue
        pairs.append(match_capacities(w1, w2, alpha))
    return pairs


# ------------------------------------------------------------------ checks


@_timed
def check_variational(channels: Sequence[BisoChannel], alphas=REGIME_ALPHAS,
                      xs=(0.1, 0.3, 0.5), tol: float = 1e-6) -> Check:
    """Brute-force variational minimum against the closed-form Sibson MI."""
    worst, cases, fails = 0.0, 0, 0
    for ch in channels:
        for a in alphas:
            for x in xs:
                r = variational_sibson_biso(ch, x, a)
                gap = abs(r.value - sibson_mi_biso(ch, x, a).value)
                worst = max(worst, gap)
                cases += 1
                fails += (gap > tol) or not r.passed
    return Check("variational_agreement", fails == 0, worst, {"cases": cases, "tolerance": tol})


@_timed
def check_capacity_half(channels, alphas=REGIME_ALPHAS, grid_points: int = 1001) -> Check:
    worst, fails, cases = 0.0, 0, 0
    for ch in channels:
        for a in alphas:
            r = capacity_argmax_scan(ch, a, grid_points)
            worst = max(worst, abs(r.gap_to_closed_form))
            fails += not r.passed
            cases += 1
    return Check("capacity_at_half", fails == 0, worst, {"cases": cases, "tolerance": 1e-9})


@_timed
def check_special_forms(channels, xs=None, tol: float = 1e-10) -> Check:
    xs = np.linspace(0.0, 1.0, 21) if xs is None else xs
    worst = 0.0
    for ch in channels:
        for a, which in zip(SPECIAL_ALPHAS, ("1/3", "1/2")):
            for x in xs:
                worst = max(worst, abs(special_mi(ch, x, which).value - sibson_mi_biso(ch, x, a).value))
    hand_half = abs(special_mi(bsc(0.1), 0.5, "1/2").value + math.log(0.8))
    hand_third = abs(special_mi(bec(0.2), 0.5, "1/3").value + 0.5 * math.log(0.4))
    hand_half_gen = abs(sibson_mi_biso(bsc(0.1), 0.5, 0.5).value + math.log(0.8))
    hand_third_gen = abs(sibson_mi_biso(bec(0.2), 0.5, 1.0 / 3.0).value + 0.5 * math.log(0.4))
    hand = max(hand_half, hand_third, hand_half_gen, hand_third_gen)
    return Check("special_alpha_forms", max(worst, hand) <= tol, max(worst, hand),
                 {"ensemble_worst": worst, "hand_worst": hand, "tolerance": tol})


@_timed
def check_special_degeneracy(count: int = 50, seed: int = 0, grid_points: int = 1001,
                     tol: float = 1e-10) -> Check:
    """Capacity-matched channels have identical MI curves at alpha in {1/3, 1/2}."""
    xs = np.linspace(0.0, 1.0, grid_points)
    worst, worst_cap, not_equiv = 0.0, 0.0, 0
    for a in SPECIAL_ALPHAS:
        for w1, w2 in matched_pairs(count, a, seed):
            worst_cap = max(worst_cap, abs(capacity_value(w1, a) - capacity_value(w2, a)))
            worst = max(worst, float(np.max(np.abs(sibson_mi_curve(w1, xs, a) - sibson_mi_curve(w2, xs, a)))))
            not_equiv += sufficient_condition(w1, w2, a).verdict is not Verdict.EQUIVALENT
    passed = worst <= tol and worst_cap <= 1e-12 and not_equiv == 0
    return Check("special_order_degeneracy", passed, worst,
                 {"capacity_mismatch": worst_cap, "non_equivalent_reports": not_equiv, "tolerance": tol})


@_timed
def check_lorenz_transfer(count: int = 200, seed: int = 0, alphas=REGIME_ALPHAS,
                   grid_points: int = 1001, tol: float = 1e-9) -> Check:
    """Every directed Lorenz verdict is confirmed by the exhaustive grid."""
    worst = math.inf
    per_alpha = {}
    fails = 0
    for a in alphas:
        directed = confirmed = 0
        forward = regime(a) is Regime.FORWARD
        expected = Verdict.FIRST_MORE_CAPABLE if forward else Verdict.SECOND_MORE_CAPABLE
        for w1, w2 in matched_pairs(count, a, seed):
            lz = sufficient_condition(w1, w2, a)
            if lz.verdict not in DIRECTED:
                continue
            directed += 1
            # orient so the first argument is the channel with the lower Lorenz curve
            lower_first = lz.details.get("dominance") == "a_leq_b"
            lower, upper = (w1, w2) if lower_first else (w2, w1)
            claimed = lz.verdict if lower_first else (
                Verdict.FIRST_MORE_CAPABLE if lz.verdict is Verdict.SECOND_MORE_CAPABLE
                else Verdict.SECOND_MORE_CAPABLE)
            grid = more_capable_grid(lower, upper, a, grid_points, tol)
            worst = min(worst, grid.worst_gap)
            confirmed += (
                claimed is expected
                and grid.verdict in (expected, Verdict.EQUIVALENT)
                and grid.worst_gap >= -tol
            )
        per_alpha[str(a)] = {"directed": directed, "confirmed": confirmed,
                             "lower_curve_wins": forward}
        fails += (confirmed != directed) + (directed == 0)
    return Check("lorenz_order_transfer", fails == 0, worst if math.isfinite(worst) else 0.0,
                 {"per_alpha": per_alpha, "tolerance": tol})


@_timed
def check_extremal_sandwich(count: int = 50, seed: int = 0, alphas=REGIME_ALPHAS,
                     grid_points: int = 1001, tol: float = 1e-9) -> Check:
    worst = math.inf
    fails = 0
    chans = [c for c in ensemble(count * 2, seed + 17) if not c.is_useless][:count]
    for a in alphas:
        for w in chans:
            if capacity_value(w, a) <= 1e-12:
                continue
            rep = extremality_report(w, a, grid_points, tol)
            worst = min(worst, rep.bec_vs_w.worst_gap, rep.w_vs_bsc.worst_gap)
            fails += not rep.holds
    return Check("extremal_sandwich", fails == 0, worst, {"channels": len(chans), "failures": fails,
                                                            "tolerance": tol})


@_timed
def check_lorenz_identities(channels, alphas=REGIME_ALPHAS, tol: float = 1e-10) -> Check:
    worst_end = 0.0
    worst_order = 0.0
    for ch in channels:
        for a in alphas:
            if ch.is_useless:
                continue
            f = lorenz_curve(ch, a)
            worst_end = max(worst_end, abs(f(0.0)), abs(f(f.d_c) - 1.0))
            c = capacity_value(ch, a)
            e = lorenz_curve(bec(calibrate(Family.BEC, c, a)), a)
            s = lorenz_curve(bsc(calibrate(Family.BSC, c, a)), a)
            low = common_refinement(e, f)
            high = common_refinement(f, s)
            worst_order = max(worst_order, float(np.max(low.values_a - low.values_b)),
                              float(np.max(high.values_a - high.values_b)))
    worst = max(worst_end, worst_order)
    return Check("lorenz_identities", worst <= tol, worst,
                 {"endpoint_worst": worst_end, "extremal_order_worst": worst_order, "tolerance": tol})


@_timed
def check_convexity(alphas=CONVEXITY_ALPHAS) -> Check:
    reports = [convexity_scan(a) for a in alphas]
    return Check("convexity_regimes", all(r.passed for r in reports),
                 max(r.max_violation for r in reports),
                 {"scans": [{"alpha": r.alpha, "expected": r.expected.value,
                             "max_violation": r.max_violation, "passed": r.passed} for r in reports]})


@_timed
def check_arimoto(channels, alphas=REGIME_ALPHAS, xs=(0.05, 0.1, 0.3, 0.5, 0.7, 0.9),
                  grid_points: int = 1001) -> Check:
    tilt_w = chain_w = cap_w = 0.0
    grid = np.linspace(0.0, 1.0, grid_points)
    for ch in channels:
        for a in alphas:
            for x in xs:
                ia = arimoto_mi_biso(ch, x, a).value
                tilt_w = max(tilt_w, abs(ia - sibson_mi_biso(ch, tilt(x, a), a).value))
                chain_w = max(chain_w, abs(arimoto_cond_entropy(ch, x, a) - (binary_entropy_alpha(x, a) - ia)))
            cap_w = max(cap_w, abs(arimoto_mi_curve(ch, grid, a).max() - sibson_mi_curve(ch, grid, a).max()))
    passed = tilt_w <= 1e-12 and chain_w <= 1e-12 and cap_w <= 1e-9
    return Check("arimoto_consistency", passed, max(tilt_w, chain_w, cap_w),
                 {"tilt_worst": tilt_w, "chain_rule_worst": chain_w, "capacity_worst": cap_w})


@_timed
def check_shannon_seam(channels, xs=(0.1, 0.3, 0.5), grid_points: int = 1001,
                       tol: float = 1e-9) -> Check:
    seam = 0.0
    for ch in channels:
        for x in xs:
            s = shannon_mi(ch, x).value
            for a in (1.0 - 1e-4, 1.0 + 1e-4):
                seam = max(seam, abs(sibson_mi_biso(ch, x, a).value - s))
    worst_gap = math.inf
    fails = 0
    for w in channels:
        c = capacity_value(w, 1.0)
        if c <= 1e-12:
            continue
        e = bec(calibrate(Family.BEC, c, 1.0))
        s = bsc(calibrate(Family.BSC, c, 1.0))
        for first, second in ((e, w), (w, s)):
            rep = more_capable_grid(first, second, 1.0, grid_points, tol)
            worst_gap = min(worst_gap, rep.worst_gap)
            fails += rep.verdict not in (Verdict.FIRST_MORE_CAPABLE, Verdict.EQUIVALENT) or rep.worst_gap < -tol
    return Check("shannon_seam", seam <= 1e-3 and fails == 0, seam,
                 {"seam_worst": seam, "classical_sandwich_worst_gap": worst_gap, "failures": fails})


@_timed
def check_calibration(capacities=(0.05, 0.2, 0.4, 0.6), alphas=REGIME_ALPHAS,
                      tol: float = 1e-9) -> Check:
    worst = 0.0
    for a in alphas:
        for c in capacities:
            p = calibrate(Family.BSC, c, a)
            eps = calibrate(Family.BEC, c, a)
            worst = max(worst, abs(alpha_capacity(bsc(p), a).c_alpha - c),
                        abs(alpha_capacity(bec(eps), a).c_alpha - c))
    return Check("calibration_round_trip", worst <= tol, worst, {"tolerance": tol})


@_timed
def check_hajek(trials: int = 10_000, corrupted: int = 1000, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    holds = 0
    instances = []
    for _ in range(trials):
        x, y, xi = random_hajek_instance(rng)
        instances.append((x, y, xi))
        holds += hajek_check(x, y, xi, random_convex_function(rng)) is HajekOutcome.HOLDS
    rejected = 0
    for i in range(corrupted):
        x, y, xi = instances[i % len(instances)]
        bx, by, bxi = corrupt_hajek_instance(rng, x, y, xi)
        rejected += hajek_check(bx, by, bxi, random_convex_function(rng)) is HajekOutcome.PREMISE_NOT_MET
    return Check("hajek_inequality", holds == trials and rejected == corrupted,
                 float(trials - holds + corrupted - rejected),
                 {"holds": holds, "trials": trials, "rejected": rejected, "corrupted": corrupted})


# ------------------------------------------------------------------ runner


def run_suite(name: str = "all", seed: int = 0, quick: bool = False) -> list[Check]:
    """Run the named suite (or ``"all"``) and return its checks in a fixed order."""
    n = 12 if quick else 100
    grid = 201 if quick else 1001
    chans = ensemble(n, seed)
    registry: dict[str, Callable[[], Check]] = {
        "variational": lambda: check_variational(chans),
        "capacity": lambda: check_capacity_half(chans, grid_points=grid),
        "special": lambda: check_special_forms(chans),
        "degeneracy": lambda: check_special_degeneracy(10 if quick else 50, seed, grid),
        "transfer": lambda: check_lorenz_transfer(20 if quick else 200, seed, grid_points=grid),
        "sandwich": lambda: check_extremal_sandwich(5 if quick else 50, seed, grid_points=grid),
        "lorenz": lambda: check_lorenz_identities(chans),
        "convexity": lambda: check_convexity(),
        "arimoto": lambda: check_arimoto(chans, grid_points=grid),
        "shannon": lambda: check_shannon_seam(chans, grid_points=grid),
        "calibration": lambda: check_calibration(),
        "hajek": lambda: check_hajek(1000 if quick else 10_000, 100 if quick else 1000, seed),
    }
    if name == "all":
        return [fn() for fn in registry.values()]
    if name not in registry:
        raise DomainError(f"unknown suite {name!r}; choose from all, {', '.join(registry)}")
    return [registry[name]()]


SUITE_NAMES = ("all", "variational", "capacity", "special", "degeneracy", "transfer",
               "sandwich", "lorenz", "convexity", "arimoto", "shannon", "calibration", "hajek")
