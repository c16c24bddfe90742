"""Power-allocation schemes.

Covers the classic water-filling allocation (rate-optimal under an average
power budget), the closed-form single-link energy-efficiency optimum, a
Dinkelbach solver for the global-EE ratio over parallel channels, and
budgeted multi-link solvers for the sum, product, and max-min weighted-EE
objectives.

Conventions: rates are in nats (natural log); converting to bits is a
reporting concern, never a solver concern. Noise power is normalized to 1,
so a channel gain is the SNR delivered by 1 W of transmit power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, NumericalError
from .numerics import bisect, lambert_w0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# Water level used for the very first Dinkelbach subproblem (price zero) when
# no total-power cap bounds it.
_FREE_LEVEL_SCALE = 1e3


@dataclass(frozen=True)
class LinkConfig:
    """Per-link constants: circuit power, optional power cap, weight."""

    pc: float
    p_max: float | None = None
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.pc) and self.pc > 0.0):
            raise ValueError(f"circuit power must be positive and finite, got {self.pc}")
        if self.p_max is not None and not (math.isfinite(self.p_max) and self.p_max > 0.0):
            raise ValueError(f"p_max must be positive and finite, got {self.p_max}")
        if not (math.isfinite(self.weight) and self.weight > 0.0):
            raise ValueError(f"weight must be positive and finite, got {self.weight}")


@dataclass
class Allocation:
    """Per-dimension transmit powers plus the objective value they achieve."""

    powers: np.ndarray
    objective: float

    def __post_init__(self) -> None:
        self.powers = np.asarray(self.powers, dtype=float)


@dataclass
class GeeProblem:
    """Global-EE maximization instance: parallel gains sharing one circuit power."""

    gains: np.ndarray
    pc: float
    p_max_total: float | None = None

    def __post_init__(self) -> None:
        self.gains = np.asarray(self.gains, dtype=float)
        if self.gains.ndim != 1 or self.gains.size < 1:
            raise ValueError("gains must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(self.gains)) or np.any(self.gains < 0.0):
            raise ValueError("gains must be finite and non-negative")
        if not np.any(self.gains > 0.0):
            raise InfeasibleError("at least one gain must be positive")
        if not self.pc > 0.0:
            raise ValueError(f"circuit power must be positive, got {self.pc}")
        if self.p_max_total is not None and not self.p_max_total > 0.0:
            raise ValueError(f"p_max_total must be positive, got {self.p_max_total}")


def se_of(gamma: float, p: float) -> float:
    """Spectral efficiency ln(1 + gamma * p) in nats/s/Hz."""
    if p < 0.0:
        raise ValueError(f"power must be non-negative, got {p}")
    return math.log1p(gamma * p)


def ee_of(gamma: float, p: float, cfg: LinkConfig) -> float:
    """Energy efficiency se / (pc + p) in nats/J."""
    return se_of(gamma, p) / (cfg.pc + p)


def eepa(gamma: float, cfg: LinkConfig) -> float:
    """Transmit power maximizing the link energy efficiency.

    Closed form: (exp(1 + W((gamma * pc - 1) / e)) - 1) / gamma with W the
    principal Lambert branch. The EE is pseudo-concave in the power, so when
    a cap is present the capped optimum is simply the clipped value. A zero
    gain yields zero power.
    """
    if gamma < 0.0 or not math.isfinite(gamma):
        raise ValueError(f"gain must be finite and non-negative, got {gamma}")
    if not cfg.pc > 0.0:
        raise ValueError(f"circuit power must be positive, got {cfg.pc}")
    if gamma == 0.0:
        return 0.0
    arg = (gamma * cfg.pc - 1.0) / math.e
    p = (math.exp(1.0 + lambert_w0(arg)) - 1.0) / gamma
    p = max(p, 0.0)
    if cfg.p_max is not None:
        p = min(p, cfg.p_max)
    return p


def wpa(gains, p_avg: float) -> Allocation:
    """Water-filling power allocation: maximizes the sum rate at mean power p_avg.

    Powers are max(0, level - 1/gain) with the water level found by bisection
    so that the mean allocated power matches p_avg (to ~1e-12 relative).
    The reported objective is the achieved sum rate.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise ValueError("gains must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(g)) or np.any(g < 0.0):
        raise ValueError("gains must be finite and non-negative")
    if not p_avg > 0.0:
        raise ValueError(f"p_avg must be positive, got {p_avg}")
    positive = g > 0.0
    if not positive.any():
        raise InfeasibleError("water-filling needs at least one positive gain")
    with np.errstate(divide="ignore"):
        inv = np.where(positive, 1.0 / np.where(positive, g, 1.0), np.inf)

    def mean_power(level: float) -> float:
        return float(np.maximum(0.0, level - inv).mean())

    hi = float(inv[positive].max()) + 2.0 * p_avg * g.size / int(positive.sum())
    level = bisect(lambda w: mean_power(w) - p_avg, 0.0, hi, tol=1e-13 * hi)
    powers = np.maximum(0.0, level - inv)
    rate = float(np.log1p(g * powers).sum())
    return Allocation(powers, rate)


def _capped_level(inv: np.ndarray, total: float) -> float:
    """Water level at which the summed powers hit the given total."""
    finite = inv[np.isfinite(inv)]
    hi = float(finite.min()) + 2.0 * total
    return bisect(
        lambda w: float(np.maximum(0.0, w - inv).sum()) - total, 0.0, hi, tol=1e-13 * hi
    )


def gee_dinkelbach(prob: GeeProblem, tol: float) -> Allocation:
    """Maximize the global EE  sum_i ln(1 + g_i p_i) / (pc + sum_i p_i).

    Dinkelbach iteration: at price eta the subproblem max R(p) - eta * sum(p)
    is water-filling with level 1/eta; eta is then refreshed to the achieved
    ratio. Terminates once R - eta_prev * (pc + sum p) <= tol. The first
    subproblem (eta = 0) uses either the cap-saturating level or a large
    fallback level of 1e3 / min positive gain.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    g = prob.gains
    positive = g > 0.0
    with np.errstate(divide="ignore"):
        inv = np.where(positive, 1.0 / np.where(positive, g, 1.0), np.inf)
    cap = prob.p_max_total

    eta = 0.0
    for _ in range(1000):
        if eta <= 0.0:
            level = _capped_level(inv, cap) if cap is not None else _FREE_LEVEL_SCALE / g[positive].min()
        else:
            level = 1.0 / eta
        powers = np.maximum(0.0, level - inv)
        if cap is not None and powers.sum() > cap * (1.0 + 1e-12):
            level = _capped_level(inv, cap)
            powers = np.maximum(0.0, level - inv)
        rate = float(np.log1p(g * powers).sum())
        total = prob.pc + float(powers.sum())
        if rate - eta * total <= tol:
            return Allocation(powers, rate / total)
        eta = rate / total
    raise NumericalError("gee_dinkelbach: no convergence after 1000 iterations")


def wmee_maxmin(gains, cfgs, p_total: float) -> Allocation:
    """Maximize the minimum weighted link EE under a total power budget.

    Bisection on the common level t: for each link the minimal power reaching
    weight * EE = t sits on the rising branch of the (unimodal) EE curve and
    is found by an inner bisection; t is feasible when those powers fit the
    budget. At the returned point all weighted EEs are equalized whenever the
    budget binds.
    """
    g, cfgs = _check_links(gains, cfgs)
    if not p_total > 0.0:
        raise ValueError(f"p_total must be positive, got {p_total}")
    n = g.size
    peaks = np.array([eepa(g[i], cfgs[i]) for i in range(n)])
    tops = np.array([cfgs[i].weight * ee_of(g[i], peaks[i], cfgs[i]) for i in range(n)])
    t_hi = float(tops.min())
    if t_hi <= 0.0:
        return Allocation(np.zeros(n), 0.0)

    def powers_at(t: float) -> np.ndarray:
        if t <= 0.0:
            return np.zeros(n)
        out = np.empty(n)
        for i in range(n):
            w = cfgs[i].weight

            def shortfall(p: float, i=i, w=w) -> float:
                return w * ee_of(g[i], p, cfgs[i]) - t

            out[i] = bisect(shortfall, 0.0, peaks[i], tol=1e-13 * (1.0 + peaks[i]))
        return out

    p_hi = powers_at(t_hi)
    if p_hi.sum() <= p_total:
        return Allocation(p_hi, t_hi)
    lo, hi = 0.0, t_hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if powers_at(mid).sum() <= p_total:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * t_hi:
            break
    return Allocation(powers_at(lo), lo)


def wsee_ascent(gains, cfgs, p_total: float) -> Allocation:
    """Maximize the weighted sum of link EEs under a total power budget.

    Projected coordinate ascent: cyclic golden-section maximization of each
    power within its remaining-budget interval, plus golden-section line
    searches along pairwise power transfers once the budget face binds (plain
    per-coordinate steps stall there). The objective is nonconvex; the result
    is a stationary point, cross-checked against a grid oracle in tests.
    """
    return _budget_ascent(gains, cfgs, p_total, log_terms=False)


def wpee_ascent(gains, cfgs, p_total: float) -> Allocation:
    """Maximize the weighted product of link EEs under a total power budget.

    Works on the monotone transform sum_i log(w_i EE_i); the reported
    objective is the product itself. Any link with zero gain collapses the
    product identically to zero, so such instances are rejected.
    """
    g, _ = _check_links(gains, cfgs)
    if np.any(g == 0.0):
        raise InfeasibleError("product objective is degenerate when a link has zero gain")
    return _budget_ascent(gains, cfgs, p_total, log_terms=True)


def _check_links(gains, cfgs):
    g = np.asarray(gains, dtype=float)
    cfgs = list(cfgs)
    if g.ndim != 1 or g.size < 1:
        raise ValueError("gains must be a non-empty 1-D sequence")
    if len(cfgs) != g.size:
        raise ValueError(f"got {g.size} gains but {len(cfgs)} link configs")
    if not np.all(np.isfinite(g)) or np.any(g < 0.0):
        raise ValueError("gains must be finite and non-negative")
    return g, cfgs


def _golden_max(f, lo: float, hi: float):
    """Golden-section maximizer of a unimodal f on [lo, hi]."""
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(120):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        if b - a <= 1e-13 * (1.0 + abs(a) + abs(b)):
            break
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _budget_ascent(gains, cfgs, p_total: float, log_terms: bool) -> Allocation:
    g, cfgs = _check_links(gains, cfgs)
    if not p_total > 0.0:
        raise ValueError(f"p_total must be positive, got {p_total}")
    n = g.size
    peaks = np.array([eepa(g[i], cfgs[i]) for i in range(n)])
    caps = np.array([c.p_max if c.p_max is not None else math.inf for c in cfgs])

    def term(i: int, p: float) -> float:
        v = cfgs[i].weight * ee_of(g[i], max(p, 0.0), cfgs[i])
        if log_terms:
            return math.log(v) if v > 0.0 else -math.inf
        return v

    def total(p: np.ndarray) -> float:
        return sum(term(i, p[i]) for i in range(n))

    p = np.minimum(peaks, caps)
    s = float(p.sum())
    if s > p_total:
        p *= p_total / s
    obj = total(p)
    for _ in range(500):
        for i in range(n):
            slack = p_total - (float(p.sum()) - p[i])
            hi = min(slack, caps[i], peaks[i])
            if hi <= 0.0:
                continue
            x, fx = _golden_max(lambda t, i=i: term(i, t), 0.0, hi)
            if fx > term(i, p[i]):
                p[i] = x
        if n >= 2 and float(p.sum()) >= p_total - 1e-9 * max(1.0, p_total):
            for i in range(n):
                for j in range(i + 1, n):
                    t_lo = max(-p[i], p[j] - caps[j])
                    t_hi = min(p[j], caps[i] - p[i])
                    if t_hi - t_lo <= 1e-12:
                        continue

                    def shifted(t: float, i=i, j=j) -> float:
                        return term(i, p[i] + t) + term(j, p[j] - t)

                    # coarse scan to bracket the best basin, then refine
                    ts = np.linspace(t_lo, t_hi, 33)
                    vals = [shifted(t) for t in ts]
                    k = int(np.argmax(vals))
                    t_star, best = _golden_max(shifted, ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)])
                    if best > term(i, p[i]) + term(j, p[j]):
                        p[i] += t_star
                        p[j] -= t_star
        new = total(p)
        if new - obj <= 1e-9:
            obj = max(obj, new)
            break
        obj = new
    p = np.maximum(p, 0.0)
    return Allocation(p, math.exp(obj) if log_terms else obj)
