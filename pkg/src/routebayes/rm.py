"""Single-leg revenue management: two fare classes, protection, overbooking.

Booking protocol: low-fare requests arrive first and are accepted up to the
booking limit minus the protection level; high-fare requests then fill the
rest of the booking limit. Accepted passengers show up independently with
``show_up_prob``; fares are collected from the passengers who show, and every
survivor beyond physical capacity costs a flat denied-boarding amount.

Expectations are exact sums over the truncated demand distributions (tail
mass below 1e-9). The Monte Carlo path uses numpy's PCG64 generator seeded
explicitly; draw order per trial is low demand, high demand, low show-ups,
high show-ups, so identical inputs and seed reproduce summaries bit for bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InvalidPolicy

logger = logging.getLogger(__name__)

TAIL_MASS = 1e-9
OVERBOOKING_SEARCH_FACTOR = 3


@dataclass(frozen=True)
class DemandModel:
    """Truncated demand distribution on {0, 1, ..., truncation}."""

    kind: str
    pmf: tuple[float, ...]
    mean_param: float | None = None

    @classmethod
    def poisson(cls, mean: float) -> "DemandModel":
        """Poisson demand truncated where the tail mass drops below 1e-9."""
        if mean < 0:
            raise ValueError(f"poisson mean must be >= 0, got {mean!r}")
        if mean == 0:
            return cls("poisson", (1.0,), 0.0)
        t = max(0, int(stats.poisson.isf(TAIL_MASS, mean)))
        while stats.poisson.sf(t, mean) >= TAIL_MASS:
            t += 1
        while t > 0 and stats.poisson.sf(t - 1, mean) < TAIL_MASS:
            t -= 1
        pmf = stats.poisson.pmf(np.arange(t + 1), mean)
        return cls("poisson", tuple(float(p) for p in pmf), float(mean))

    @classmethod
    def discrete(cls, pmf: list[float]) -> "DemandModel":
        """Explicit pmf over {0..len-1}; must sum to 1 within 1e-9."""
        values = tuple(float(p) for p in pmf)
        if not values:
            raise ValueError("pmf must be nonempty")
        for i, p in enumerate(values):
            if not math.isfinite(p) or p < 0:
                raise ValueError(f"pmf[{i}] must be a finite nonnegative number, got {p!r}")
        total = math.fsum(values)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"pmf sums to {total!r}, outside 1 +/- 1e-9")
        return cls("discrete", values)

    @classmethod
    def deterministic(cls, value: int) -> "DemandModel":
        """Point mass at ``value``."""
        if value < 0:
            raise ValueError(f"demand must be >= 0, got {value!r}")
        return cls.discrete([0.0] * value + [1.0])

    @property
    def truncation(self) -> int:
        return len(self.pmf) - 1

    def survival(self, y: int) -> float:
        """P(D > y) on the truncated support."""
        if y >= self.truncation:
            return 0.0
        return math.fsum(self.pmf[max(y, -1) + 1 :])

    def mean(self) -> float:
        return math.fsum(k * p for k, p in enumerate(self.pmf))


@dataclass(frozen=True)
class LegRMProblem:
    """One flight leg with two fare classes and no-show behavior."""

    capacity: int
    fare_high: float
    fare_low: float
    demand_high: DemandModel
    demand_low: DemandModel
    show_up_prob: float = 1.0
    denied_cost: float = 0.0

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity!r}")
        if not (0.0 < self.fare_low <= self.fare_high):
            raise ValueError(
                f"fares must satisfy 0 < fare_low <= fare_high, got "
                f"low={self.fare_low!r} high={self.fare_high!r}"
            )
        if not (0.0 < self.show_up_prob <= 1.0):
            raise ValueError(f"show_up_prob must be in (0, 1], got {self.show_up_prob!r}")
        if self.denied_cost < 0:
            raise ValueError(f"denied_cost must be >= 0, got {self.denied_cost!r}")


@dataclass(frozen=True)
class RMPolicy:
    """Seats protected for the high fare plus the total booking authorization."""

    protection_level: int
    booking_limit: int

    def __post_init__(self):
        if self.protection_level < 0:
            raise InvalidPolicy(f"protection_level must be >= 0, got {self.protection_level!r}")
        if self.booking_limit < 0:
            raise InvalidPolicy(f"booking_limit must be >= 0, got {self.booking_limit!r}")


def _check_policy(problem: LegRMProblem, policy: RMPolicy) -> None:
    if not (0 <= policy.protection_level <= problem.capacity <= policy.booking_limit):
        raise InvalidPolicy(
            f"need 0 <= protection ({policy.protection_level}) <= capacity "
            f"({problem.capacity}) <= booking_limit ({policy.booking_limit})"
        )


def littlewood_protection(problem: LegRMProblem) -> int:
    """Smallest protection level y with P(high demand > y) <= fare_low / fare_high.

    Evaluated on the truncated high-fare demand, so a level always exists.
    """
    ratio = problem.fare_low / problem.fare_high
    dist = problem.demand_high
    for y in range(dist.truncation + 1):
        if dist.survival(y) <= ratio:
            return y
    return dist.truncation


def _overage_table(max_booked: int, capacity: int, p: float) -> list[float]:
    """E[max(0, survivors - capacity)] for each number of accepted bookings."""
    table = [0.0] * (max_booked + 1)
    for m in range(capacity + 1, max_booked + 1):
        if p == 1.0:
            table[m] = float(m - capacity)
        else:
            k = np.arange(capacity + 1, m + 1)
            table[m] = float(np.sum(stats.binom.pmf(k, m, p) * (k - capacity)))
    return table


def expected_revenue(problem: LegRMProblem, policy: RMPolicy) -> float:
    """Exact expected revenue of the policy under the booking protocol."""
    _check_policy(problem, policy)
    low_cap = policy.booking_limit - policy.protection_level
    over = _overage_table(policy.booking_limit, problem.capacity, problem.show_up_prob)
    p = problem.show_up_prob
    terms = []
    for d_low, w_low in enumerate(problem.demand_low.pmf):
        acc_low = min(d_low, low_cap)
        high_room = policy.booking_limit - acc_low
        for d_high, w_high in enumerate(problem.demand_high.pmf):
            acc_high = min(d_high, high_room)
            fares = p * (acc_low * problem.fare_low + acc_high * problem.fare_high)
            penalty = problem.denied_cost * over[acc_low + acc_high]
            terms.append(w_low * w_high * (fares - penalty))
    return math.fsum(terms)


def overbooking_limit(problem: LegRMProblem) -> int:
    """Largest booking limit whose marginal booking still pays.

    The marginal condition is fare_low - denied_cost * P(survivors of the
    previous bookings >= capacity) > 0, with survivors binomial in the
    show-up probability. The search stops at 3x capacity; hitting that cap is
    logged since it means overbooking incentives never turned negative.
    """
    cap = problem.capacity
    p = problem.show_up_prob
    limit = cap
    bound = OVERBOOKING_SEARCH_FACTOR * cap
    for b in range(cap + 1, bound + 1):
        if p == 1.0:
            prob_full = 1.0 if b - 1 >= cap else 0.0
        else:
            prob_full = float(stats.binom.sf(cap - 1, b - 1, p))
        if problem.fare_low - problem.denied_cost * prob_full > 0.0:
            limit = b
        else:
            break
    if limit == bound:
        logger.info("overbooking search hit the %dx capacity bound", OVERBOOKING_SEARCH_FACTOR)
    return limit


def fcfs_baseline(problem: LegRMProblem) -> float:
    """Expected revenue with no protection and no overbooking."""
    return expected_revenue(problem, RMPolicy(0, problem.capacity))


@dataclass(frozen=True)
class LegSimulationSummary:
    trials: int
    mean_revenue: float
    mean_load_factor: float
    denied_rate: float
    spill_rate: float
    mean_revenue_se: float


def _sample_demand(model: DemandModel, uniforms: np.ndarray) -> np.ndarray:
    cum = np.cumsum(np.asarray(model.pmf))
    draws = np.searchsorted(cum, uniforms, side="right")
    return np.minimum(draws, model.truncation).astype(np.int64)


def simulate_leg(
    problem: LegRMProblem, policy: RMPolicy, trials: int, seed: int
) -> LegSimulationSummary:
    """Seeded Monte Carlo of the booking protocol.

    Uses numpy's PCG64 stream (``numpy.random.default_rng(seed)``); per trial
    the draws are low demand, high demand, then binomial show-ups per class.
    denied_rate is denied passengers over all survivors, spill_rate is
    rejected requests over all requests (0 when the denominator is 0).
    """
    _check_policy(problem, policy)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    rng = np.random.default_rng(seed)
    d_low = _sample_demand(problem.demand_low, rng.random(trials))
    d_high = _sample_demand(problem.demand_high, rng.random(trials))
    acc_low = np.minimum(d_low, policy.booking_limit - policy.protection_level)
    acc_high = np.minimum(d_high, policy.booking_limit - acc_low)
    if problem.show_up_prob == 1.0:
        show_low, show_high = acc_low, acc_high
    else:
        show_low = rng.binomial(acc_low, problem.show_up_prob)
        show_high = rng.binomial(acc_high, problem.show_up_prob)
    survivors = show_low + show_high
    boarded = np.minimum(survivors, problem.capacity)
    denied = survivors - boarded
    revenue = (
        problem.fare_low * show_low
        + problem.fare_high * show_high
        - problem.denied_cost * denied
    )
    spill = (d_low - acc_low) + (d_high - acc_high)
    requests = d_low + d_high
    total_survivors = int(survivors.sum())
    total_requests = int(requests.sum())
    if trials > 1:
        se = float(revenue.std(ddof=1)) / math.sqrt(trials)
    else:
        se = 0.0
    return LegSimulationSummary(
        trials=trials,
        mean_revenue=float(revenue.mean()),
        mean_load_factor=float((boarded / problem.capacity).mean()),
        denied_rate=float(denied.sum()) / total_survivors if total_survivors else 0.0,
        spill_rate=float(spill.sum()) / total_requests if total_requests else 0.0,
        mean_revenue_se=se,
    )
