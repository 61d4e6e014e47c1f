"""Network selection: pick routes maximizing probability-weighted profit under fleet limits.

Each candidate arrives with a pre-assigned fleet and an integer aircraft
need, so the selection is a 0/1 knapsack with one capacity dimension per
fleet type. Up to EXACT_SEARCH_LIMIT candidates the plan is solved exactly by
depth-first branch and bound; larger instances fall back to a greedy ratio
heuristic and the plan is flagged accordingly. Selection is a pure function
of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import UnknownFleet

EXACT_SEARCH_LIMIT = 24


@dataclass(frozen=True)
class RouteCandidate:
    """A route with its assigned fleet, weekly profit, and success probability."""

    route_id: str
    fleet_name: str
    profit_per_week: float
    total_probability: float
    aircraft_needed: int

    def __post_init__(self):
        if not self.route_id:
            raise ValueError("route_id must be nonempty")
        if not (0.0 <= self.total_probability <= 1.0):
            raise ValueError(
                f"total_probability must be in [0, 1], got {self.total_probability!r}"
            )
        if self.aircraft_needed < 0:
            raise ValueError(f"aircraft_needed must be >= 0, got {self.aircraft_needed!r}")


@dataclass(frozen=True)
class FleetAvailability:
    """Aircraft available per fleet type."""

    counts: dict[str, int]

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(self.counts))
        for name, count in self.counts.items():
            if count < 0:
                raise ValueError(f"availability for {name!r} must be >= 0, got {count!r}")

    def __contains__(self, name: str) -> bool:
        return name in self.counts

    def get(self, name: str) -> int:
        return self.counts[name]

    def items(self):
        return self.counts.items()


@dataclass(frozen=True)
class NetworkPlan:
    """Selected routes, fleet usage, and the achieved total score."""

    selected: tuple[str, ...]
    used: dict[str, int]
    total_score: float
    per_route_scores: dict[str, float]
    heuristic: bool = False


def score_candidate(candidate: RouteCandidate) -> float:
    """Probability-weighted expected weekly profit."""
    return candidate.total_probability * candidate.profit_per_week


def rank_routes(candidates: list[RouteCandidate]) -> list[RouteCandidate]:
    """Candidates ordered by score descending, ties by route_id ascending."""
    return sorted(candidates, key=lambda c: (-score_candidate(c), c.route_id))


def _check_candidates(candidates: list[RouteCandidate], availability: FleetAvailability) -> None:
    seen = set()
    for c in candidates:
        if c.route_id in seen:
            raise ValueError(f"duplicate candidate route_id {c.route_id!r}")
        seen.add(c.route_id)
        if c.fleet_name not in availability:
            raise UnknownFleet(
                f"candidate {c.route_id!r} needs fleet {c.fleet_name!r}, "
                "which availability does not list"
            )


def _exact_select(items: list[tuple[RouteCandidate, float]], availability: FleetAvailability):
    """Branch and bound over id-sorted positive-score candidates.

    Scores accumulate left to right in route_id order, so the reported total
    matches a plain ordered sum over the selected set. Ties in score resolve
    toward the lexicographically smallest selected id tuple; pruning is
    strict-only so tying subtrees stay reachable.
    """
    items = sorted(items, key=lambda cs: cs[0].route_id)
    n = len(items)
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][1]
    best_score = 0.0
    best_sel: tuple[str, ...] = ()
    used = {name: 0 for name, _ in availability.items()}
    sel: list[str] = []

    def visit(idx: int, score: float) -> None:
        nonlocal best_score, best_sel
        if idx == n:
            here = tuple(sel)
            if score > best_score or (score == best_score and here < best_sel):
                best_score = score
                best_sel = here
            return
        if score + suffix[idx] < best_score:
            return
        cand, cand_score = items[idx]
        if used[cand.fleet_name] + cand.aircraft_needed <= availability.get(cand.fleet_name):
            used[cand.fleet_name] += cand.aircraft_needed
            sel.append(cand.route_id)
            visit(idx + 1, score + cand_score)
            sel.pop()
            used[cand.fleet_name] -= cand.aircraft_needed
        visit(idx + 1, score)

    visit(0, 0.0)
    return best_score, best_sel


def _greedy_select(items: list[tuple[RouteCandidate, float]], availability: FleetAvailability):
    """Score-per-aircraft greedy; zero-need candidates rank first."""

    def ratio(cs):
        cand, score = cs
        return score / cand.aircraft_needed if cand.aircraft_needed else float("inf")

    ordered = sorted(items, key=lambda cs: (-ratio(cs), cs[0].route_id))
    used = {name: 0 for name, _ in availability.items()}
    chosen = []
    for cand, _ in ordered:
        if used[cand.fleet_name] + cand.aircraft_needed <= availability.get(cand.fleet_name):
            used[cand.fleet_name] += cand.aircraft_needed
            chosen.append(cand.route_id)
    chosen.sort()
    by_id = {cand.route_id: score for cand, score in items}
    total = 0.0
    for rid in chosen:
        total += by_id[rid]
    return total, tuple(chosen)


def select_routes(
    candidates: list[RouteCandidate],
    availability: FleetAvailability | Mapping[str, int],
) -> NetworkPlan:
    """Choose the subset of candidates maximizing total score within availability.

    Candidates with nonpositive score are never selected. The exact search
    runs for at most EXACT_SEARCH_LIMIT positive-score candidates; beyond
    that a greedy heuristic runs and the plan carries ``heuristic=True``.
    """
    if not isinstance(availability, FleetAvailability):
        availability = FleetAvailability(dict(availability))
    _check_candidates(candidates, availability)
    scores = {c.route_id: score_candidate(c) for c in candidates}
    positive = [(c, scores[c.route_id]) for c in candidates if scores[c.route_id] > 0.0]
    heuristic = len(positive) > EXACT_SEARCH_LIMIT
    if heuristic:
        total, chosen = _greedy_select(positive, availability)
    else:
        total, chosen = _exact_select(positive, availability)
    by_id = {c.route_id: c for c in candidates}
    used = {name: 0 for name, _ in availability.items()}
    for rid in chosen:
        cand = by_id[rid]
        used[cand.fleet_name] += cand.aircraft_needed
    return NetworkPlan(
        selected=chosen,
        used=used,
        total_score=total,
        per_route_scores=scores,
        heuristic=heuristic,
    )
