"""Pipeline orchestration: evaluate -> optimize -> plan -> rm over one scenario.

Stages always execute in that fixed order. Requesting ``plan`` implies the
evaluate computation (and ``optimize`` needs it too); the report still
contains only the sections that were requested. When optimize runs, the
optimized weights feed the plan stage's probability-weighted scores,
otherwise the scenario's prior weights do. Reports are deterministic for a
fixed scenario, stage set, trial count, and seed; only the timestamp varies.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable

import numpy as np

from . import __version__
from .bayes import Evaluation, LikelihoodVector, WeightVector, evaluate, total_probability
from .economics import FleetRequirement, FleetType, Route, component_likelihoods, fleet_requirement, range_feasible, route_profit
from .errors import RouteBayesError, ValidationError
from .optimizer import BoxConstraints, OptimizationResult, optimize_weights, sensitivity
from .planner import NetworkPlan, RouteCandidate, select_routes
from .report import Report
from .rm import RMPolicy, expected_revenue, fcfs_baseline, littlewood_protection, overbooking_limit, simulate_leg
from .scenario import Scenario, round_tree

STAGES = ("evaluate", "optimize", "plan", "rm")
DEFAULT_TRIALS = 10_000


@dataclass(frozen=True)
class RouteEvaluation:
    """Everything the pipeline derives for one route."""

    route: Route
    fleet: FleetType
    requirement: FleetRequirement
    profit: float
    likelihoods: LikelihoodVector
    evaluation: Evaluation
    score: float


def _normalize_stages(stages: Iterable[str]) -> tuple[str, ...]:
    requested = set(stages)
    unknown = requested - set(STAGES)
    if unknown:
        raise ValueError(f"unknown stages: {sorted(unknown)}; valid stages are {STAGES}")
    return tuple(s for s in STAGES if s in requested)


@contextmanager
def _stage_context(name: str):
    """Prefix toolkit errors with the stage they surfaced in, keeping the type."""
    try:
        yield
    except RouteBayesError as exc:
        exc.args = (f"stage {name}: {exc}",) + exc.args[1:]
        raise


def _assign_fleet(scenario: Scenario, route: Route) -> FleetType:
    pinned = scenario.pinned_fleets.get(route.id)
    if pinned is not None:
        return scenario.fleet_by_name(pinned)
    feasible = [f for f in scenario.fleets if range_feasible(route, f)]
    if not feasible:
        raise ValidationError(f"routes[{route.id}]", "no fleet with sufficient range")

    def profit_of(fleet: FleetType) -> float:
        req = fleet_requirement(route, fleet, scenario.target_load_factor)
        return route_profit(route, fleet, req.flights_per_week)

    return min(feasible, key=lambda f: (-profit_of(f), f.name))


def evaluate_routes(scenario: Scenario) -> list[RouteEvaluation]:
    """Assign fleets, size the operation, and score every route in order."""
    rows = []
    for route in scenario.routes:
        fleet = _assign_fleet(scenario, route)
        req = fleet_requirement(route, fleet, scenario.target_load_factor)
        profit = route_profit(route, fleet, req.flights_per_week)
        likelihoods = component_likelihoods(route, profit, scenario.anchors)
        ev = evaluate(scenario.hypotheses, scenario.weights, likelihoods)
        rows.append(
            RouteEvaluation(
                route=route,
                fleet=fleet,
                requirement=req,
                profit=profit,
                likelihoods=likelihoods,
                evaluation=ev,
                score=ev.total_probability * profit,
            )
        )
    return rows


def mean_likelihoods(rows: list[RouteEvaluation]) -> LikelihoodVector:
    """Per-driver mean of the route likelihood vectors.

    The total probability is linear in the weights, so optimizing against the
    mean vector maximizes the network-average total probability.
    """
    if not rows:
        raise ValidationError("routes", "optimization requires at least one route")
    n = len(rows[0].likelihoods)
    means = tuple(
        math.fsum(row.likelihoods[i] for row in rows) / len(rows) for i in range(n)
    )
    return LikelihoodVector(means)


def _optimize(scenario: Scenario, rows: list[RouteEvaluation]):
    likelihoods = mean_likelihoods(rows)
    constraints = scenario.constraints
    if constraints is None:
        constraints = BoxConstraints.full(len(scenario.hypotheses))
    result = optimize_weights(likelihoods, constraints)
    coeffs = sensitivity(result.weights, likelihoods)
    return result, coeffs


def build_candidates(rows: list[RouteEvaluation], weights: WeightVector) -> list[RouteCandidate]:
    return [
        RouteCandidate(
            route_id=row.route.id,
            fleet_name=row.fleet.name,
            profit_per_week=row.profit,
            total_probability=total_probability(weights, row.likelihoods),
            aircraft_needed=row.requirement.aircraft_count,
        )
        for row in rows
    ]


def _leg_seed(base_seed: int, index: int) -> int:
    """Stable 64-bit per-leg stream seed derived from (scenario seed, leg index)."""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1, np.uint64)[0])


def _evaluation_section(scenario: Scenario, rows: list[RouteEvaluation]) -> dict:
    return round_tree(
        {
            "hypotheses": list(scenario.hypotheses.ids),
            "weights": list(scenario.weights.values),
            "target_load_factor": scenario.target_load_factor,
            "routes": [
                {
                    "route_id": row.route.id,
                    "fleet": row.fleet.name,
                    "flights_per_week": row.requirement.flights_per_week,
                    "aircraft": row.requirement.aircraft_count,
                    "achieved_load_factor": row.requirement.achieved_load_factor,
                    "profit": row.profit,
                    "likelihoods": list(row.likelihoods.values),
                    "total_probability": row.evaluation.total_probability,
                    "posterior": list(row.evaluation.posterior.values),
                    "top_driver": row.evaluation.top_contributor(),
                    "score": row.score,
                }
                for row in rows
            ],
        }
    )


def _optimization_section(scenario: Scenario, result: OptimizationResult, coeffs) -> dict:
    return round_tree(
        {
            "hypotheses": list(scenario.hypotheses.ids),
            "weights": list(result.weights.values),
            "objective": result.objective,
            "active_bounds": list(result.active_bounds),
            "sensitivity": list(coeffs),
        }
    )


def _plan_section(scenario: Scenario, plan: NetworkPlan, weights_label: str) -> dict:
    return round_tree(
        {
            "weights_used": weights_label,
            "selected": list(plan.selected),
            "used": dict(plan.used),
            "availability": dict(scenario.availability.counts),
            "total_score": plan.total_score,
            "per_route_scores": dict(plan.per_route_scores),
            "heuristic": plan.heuristic,
        }
    )


def _rm_section(scenario: Scenario, trials: int, seed: int) -> dict:
    legs = []
    for index, leg in enumerate(scenario.rm_legs):
        problem = leg.problem
        protection = littlewood_protection(problem)
        limit = overbooking_limit(problem)
        policy = RMPolicy(protection_level=protection, booking_limit=limit)
        expected = expected_revenue(problem, policy)
        fcfs = fcfs_baseline(problem)
        uplift = 100.0 * (expected - fcfs) / fcfs if fcfs != 0.0 else None
        summary = simulate_leg(problem, policy, trials, _leg_seed(seed, index))
        legs.append(
            {
                "leg_id": leg.id,
                "protection_level": protection,
                "booking_limit": limit,
                "expected_revenue": expected,
                "fcfs_revenue": fcfs,
                "uplift_pct": uplift,
                "simulation": {
                    "mean_revenue": summary.mean_revenue,
                    "mean_load_factor": summary.mean_load_factor,
                    "denied_rate": summary.denied_rate,
                    "spill_rate": summary.spill_rate,
                    "mean_revenue_se": summary.mean_revenue_se,
                },
            }
        )
    return round_tree({"trials": trials, "seed": seed, "legs": legs})


def run_pipeline(
    scenario: Scenario,
    stages: Iterable[str],
    trials: int = DEFAULT_TRIALS,
    seed: int | None = None,
) -> Report:
    """Run the requested stages and assemble the report."""
    requested = _normalize_stages(stages)
    rm_seed = scenario.seed if seed is None else seed
    meta = {
        "schema_version": scenario.schema_version,
        "seed": scenario.seed,
        "stages": list(requested),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    needs_rows = any(s in requested for s in ("evaluate", "optimize", "plan"))
    rows = []
    if needs_rows:
        with _stage_context("evaluate"):
            rows = evaluate_routes(scenario)
    evaluation = _evaluation_section(scenario, rows) if "evaluate" in requested else None
    optimization = None
    plan_weights = scenario.weights
    weights_label = "prior"
    if "optimize" in requested:
        with _stage_context("optimize"):
            result, coeffs = _optimize(scenario, rows)
        optimization = _optimization_section(scenario, result, coeffs)
        plan_weights = result.weights
        weights_label = "optimized"
    plan = None
    if "plan" in requested:
        with _stage_context("plan"):
            candidates = build_candidates(rows, plan_weights)
            network = select_routes(candidates, scenario.availability)
        plan = _plan_section(scenario, network, weights_label)
    rm = None
    if "rm" in requested:
        with _stage_context("rm"):
            rm = _rm_section(scenario, trials, rm_seed)
    return Report(meta=meta, evaluation=evaluation, optimization=optimization, plan=plan, rm=rm)
