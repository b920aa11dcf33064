"""Genetic-algorithm fit of the four model constants to oracle triples.

Oracle results are computed once per scenario and cached; the GA only
re-evaluates the cheap analytical side. Selection, crossover and
mutation draw from a single seeded RNG stream in a fixed order, so a fit
is bit-reproducible for a given seed regardless of how many workers
evaluate fitness.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateOracle, InsufficientScenarios
from .metrics import model_error
from .pulse_model import DEFAULT_BOUNDS, FittingParams, propagated_pulse


@dataclass(frozen=True)
class GAConfig:
    population: int = 48
    generations: int = 120
    crossover_rate: float = 0.9
    mutation_sigma: float = 0.05   # initial sigma, fraction of each range
    mutation_decay: float = 0.97   # per-generation sigma multiplier
    tournament_size: int = 3
    seed: int = 42
    bounds: tuple = DEFAULT_BOUNDS
    elitism: int = 2

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4")
        if not (0 < self.tournament_size < self.population):
            raise ValueError("tournament_size must be in (0, population)")
        if not (0 < self.mutation_decay <= 1):
            raise ValueError("mutation_decay must be in (0, 1]")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"bad bounds ({lo}, {hi})")


@dataclass
class FitResult:
    best: FittingParams
    best_error: float
    history: np.ndarray           # per-generation best error
    scenario_table: list          # (name, sim triple, ana triple, residuals)
    error_mode: str
    config: GAConfig = field(repr=False, default=None)


def _to_fitting(vec, bounds) -> FittingParams:
    return FittingParams(k_g=float(vec[0]), k_a=float(vec[1]),
                         k_w=float(vec[2]), k_t=float(vec[3]),
                         bounds=bounds)


def evaluate(k: FittingParams, scenarios, oracle_results,
             error_mode: str = "normalized") -> float:
    """Mean error of the analytical model against cached oracle triples."""
    pairs = [(sim, propagated_pulse(sc.params, k))
             for sc, sim in zip(scenarios, oracle_results)]
    return model_error(pairs, mode=error_mode)


def _check_inputs(scenarios, oracle_results, error_mode):
    if len(scenarios) != len(oracle_results) or len(scenarios) < 4:
        raise InsufficientScenarios(
            f"need matched scenario/oracle sequences of length >= 4, got "
            f"{len(scenarios)} and {len(oracle_results)}")
    if error_mode == "normalized":
        for sc, sim in zip(scenarios, oracle_results):
            if min(sim.triple()) <= 0.0:
                raise DegenerateOracle(
                    f"scenario {sc.name!r} has a non-positive oracle "
                    f"component {sim.triple()}")


def fit(scenarios, oracle_results, ga: GAConfig | None = None,
        error_mode: str = "normalized", n_workers: int = 1) -> FitResult:
    """Tournament GA with uniform crossover, Gaussian mutation, elitism."""
    ga = ga or GAConfig()
    scenarios = list(scenarios)
    oracle_results = list(oracle_results)
    _check_inputs(scenarios, oracle_results, error_mode)

    lo = np.array([b[0] for b in ga.bounds])
    hi = np.array([b[1] for b in ga.bounds])
    span = hi - lo
    rng = np.random.default_rng(ga.seed)
    pop = lo + rng.random((ga.population, 4)) * span

    def fitness_of(vec):
        return evaluate(_to_fitting(vec, ga.bounds), scenarios,
                        oracle_results, error_mode)

    def eval_population(population):
        rows = list(population)
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as ex:
                return np.array(list(ex.map(fitness_of, rows)))
        return np.array([fitness_of(r) for r in rows])

    fit_vals = eval_population(pop)
    history = np.empty(ga.generations)

    for gen in range(ga.generations):
        # annealed mutation: the initial kick spans a few percent of the
        # box, then shrinks so late generations polish the optimum
        sigma = ga.mutation_sigma * ga.mutation_decay**gen * span
        order = np.argsort(fit_vals, kind="stable")
        elite = pop[order[:ga.elitism]].copy()
        elite_fit = fit_vals[order[:ga.elitism]].copy()

        n_children = ga.population - ga.elitism
        children = np.empty((n_children, 4))
        for c in range(n_children):
            idx_a = rng.integers(0, ga.population, ga.tournament_size)
            idx_b = rng.integers(0, ga.population, ga.tournament_size)
            pa = pop[idx_a[np.argmin(fit_vals[idx_a])]]
            pb = pop[idx_b[np.argmin(fit_vals[idx_b])]]
            if rng.random() < ga.crossover_rate:
                take = rng.random(4) < 0.5
                child = np.where(take, pa, pb)
            else:
                child = pa.copy()
            child = child + rng.normal(0.0, 1.0, 4) * sigma
            children[c] = np.clip(child, lo, hi)

        child_fit = eval_population(children)
        pop = np.concatenate([elite, children])
        fit_vals = np.concatenate([elite_fit, child_fit])
        history[gen] = float(np.min(fit_vals))

    best_idx = int(np.argmin(fit_vals))
    best = _to_fitting(pop[best_idx], ga.bounds)
    table = []
    for sc, sim in zip(scenarios, oracle_results):
        ana = propagated_pulse(sc.params, best)
        resid = tuple(a - s for s, a in zip(sim.triple(), ana.triple()))
        table.append((sc.name, sim.triple(), ana.triple(), resid))
    return FitResult(best=best, best_error=float(fit_vals[best_idx]),
                     history=history, scenario_table=table,
                     error_mode=error_mode, config=ga)
