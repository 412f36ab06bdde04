import dataclasses
import math

import numpy as np
import pytest

from mggp import engine
from mggp.config import GpConfig
from mggp.dataio import Dataset, fit_scaling
from mggp.engine import Evaluator, Individual
from mggp.exprtree import GeneSpec, deserialize, eval_tree
from mggp.fitting import rmse

SMALL = GpConfig(population_size=30, generations=5, rng_seed=0)


def angstrom_dataset(n=120, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.2, 1.0, size=(n, 6))
    X[:, 0] = rng.uniform(8, 34, n)
    y = 0.23 + 0.48 * X[:, 4]
    return Dataset(X, y)


def ind(*texts, fitness=None, weights=None):
    return Individual(tuple(deserialize(t) for t in texts), weights, fitness)


# -- population --------------------------------------------------------------


def test_population_size_and_bounds():
    pop = engine.initialize_population(np.random.default_rng(0), GpConfig(), 6)
    assert len(pop) == 100
    assert all(1 <= len(p.genes) <= 15 for p in pop)
    assert all(g.depth() <= 5 for p in pop for g in p.genes)


def test_single_gene_population():
    pop = engine.initialize_population(np.random.default_rng(1), GpConfig().sggp(), 6)
    assert all(len(p.genes) == 1 for p in pop)


def test_complexity_is_total_node_count():
    assert ind("(add x1 x2)", "x3").complexity == 4


# -- evaluation --------------------------------------------------------------


def test_angstrom_gene_is_exact():
    d = angstrom_dataset()
    scored = engine.evaluate(ind("x5"), d, fit_scaling(d))
    assert scored.fitness <= 1e-10


def test_division_by_zero_column_gets_sentinel():
    X = np.random.default_rng(2).normal(size=(40, 6))
    X[0, 1] = 0.0
    d = Dataset(X, X[:, 0])
    # scaled x2 is not exactly zero, so divide by a self-difference instead
    scored = engine.evaluate(ind("x1", "(div x1 (sub x2 x2))"), d, fit_scaling(d))
    assert scored.fitness == engine.WORST_FITNESS


def test_fitness_matches_independent_recomputation():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(80, 6))
    d = Dataset(X, np.sin(X[:, 0]) + X[:, 1] ** 2)
    s = fit_scaling(d)
    pop = engine.initialize_population(rng, GpConfig(), 6)
    ev = Evaluator(d, s)
    checked = 0
    for p in pop:
        scored = ev.evaluate(p)
        if not scored.is_finite:
            continue
        Xs = (X - X.mean(axis=0)) / X.std(axis=0, ddof=1)
        cols = [np.ones(80)] + [eval_tree(g, Xs).values for g in p.genes]
        A = np.column_stack(cols)
        coef = np.linalg.pinv(A) @ ((d.y - d.y.mean()) / d.y.std(ddof=1))
        yhat = A @ coef * d.y.std(ddof=1) + d.y.mean()
        assert scored.fitness == pytest.approx(rmse(d.y, yhat), abs=1e-12, rel=1e-9)
        checked += 1
    assert checked > 50


def test_threaded_evaluation_is_identical():
    rng = np.random.default_rng(4)
    d = angstrom_dataset()
    pop = engine.initialize_population(rng, GpConfig(), 6)
    one = Evaluator(d, threads=1).evaluate_all(pop)
    many = Evaluator(d, threads=4).evaluate_all(pop)
    assert [p.fitness for p in one] == [p.fitness for p in many]


# -- selection ---------------------------------------------------------------


def test_tournament_prefers_fitness_then_size():
    pop = [
        ind("(add (add x1 x2) (add x3 (add x4 x5)))", fitness=0.5),  # 9 nodes
        ind("(add (add x1 x2) (add x3 x4))", fitness=0.5),  # 7 nodes
        ind("(add x1 x2)", fitness=0.9),  # 3 nodes
    ]
    for seed in range(20):
        assert engine.tournament_select(np.random.default_rng(seed), pop, 3) is pop[1]


def test_tournament_identical_candidates_uniform():
    pop = [ind("x1", fitness=0.2) for _ in range(3)]
    counts = np.zeros(3)
    rng = np.random.default_rng(5)
    for _ in range(6000):
        winner = engine.tournament_select(rng, pop, 3)
        counts[[p is winner for p in pop].index(True)] += 1
    # binomial(6000, 1/3): sd ~ 36.5
    assert np.all(np.abs(counts - 2000) < 4 * 36.5)


def test_dominant_individual_wins_every_tournament_it_enters():
    pop = [ind("x1", "x2", fitness=0.1 + 0.01 * i) for i in range(20)]
    pop[7] = ind("x1", fitness=0.01)

    class Recording:
        def __init__(self, seed):
            self.rng = np.random.default_rng(seed)
            self.picks = None

        def choice(self, n, size, replace):
            self.picks = self.rng.choice(n, size=size, replace=replace)
            return self.picks

        def integers(self, *a, **k):
            return self.rng.integers(*a, **k)

    for seed in range(10000):
        r = Recording(seed)
        winner = engine.tournament_select(r, pop, 3)
        if 7 in r.picks:
            assert winner is pop[7]


# -- variation ---------------------------------------------------------------


def test_gene_segment_exchange_example():
    g1, g2, g3, h1, h2 = (deserialize(f"x{i}") for i in range(1, 6))
    a, b = engine.exchange_gene_segments((g1, g2, g3), (h1, h2), (1, 2), (0, 0))
    assert a == (g1, h1) and b == (g2, g3, h2)


def test_whole_list_segments_swap_parents():
    ga = tuple(deserialize(f"x{i}") for i in (1, 2, 3))
    gb = tuple(deserialize(f"x{i}") for i in (4, 5))
    a, b = engine.exchange_gene_segments(ga, gb, (0, 2), (0, 1))
    assert a == gb and b == ga


def test_high_level_crossover_gene_count_bounds():
    rng = np.random.default_rng(7)
    config = GpConfig()
    spec = engine.gene_spec(config, 6)
    pop = engine.initialize_population(rng, config, 6)
    for _ in range(1000):
        i, j = rng.integers(len(pop), size=2)
        ca, cb = engine.high_level_crossover(rng, pop[i], pop[j], 15, spec)
        assert 1 <= len(ca.genes) <= 15 and 1 <= len(cb.genes) <= 15


def test_event_frequencies():
    rng = np.random.default_rng(8)
    n = 100_000
    events = [engine.choose_event(rng, GpConfig()) for _ in range(n)]
    for name, p in ((engine.CROSSOVER, 0.85), (engine.MUTATION, 0.10), (engine.REPRODUCTION, 0.05)):
        sd = math.sqrt(n * p * (1 - p))
        assert abs(events.count(name) - n * p) <= 3 * sd


# -- generations and runs ----------------------------------------------------


def test_step_keeps_size_and_elite():
    rng = np.random.default_rng(9)
    d = angstrom_dataset()
    ev = Evaluator(d)
    config = SMALL
    spec = engine.gene_spec(config, 6)
    pop = ev.evaluate_all(engine.initialize_population(rng, config, 6))
    for _ in range(10):
        nxt = engine.step_generation(rng, pop, ev, config, spec)
        assert len(nxt) == len(pop)
        assert engine.best_of(nxt).fitness <= engine.best_of(pop).fitness
        pop = nxt


def test_unattainable_target_runs_every_generation():
    d = angstrom_dataset()
    trace = engine.run(dataclasses.replace(SMALL, fitness_target=0.0, generations=7), d)
    assert trace.generations_run == 7
    assert len(trace.records) == 8


def test_exact_target_terminates_early():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(60, 6))
    d = Dataset(X, X[:, 0])
    trace = engine.run(GpConfig(population_size=50, generations=50, rng_seed=1), d)
    assert trace.best.fitness < 1e-5
    assert trace.generations_run < 50


def test_best_fitness_is_non_increasing():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(80, 6))
    d = Dataset(X, np.cos(X[:, 2]) * X[:, 3] + 0.1 * rng.normal(size=80))
    trace = engine.run(GpConfig(population_size=40, generations=30, rng_seed=3), d)
    h = trace.best_fitness_history
    assert all(b <= a for a, b in zip(h, h[1:]))


def test_same_seed_same_run_across_threads():
    d = angstrom_dataset()
    d = Dataset(d.X, d.y + 0.01 * np.sin(d.X[:, 0]))
    a = engine.run(dataclasses.replace(SMALL, rng_seed=4), d, threads=1)
    b = engine.run(dataclasses.replace(SMALL, rng_seed=4), d, threads=3)
    assert a.best_fitness_history == b.best_fitness_history
    assert a.best.genes == b.best.genes


def test_sentinel_never_elite():
    d = angstrom_dataset()
    s = fit_scaling(d)
    bad = engine.evaluate(ind("(div x1 (sub x2 x2))"), d, s)
    good = engine.evaluate(ind("x1"), d, s)
    assert engine.best_of([bad, good]) is good


def test_multi_run_stats_identical_seeds():
    d = angstrom_dataset()
    config = GpConfig(population_size=20, generations=3)
    stats = engine.multi_run_stats(config, d, seeds=[5, 5])
    assert stats.std == 0.0
    assert stats.max >= stats.mean >= stats.min


def test_multi_run_stats_two_runs_finite():
    d = angstrom_dataset()
    d = Dataset(d.X, d.y + np.cos(d.X[:, 1]))
    stats = engine.multi_run_stats(GpConfig(population_size=20, generations=3), d, n_runs=2, master_seed=1)
    assert math.isfinite(stats.std)
    assert len(stats.seeds) == 2
    with pytest.raises(ValueError):
        engine.multi_run_stats(GpConfig(population_size=20, generations=1), d, seeds=[1])


def test_gene_spec_uses_config():
    spec = engine.gene_spec(GpConfig(const_range=(-1, 1), p_var=0.5), 4)
    assert spec == GeneSpec(var_count=4, const_range=(-1.0, 1.0), p_var=0.5)
