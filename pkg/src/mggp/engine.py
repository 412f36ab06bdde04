"""Multi-gene genetic programming loop.

An individual is a list of genes (expression trees) combined linearly::

    yhat = w0 + w1 * gene1(x) + ... + wT * geneT(x)

with the weights refit by least squares every time the gene list changes.
Genes are evaluated on z-scored inputs and the weighted sum is mapped
back to target units before scoring, so fitness is the training RMSE in
the units of the target. Setting ``max_trees = 1`` gives single-gene GP.

Selection is a plain lexicographic tournament: lower fitness wins and
ties go to the smaller individual (total node count).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import exprtree
from .config import GpConfig
from .dataio import fit_scaling
from .errors import IllConditioned
from .exprtree import GeneSpec
from .fitting import FitMetrics, WeightVector, design_matrix, least_squares, r_squared, rmse

log = logging.getLogger(__name__)

#: Fitness given to individuals whose evaluation is non-finite.
WORST_FITNESS = math.inf

CROSSOVER, MUTATION, REPRODUCTION = "crossover", "mutation", "reproduction"


@dataclass(frozen=True)
class Individual:
    genes: tuple
    weights: WeightVector | None = None
    fitness: float | None = None
    complexity: int = field(init=False)

    def __post_init__(self):
        genes = tuple(self.genes)
        if not genes:
            raise ValueError("an individual needs at least one gene")
        object.__setattr__(self, "genes", genes)
        object.__setattr__(self, "complexity", sum(g.node_count() for g in genes))

    @property
    def evaluated(self):
        return self.fitness is not None

    @property
    def is_finite(self):
        return self.fitness is not None and math.isfinite(self.fitness)

    def sort_key(self):
        return (self.fitness, self.complexity)

    def with_genes(self, genes):
        """Structurally changed copy; weights and fitness are dropped."""
        return Individual(tuple(genes))


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_complexity: int


@dataclass
class RunTrace:
    config: GpConfig
    records: list
    population: list
    best: Individual
    scaling: object
    train_metrics: FitMetrics
    test_metrics: FitMetrics | None = None

    @property
    def best_fitness_history(self):
        return [r.best_fitness for r in self.records]

    @property
    def generations_run(self):
        return self.records[-1].generation if self.records else 0


# ---------------------------------------------------------------------------
# evaluation


def predict(genes, weights, scaling, X):
    """Model output in target units for raw (unscaled) inputs ``X``."""
    Xs = scaling.scale_x(X)
    cols = [exprtree.eval_tree(g, Xs).values for g in genes]
    design = design_matrix(cols, n=Xs.shape[0])
    with np.errstate(all="ignore"):
        return scaling.unscale_y(design @ weights.as_array())


class Evaluator:
    """Scores individuals against one training set.

    Gene outputs are memoized by tree structure; evaluation has no random
    choices, so running it on several threads cannot change results.
    """

    _CACHE_LIMIT = 200_000

    def __init__(self, train, scaling=None, threads=1):
        self.scaling = scaling if scaling is not None else fit_scaling(train)
        self.X = self.scaling.scale_x(train.X)
        self.y = np.asarray(train.y, dtype=float)
        self.y_scaled = self.scaling.scale_y(self.y)
        self.threads = max(1, int(threads))
        self._cache = {}

    def gene_output(self, tree):
        out = self._cache.get(tree)
        if out is None:
            out = exprtree.eval_tree(tree, self.X)
            if len(self._cache) >= self._CACHE_LIMIT:
                self._cache.clear()
            self._cache[tree] = out
        return out

    def evaluate(self, individual):
        outcomes = [self.gene_output(g) for g in individual.genes]
        if not all(o.finite for o in outcomes):
            return Individual(individual.genes, None, WORST_FITNESS)
        design = design_matrix([o.values for o in outcomes])
        try:
            weights = least_squares(design, self.y_scaled)
        except IllConditioned:
            return Individual(individual.genes, None, WORST_FITNESS)
        with np.errstate(all="ignore"):
            yhat = self.scaling.unscale_y(design @ weights.as_array())
        if not np.isfinite(yhat).all():
            return Individual(individual.genes, weights, WORST_FITNESS)
        return Individual(individual.genes, weights, rmse(self.y, yhat))

    def evaluate_all(self, individuals):
        """Evaluate a list, returning results in input order."""
        if self.threads == 1 or len(individuals) < 2:
            return [self.evaluate(ind) for ind in individuals]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self.evaluate, individuals))


def evaluate(individual, train, scaling):
    """Fit weights and score one individual on ``train``."""
    return Evaluator(train, scaling).evaluate(individual)


# ---------------------------------------------------------------------------
# initialization and variation


def gene_spec(config, var_count):
    return GeneSpec(var_count=var_count, const_range=config.const_range, p_var=config.p_var)


def random_individual(rng, config, spec):
    n_genes = int(rng.integers(1, config.max_trees + 1))
    return Individual(tuple(exprtree.ramped_tree(rng, config.max_depth, spec) for _ in range(n_genes)))


def initialize_population(rng, config, var_count):
    spec = gene_spec(config, var_count)
    return [random_individual(rng, config, spec) for _ in range(config.population_size)]


def tournament_select(rng, population, size=3):
    """Plain lexicographic tournament.

    ``size`` distinct candidates are drawn; the lowest fitness wins, ties go
    to the lowest complexity and any remaining tie is broken uniformly.
    """
    size = min(size, len(population))
    picks = rng.choice(len(population), size=size, replace=False)
    keys = [population[i].sort_key() for i in picks]
    best = min(keys)
    tied = [i for i, k in zip(picks, keys) if k == best]
    if len(tied) == 1:
        return population[tied[0]]
    return population[tied[int(rng.integers(len(tied)))]]


def _segment(rng, k):
    i, j = sorted(int(v) for v in rng.integers(k, size=2))
    return i, j


def exchange_gene_segments(genes_a, genes_b, seg_a, seg_b):
    """Swap inclusive zero-based gene ranges ``seg_a`` and ``seg_b``."""
    (a0, a1), (b0, b1) = seg_a, seg_b
    child_a = genes_a[:a0] + genes_b[b0 : b1 + 1] + genes_a[a1 + 1 :]
    child_b = genes_b[:b0] + genes_a[a0 : a1 + 1] + genes_b[b1 + 1 :]
    return child_a, child_b


def _trim(rng, genes, max_trees):
    genes = list(genes)
    while len(genes) > max_trees:
        del genes[int(rng.integers(len(genes)))]
    return tuple(genes)


def high_level_crossover(rng, parent_a, parent_b, max_trees, spec=None, max_depth=5):
    """Two-point gene crossover.

    Each parent gets its own random contiguous gene segment; the segments
    are exchanged whole. Children longer than ``max_trees`` lose randomly
    chosen genes until they fit.
    """
    ga, gb = parent_a.genes, parent_b.genes
    seg_a, seg_b = _segment(rng, len(ga)), _segment(rng, len(gb))
    child_a, child_b = exchange_gene_segments(ga, gb, seg_a, seg_b)
    children = []
    for genes in (child_a, child_b):
        genes = _trim(rng, genes, max_trees)
        if not genes:
            genes = (exprtree.ramped_tree(rng, max_depth, spec),)
        children.append(Individual(genes))
    return children[0], children[1]


def low_level_crossover(rng, parent_a, parent_b, max_depth):
    """Subtree crossover between one random gene of each parent."""
    ia = int(rng.integers(len(parent_a.genes)))
    ib = int(rng.integers(len(parent_b.genes)))
    ta, tb = exprtree.subtree_crossover(rng, parent_a.genes[ia], parent_b.genes[ib], max_depth)
    genes_a = list(parent_a.genes)
    genes_b = list(parent_b.genes)
    genes_a[ia], genes_b[ib] = ta, tb
    return parent_a.with_genes(genes_a), parent_b.with_genes(genes_b)


def mutate(rng, parent, max_depth, spec):
    i = int(rng.integers(len(parent.genes)))
    genes = list(parent.genes)
    genes[i] = exprtree.subtree_mutation(rng, genes[i], max_depth, spec)
    return parent.with_genes(genes)


def choose_event(rng, config):
    r = rng.random()
    if r < config.p_crossover:
        return CROSSOVER
    if r < config.p_crossover + config.p_mutation:
        return MUTATION
    return REPRODUCTION


def ranked(population):
    """Indices sorted by (fitness, complexity, position)."""
    return sorted(range(len(population)), key=lambda i: (*population[i].sort_key(), i))


def step_generation(rng, population, evaluator, config, spec):
    """Produce and evaluate the next population.

    The ``elitism_count`` best individuals pass through unchanged; every
    other slot is filled by crossover, mutation or reproduction of
    tournament winners. All random choices are made before the (possibly
    threaded) evaluation phase.
    """
    size = len(population)
    order = ranked(population)
    nxt = [population[i] for i in order[: config.elitism_count]]
    while len(nxt) < size:
        event = choose_event(rng, config)
        if event == CROSSOVER:
            pa = tournament_select(rng, population, config.tournament_size)
            pb = tournament_select(rng, population, config.tournament_size)
            if config.max_trees > 1 and rng.random() < config.p_high_level_crossover:
                ca, cb = high_level_crossover(rng, pa, pb, config.max_trees, spec, config.max_depth)
            else:
                ca, cb = low_level_crossover(rng, pa, pb, config.max_depth)
            nxt.append(ca)
            if len(nxt) < size:
                nxt.append(cb)
        elif event == MUTATION:
            parent = tournament_select(rng, population, config.tournament_size)
            nxt.append(mutate(rng, parent, config.max_depth, spec))
        else:
            nxt.append(tournament_select(rng, population, config.tournament_size))

    pending = [i for i, ind in enumerate(nxt) if not ind.evaluated]
    done = evaluator.evaluate_all([nxt[i] for i in pending])
    for i, ind in zip(pending, done):
        nxt[i] = ind
    return nxt


# ---------------------------------------------------------------------------
# runs


def best_of(population):
    return population[ranked(population)[0]]


def _record(generation, population):
    best = best_of(population)
    finite = [ind.fitness for ind in population if ind.is_finite]
    mean = float(np.mean(finite)) if finite else WORST_FITNESS
    return GenerationRecord(generation, best.fitness, mean, best.complexity)


def _metrics(individual, dataset, scaling):
    if individual.weights is None or not dataset.has_target:
        return None
    yhat = predict(individual.genes, individual.weights, scaling, dataset.X)
    if not np.isfinite(yhat).all():
        return FitMetrics(rmse=WORST_FITNESS, r2=-WORST_FITNESS)
    return FitMetrics(rmse=rmse(dataset.y, yhat), r2=r_squared(dataset.y, yhat))


def run(config, train, test=None, threads=1, population=None, progress=None):
    """Evolve a population on ``train``.

    Stops after ``config.generations`` generations or as soon as the best
    fitness drops below ``config.fitness_target``. ``population`` may seed
    the initial generation (unevaluated members are evaluated first).
    ``progress``, if given, is called with each :class:`GenerationRecord`.
    """
    rng = np.random.default_rng(config.rng_seed)
    scaling = fit_scaling(train)
    evaluator = Evaluator(train, scaling, threads)
    var_count = train.X.shape[1]
    spec = gene_spec(config, var_count)

    if population is None:
        population = initialize_population(rng, config, var_count)
    population = list(population)
    pending = [i for i, ind in enumerate(population) if not ind.evaluated]
    for i, ind in zip(pending, evaluator.evaluate_all([population[i] for i in pending])):
        population[i] = ind

    records = [_record(0, population)]
    if progress:
        progress(records[-1])
    generation = 0
    while generation < config.generations and not records[-1].best_fitness < config.fitness_target:
        generation += 1
        population = step_generation(rng, population, evaluator, config, spec)
        records.append(_record(generation, population))
        if progress:
            progress(records[-1])

    best = best_of(population)
    train_metrics = _metrics(best, train, scaling)
    test_metrics = _metrics(best, test, scaling) if test is not None else None
    log.info("run finished after %d generations, best fitness %.6g", generation, best.fitness)
    return RunTrace(config, records, population, best, scaling, train_metrics, test_metrics)


@dataclass
class MultiRunStats:
    mean: float
    std: float
    max: float
    min: float
    seeds: list
    best_fitness: list
    traces: list = field(default_factory=list, repr=False)


def derive_seeds(master_seed, n_runs):
    return [int(s) for s in np.random.SeedSequence(master_seed).generate_state(n_runs)]


def multi_run_stats(config, train, test=None, n_runs=30, master_seed=0, seeds=None, threads=1):
    """Independent runs and the mean / sample std / max / min of their best fitness."""
    if seeds is None:
        seeds = derive_seeds(master_seed, n_runs)
    seeds = list(seeds)
    if len(seeds) < 2:
        raise ValueError("multi_run_stats needs at least two runs")
    traces = [run(dataclasses.replace(config, rng_seed=s), train, test, threads) for s in seeds]
    values = np.array([t.best.fitness for t in traces], dtype=float)
    return MultiRunStats(
        mean=float(values.mean()),
        std=float(values.std(ddof=1)),
        max=float(values.max()),
        min=float(values.min()),
        seeds=seeds,
        best_fitness=values.tolist(),
        traces=traces,
    )
