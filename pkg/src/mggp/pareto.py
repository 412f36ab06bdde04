"""Fitness/complexity trade-off analysis of a final population."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np


@dataclass(frozen=True)
class ParetoPoint:
    id: int
    fitness: float
    complexity: int


def dominates(p, q):
    """True if ``p`` is no worse than ``q`` on both axes and better on one."""
    return (
        p.fitness <= q.fitness
        and p.complexity <= q.complexity
        and (p.fitness < q.fitness or p.complexity < q.complexity)
    )


def _order(p):
    return (p.complexity, p.fitness, p.id)


def pareto_front(points):
    """Non-dominated subset, sorted by complexity then fitness.

    Points with equal (fitness, complexity) never dominate each other, so
    duplicates on the front are all kept. Runs in O(n log n): after
    sorting by complexity, a point survives iff it has the lowest fitness
    in its complexity group and that fitness beats every simpler point.
    """
    front = []
    best_simpler = math.inf
    for _, group in groupby(sorted(points, key=_order), key=lambda p: p.complexity):
        group = list(group)
        lowest = group[0].fitness
        if lowest < best_simpler:
            front.extend(p for p in group if p.fitness == lowest)
            best_simpler = lowest
    return front


def points_from_population(population):
    """Finite-fitness individuals as points; worst-sentinel ones are dropped."""
    return [
        ParetoPoint(i, float(ind.fitness), int(ind.complexity))
        for i, ind in enumerate(population)
        if ind.fitness is not None and math.isfinite(ind.fitness)
    ]


def tag_representatives(front):
    """Label front members ``A`` (lowest fitness), ``C`` (lowest complexity)
    and ``B`` (knee).

    The knee is the member farthest from the A-C chord once both axes are
    rescaled to [0, 1] over the front. Returns ``{point_id: tag}``.
    """
    if not front:
        return {}
    ordered = sorted(front, key=_order)
    c = ordered[0]
    a = min(ordered, key=lambda p: (p.fitness, p.complexity, p.id))
    tags = {c.id: "C"}
    tags[a.id] = "A"
    if (a.fitness, a.complexity) == (c.fitness, c.complexity):
        return {a.id: "A"}

    f = np.array([p.fitness for p in ordered])
    k = np.array([p.complexity for p in ordered], dtype=float)
    f_span = (f.max() - f.min()) or 1.0
    k_span = (k.max() - k.min()) or 1.0
    fn, kn = (f - f.min()) / f_span, (k - k.min()) / k_span
    ia, ic = ordered.index(a), ordered.index(c)
    dx, dy = kn[ia] - kn[ic], fn[ia] - fn[ic]
    norm = math.hypot(dx, dy)
    best, best_dist = None, 0.0
    for i, p in enumerate(ordered):
        if (p.fitness, p.complexity) in ((a.fitness, a.complexity), (c.fitness, c.complexity)):
            continue
        dist = abs(dx * (fn[i] - fn[ic]) - dy * (kn[i] - kn[ic])) / norm
        if best is None or dist > best_dist:
            best, best_dist = p, dist
    if best is not None:
        tags[best.id] = "B"
    return tags
