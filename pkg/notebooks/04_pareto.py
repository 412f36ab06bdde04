# %% [markdown]
# # Accuracy against size
#
# Every individual of the final population is a point (fitness, node
# count). The non-dominated ones form the front exported to `pareto.csv`.

# %%
import numpy as np

from mggp import dataio, engine
from mggp.config import GpConfig
from mggp.pareto import pareto_front, points_from_population, tag_representatives

data = dataio.bundled_synthetic()
train, _ = dataio.split(np.random.default_rng(0), data)
trace = engine.run(GpConfig(generations=60, rng_seed=1), train)

front = pareto_front(points_from_population(trace.population))
tags = tag_representatives(front)
for p in front:
    print(f"{p.complexity:4d}  {p.fitness:.5f}  {tags.get(p.id, '')}")

# %%
# C is the smallest model, A the most accurate, B the knee between them.
