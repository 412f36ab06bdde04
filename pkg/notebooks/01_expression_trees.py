# %% [markdown]
# # Expression trees
#
# A gene is an immutable prefix-order program over six inputs and ten
# operators. This walk-through builds a tree by hand, evaluates it and
# lets the random operators loose on it.

# %%
import numpy as np

from mggp.exprtree import GeneSpec, deserialize, eval_tree, ramped_tree, serialize, subtree_crossover, subtree_mutation, to_infix

gene = deserialize("(mul (add x1 (mul -3 x2)) (sub 7 (sin x2)))")
print(to_infix(gene))
print("nodes:", gene.node_count(), " depth:", gene.depth())

# %%
# Evaluation is vectorized over rows. Division and exp are left raw, so a
# zero denominator shows up as a non-finite value and a `finite=False` flag.
X = np.array([[1.0, 2.0], [0.5, -1.0]])
print(eval_tree(gene, X))
print(eval_tree(deserialize("(div x1 (sub x2 x2))"), X).finite)

# %%
rng = np.random.default_rng(0)
spec = GeneSpec(var_count=6)
a, b = ramped_tree(rng, 5, spec), ramped_tree(rng, 5, spec)
print("parent a:", serialize(a))
print("parent b:", serialize(b))
ca, cb = subtree_crossover(rng, a, b, max_depth=5)
print("child a: ", serialize(ca))
print("mutant:  ", serialize(subtree_mutation(rng, a, 5, spec)))

# %%
# Depth profile of ramped half-and-half initialization.
depths = np.bincount([ramped_tree(rng, 5, spec).depth() for _ in range(5000)], minlength=6)
for d in range(1, 6):
    print(d, depths[d])
