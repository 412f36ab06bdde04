"""Multi-gene genetic programming for symbolic regression, with classical
regression baselines and solar clearness-index utilities."""

__version__ = "0.1.0"

from .config import GpConfig, load_config, parse_config
from .dataio import Dataset, fit_scaling, load_csv, split, summary_stats, synth_generate
from .engine import Individual, RunTrace, multi_run_stats, run
from .exprtree import ExprTree, Op, Var, deserialize, eval_tree, serialize, to_infix
from .fitting import least_squares, r_squared, rmse
from .pareto import ParetoPoint, dominates, pareto_front

__all__ = [
    "GpConfig",
    "load_config",
    "parse_config",
    "Dataset",
    "fit_scaling",
    "load_csv",
    "split",
    "summary_stats",
    "synth_generate",
    "Individual",
    "RunTrace",
    "multi_run_stats",
    "run",
    "ExprTree",
    "Op",
    "Var",
    "deserialize",
    "eval_tree",
    "serialize",
    "to_infix",
    "least_squares",
    "r_squared",
    "rmse",
    "ParetoPoint",
    "dominates",
    "pareto_front",
]
