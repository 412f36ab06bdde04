"""Expression trees (genes) for symbolic regression.

A tree is stored as an immutable prefix-order tuple of tokens. Each token
is an :class:`Op`, a :class:`Var` (input column) or a ``float`` constant.
Prefix order makes subtree selection an index range, keeps serialization
trivial and gives structural equality and hashing for free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParseError

__all__ = [
    "Op",
    "Var",
    "ExprTree",
    "EvalOutcome",
    "GeneSpec",
    "FUNCTION_SET",
    "random_tree",
    "ramped_tree",
    "eval_tree",
    "subtree_crossover",
    "subtree_mutation",
    "serialize",
    "deserialize",
    "to_infix",
]


class Op(Enum):
    ADD = ("add", 2)
    SUB = ("sub", 2)
    MUL = ("mul", 2)
    DIV = ("div", 2)
    SIN = ("sin", 1)
    COS = ("cos", 1)
    SQRT_ABS = ("sqrtabs", 1)
    SQUARE = ("square", 1)
    EXP = ("exp", 1)
    LOG_ABS = ("logabs", 1)

    def __init__(self, prefix_name, arity):
        self.prefix_name = prefix_name
        self.arity = arity

    def apply(self, *args):
        return _KERNELS[self](*args)


_KERNELS = {
    Op.ADD: np.add,
    Op.SUB: np.subtract,
    Op.MUL: np.multiply,
    Op.DIV: np.divide,
    Op.SIN: np.sin,
    Op.COS: np.cos,
    Op.SQRT_ABS: lambda x: np.sqrt(np.abs(x)),
    Op.SQUARE: np.square,
    Op.EXP: np.exp,
    Op.LOG_ABS: lambda x: np.log(np.abs(x)),
}

_BY_PREFIX_NAME = {op.prefix_name: op for op in Op}

#: The evolutionary function set: exactly the ten operators above.
FUNCTION_SET = tuple(Op)


@dataclass(frozen=True, slots=True)
class Var:
    """Input column reference (zero-based)."""

    index: int


@dataclass(frozen=True)
class ExprTree:
    program: tuple

    def __post_init__(self):
        if not self.program:
            raise ValueError("empty program")

    def node_count(self) -> int:
        return len(self.program)

    def depth(self) -> int:
        return max(_node_depths(self.program))

    def evaluate(self, X) -> EvalOutcome:
        return eval_tree(self, X)

    def __str__(self):
        return serialize(self)


@dataclass(frozen=True)
class EvalOutcome:
    values: np.ndarray
    finite: bool


@dataclass(frozen=True)
class GeneSpec:
    """Terminal set and leaf sampling rules used when growing random trees.

    Parameters
    ----------
    var_count : int
        Number of input columns a tree may reference.
    const_range : tuple of float
        Ephemeral random constants are drawn uniformly from this interval.
    p_var : float
        Probability that a leaf is a variable rather than a constant.
    functions : tuple of Op
        Operators available to internal nodes.
    """

    var_count: int
    const_range: tuple = (-10.0, 10.0)
    p_var: float = 0.8
    functions: tuple = FUNCTION_SET

    def __post_init__(self):
        lo, hi = self.const_range
        if self.var_count < 1:
            raise ValueError("var_count must be >= 1")
        if lo > hi:
            raise ValueError("const_range must satisfy lo <= hi")
        if not 0.0 <= self.p_var <= 1.0:
            raise ValueError("p_var must lie in [0, 1]")


# ---------------------------------------------------------------------------
# structure helpers


def _arity(token):
    return token.arity if isinstance(token, Op) else 0


def _subtree_end(program, start):
    """Index one past the end of the subtree rooted at ``start``."""
    need = 1
    i = start
    while need:
        need += _arity(program[i]) - 1
        i += 1
    return i


def _node_depths(program):
    depths = []
    # stack of (depth, remaining child slots) for open operators
    open_ops = []
    for token in program:
        depth = open_ops[-1][0] + 1 if open_ops else 1
        depths.append(depth)
        if open_ops:
            open_ops[-1][1] -= 1
        arity = _arity(token)
        if arity:
            open_ops.append([depth, arity])
        while open_ops and open_ops[-1][1] == 0:
            open_ops.pop()
    return depths


# ---------------------------------------------------------------------------
# construction


def _random_leaf(rng, spec):
    if rng.random() < spec.p_var:
        return Var(int(rng.integers(spec.var_count)))
    lo, hi = spec.const_range
    # + 0.0 folds -0.0 into 0.0 so equal trees hash equal
    return float(rng.uniform(lo, hi)) + 0.0


def random_tree(rng, max_depth, method, spec):
    """Grow a random tree.

    Parameters
    ----------
    rng : numpy.random.Generator
    max_depth : int
        Depth bound; the root sits at depth 1.
    method : {"grow", "full"}
        ``"full"`` places operators on every level above ``max_depth`` so
        every leaf sits at exactly ``max_depth``. ``"grow"`` chooses
        between operators and leaves at each level.
    spec : GeneSpec
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if method not in ("grow", "full"):
        raise ValueError(f"unknown method {method!r}")
    functions = spec.functions
    p_op = len(functions) / (len(functions) + spec.var_count + 1)
    program = []

    def build(depth):
        if depth < max_depth and (method == "full" or rng.random() < p_op):
            op = functions[int(rng.integers(len(functions)))]
            program.append(op)
            for _ in range(op.arity):
                build(depth + 1)
        else:
            program.append(_random_leaf(rng, spec))

    build(1)
    return ExprTree(tuple(program))


def ramped_tree(rng, max_depth, spec, min_depth=2):
    """One draw of ramped half-and-half initialization.

    Depth is uniform over ``min_depth..max_depth`` and the method is grow or
    full with equal probability.
    """
    lo = min(min_depth, max_depth)
    depth = int(rng.integers(lo, max_depth + 1))
    method = "grow" if rng.random() < 0.5 else "full"
    return random_tree(rng, depth, method, spec)


# ---------------------------------------------------------------------------
# evaluation


def eval_tree(tree, X):
    """Evaluate ``tree`` on every row of ``X`` (shape ``(n, d)``).

    Division and ``exp`` are unprotected. Non-finite results are reported
    through ``EvalOutcome.finite`` instead of being raised or masked.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    stack = []
    with np.errstate(all="ignore"):
        for token in reversed(tree.program):
            if isinstance(token, Var):
                stack.append(X[:, token.index])
            elif isinstance(token, Op):
                args = [stack.pop() for _ in range(token.arity)]
                stack.append(token.apply(*args))
            else:
                stack.append(np.full(n, token))
    values = np.array(stack.pop(), dtype=float)
    return EvalOutcome(values=values, finite=bool(np.isfinite(values).all()))


# ---------------------------------------------------------------------------
# variation


def subtree_crossover(rng, a, b, max_depth, max_attempts=8):
    """Swap one uniformly chosen subtree between ``a`` and ``b``.

    A swap producing a child deeper than ``max_depth`` is redrawn; after
    ``max_attempts`` failures the parents come back unchanged.
    """
    pa, pb = a.program, b.program
    for _ in range(max_attempts):
        i = int(rng.integers(len(pa)))
        j = int(rng.integers(len(pb)))
        ie, je = _subtree_end(pa, i), _subtree_end(pb, j)
        child_a = ExprTree(pa[:i] + pb[j:je] + pa[ie:])
        child_b = ExprTree(pb[:j] + pa[i:ie] + pb[je:])
        if child_a.depth() <= max_depth and child_b.depth() <= max_depth:
            return child_a, child_b
    return a, b


def subtree_mutation(rng, tree, max_depth, spec):
    """Replace a uniformly chosen node with a fresh grow subtree.

    The new subtree's depth budget is whatever remains below the chosen
    node, so the result never exceeds ``max_depth``.
    """
    program = tree.program
    i = int(rng.integers(len(program)))
    node_depth = _node_depths(program)[i]
    budget = max(1, max_depth - node_depth + 1)
    fresh = random_tree(rng, budget, "grow", spec)
    end = _subtree_end(program, i)
    return ExprTree(program[:i] + fresh.program + program[end:])


# ---------------------------------------------------------------------------
# text forms


def _format_const(value):
    return "%.17g" % value


def serialize(tree):
    """Canonical prefix form, e.g. ``(add x1 (mul 2 x2))``."""
    out = []
    for token in tree.program:
        if isinstance(token, Op):
            out.append("(" + token.prefix_name)
        elif isinstance(token, Var):
            out.append(f"x{token.index + 1}")
        else:
            out.append(_format_const(token))
    # close parentheses: walk again tracking open operators
    text = []
    open_ops = []
    for token, piece in zip(tree.program, out):
        text.append(piece)
        if open_ops:
            open_ops[-1] -= 1
        if isinstance(token, Op):
            open_ops.append(token.arity)
            continue
        while open_ops and open_ops[-1] == 0:
            open_ops.pop()
            text[-1] += ")"
    return " ".join(text)


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_VAR_RE = re.compile(r"x([1-9][0-9]*)\Z")


def _parse_leaf(text, pos):
    m = _VAR_RE.match(text)
    if m:
        return Var(int(m.group(1)) - 1)
    try:
        value = float(text)
    except ValueError:
        raise ParseError("unknown symbol", pos, text) from None
    if not np.isfinite(value):
        raise ParseError("non-finite constant", pos, text)
    return value + 0.0


def deserialize(text):
    """Parse the canonical prefix form produced by :func:`serialize`."""
    tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
    if not tokens:
        raise ParseError("empty expression", 0)
    program = []
    k = 0

    def parse():
        nonlocal k
        if k >= len(tokens):
            raise ParseError("unexpected end of input", len(text))
        tok, pos = tokens[k]
        k += 1
        if tok == ")":
            raise ParseError("unexpected ')'", pos, tok)
        if tok != "(":
            program.append(_parse_leaf(tok, pos))
            return
        if k >= len(tokens):
            raise ParseError("unexpected end of input", len(text))
        name, name_pos = tokens[k]
        k += 1
        op = _BY_PREFIX_NAME.get(name)
        if op is None:
            raise ParseError("unknown operator", name_pos, name)
        program.append(op)
        for _ in range(op.arity):
            parse()
        if k >= len(tokens):
            raise ParseError("missing ')'", len(text))
        tok, pos = tokens[k]
        if tok != ")":
            raise ParseError(f"too many arguments for {name}", pos, tok)
        k += 1

    parse()
    if k != len(tokens):
        tok, pos = tokens[k]
        raise ParseError("trailing input", pos, tok)
    return ExprTree(tuple(program))


_INFIX_BINARY = {Op.ADD: "+", Op.SUB: "-", Op.MUL: "*", Op.DIV: "/"}


def to_infix(tree, var_names=None):
    """Fully parenthesized infix rendering for reports."""
    program = tree.program
    pos = 0

    def name(index):
        if var_names is None:
            return f"x{index + 1}"
        return var_names[index]

    def render():
        nonlocal pos
        token = program[pos]
        pos += 1
        if isinstance(token, Var):
            return name(token.index)
        if not isinstance(token, Op):
            return _format_const(token) if token >= 0 else f"({_format_const(token)})"
        args = [render() for _ in range(token.arity)]
        if token in _INFIX_BINARY:
            return f"({args[0]} {_INFIX_BINARY[token]} {args[1]})"
        if token is Op.SQRT_ABS:
            return f"sqrt(|{args[0]}|)"
        if token is Op.LOG_ABS:
            return f"log(|{args[0]}|)"
        if token is Op.SQUARE:
            return f"({args[0]})^2"
        return f"{token.prefix_name}({args[0]})"

    return render()
