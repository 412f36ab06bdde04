"""GP run parameters and their ``key = value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class GpConfig:
    """Run parameters. Defaults are the MGGP settings.

    ``max_trees = 1`` turns the engine into single-gene GP (SGGP).
    """

    population_size: int = 100
    generations: int = 1000
    tournament_size: int = 3
    max_depth: int = 5
    max_trees: int = 15
    p_crossover: float = 0.85
    p_mutation: float = 0.10
    p_reproduction: float = 0.05
    fitness_target: float = 1e-5
    elitism_count: int = 1
    rng_seed: int = 0
    const_range: tuple = (-10.0, 10.0)
    p_var: float = 0.8
    p_high_level_crossover: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "const_range", tuple(float(v) for v in self.const_range))
        self.validate()

    def validate(self):
        total = self.p_crossover + self.p_mutation + self.p_reproduction
        if abs(total - 1.0) > 1e-12:
            raise ConfigError(f"operator probabilities sum to {total!r}, not 1")
        for name in ("p_crossover", "p_mutation", "p_reproduction", "p_var", "p_high_level_crossover"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.population_size < 2:
            raise ConfigError("population_size must be >= 2")
        if self.generations < 0:
            raise ConfigError("generations must be >= 0")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ConfigError("tournament_size must lie in 1..population_size")
        if self.max_depth < 1:
            raise ConfigError("max_depth must be >= 1")
        if self.max_trees < 1:
            raise ConfigError("max_trees must be >= 1")
        if not 0 <= self.elitism_count < self.population_size:
            raise ConfigError("elitism_count must lie in 0..population_size-1")
        if len(self.const_range) != 2 or self.const_range[0] > self.const_range[1]:
            raise ConfigError("const_range must be 'lo, hi' with lo <= hi")

    @property
    def single_gene(self):
        return self.max_trees == 1

    def sggp(self):
        return dataclasses.replace(self, max_trees=1)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["const_range"] = list(self.const_range)
        return d

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**d)


def _convert(name, text, default):
    try:
        if isinstance(default, tuple):
            parts = [p for p in text.replace(",", " ").split()]
            if len(parts) != 2:
                raise ValueError
            return tuple(float(p) for p in parts)
        if isinstance(default, bool):
            raise ValueError
        if isinstance(default, int):
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {text!r}") from None


def parse_config(text, base=None):
    """Parse ``key = value`` lines on top of ``base`` (defaults if omitted).

    ``#`` starts a comment. Unknown keys and repeated keys are errors.
    """
    base = base or GpConfig()
    defaults = {f.name: getattr(base, f.name) for f in dataclasses.fields(GpConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in defaults:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, value, defaults[key])
    return dataclasses.replace(base, **values)


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)


def format_config(config):
    lines = []
    for key, value in config.to_dict().items():
        if isinstance(value, list):
            value = ", ".join(repr(v) for v in value)
        lines.append(f"{key} = {value!r}" if not isinstance(value, str) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
