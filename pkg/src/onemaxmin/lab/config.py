"""Experiment configuration."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..benchmark import ProblemInstance
from ..moea import ALGORITHMS as ENGINE_ALGORITHMS, SELECTIONS, EngineConfig

PIPELINES = ("rls-pipeline", "ea-pipeline")
ALGORITHMS = PIPELINES + ENGINE_ALGORITHMS
DEFAULT_TRIALS = 100


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    N: Optional[int] = None
    mu: Optional[int] = None
    selection: str = "random"
    ref: tuple = (-1, -1)
    budget_multiplier: Optional[float] = None
    r: float = 3

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.name!r}; choose from {', '.join(ALGORITHMS)}")
        if self.selection not in SELECTIONS:
            raise ConfigError(f"unknown selection {self.selection!r}")
        if self.N is not None and self.N < 1:
            raise ConfigError("N must be >= 1")
        if self.mu is not None and self.mu < 1:
            raise ConfigError("mu must be >= 1")
        if self.budget_multiplier is not None and self.budget_multiplier <= 0:
            raise ConfigError("budget_multiplier must be positive")
        object.__setattr__(self, "ref", tuple(int(v) for v in self.ref))

    @classmethod
    def parse(cls, item) -> "AlgorithmSpec":
        if isinstance(item, str):
            return cls(item)
        if isinstance(item, dict):
            data = dict(item)
            name = data.pop("name", None) or data.pop("algorithm", None)
            if name is None:
                raise ConfigError(f"algorithm entry without a name: {item}")
            unknown = set(data) - {"N", "mu", "selection", "ref", "budget_multiplier", "r"}
            if unknown:
                raise ConfigError(f"unknown algorithm keys {sorted(unknown)}")
            return cls(name, **data)
        raise ConfigError(f"cannot read algorithm entry {item!r}")

    def engine(self) -> EngineConfig:
        return EngineConfig(self.name, self.N, self.mu, self.selection, self.ref)


@dataclass(frozen=True)
class ExperimentConfig:
    grid: tuple
    algorithms: tuple
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    budget_multiplier: float = 200
    workers: Optional[int] = None
    timing: bool = True
    strict: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if not self.grid:
            raise ConfigError("the instance grid is empty")
        if not self.algorithms:
            raise ConfigError("the algorithm roster is empty")
        grid = []
        for cell in self.grid:
            try:
                n, k = (int(v) for v in cell)
                grid.append(ProblemInstance(n, k))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad grid entry {cell!r}: {exc}") from None
        object.__setattr__(self, "grid", tuple(grid))
        algs = tuple(a if isinstance(a, AlgorithmSpec) else AlgorithmSpec.parse(a)
                     for a in self.algorithms)
        object.__setattr__(self, "algorithms", algs)
        if self.strict:
            problems = []
            for inst in self.grid:
                for alg in algs:
                    if alg.name in ENGINE_ALGORITHMS:
                        for why in alg.engine().survival_gaps(inst):
                            problems.append(f"{alg.name} on (n={inst.n}, k={inst.k}): {why}")
            if problems:
                raise ConfigError("survival precondition violated: " + "; ".join(problems))

    def cells(self) -> list[tuple[int, ProblemInstance, AlgorithmSpec]]:
        """Cells in canonical order: grid-major, then roster order."""
        out = []
        for inst in self.grid:
            for alg in self.algorithms:
                out.append((len(out), inst, alg))
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        grid = data.pop("grid", None) or data.pop("instances", None)
        algs = data.pop("algorithms", None) or data.pop("roster", None)
        known = {"trials", "master_seed", "budget_multiplier", "workers", "timing", "strict"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        if grid is None or algs is None:
            raise ConfigError("config needs 'grid' and 'algorithms'")
        return cls(grid=tuple(grid), algorithms=tuple(algs), **data)


def load_config(path) -> ExperimentConfig:
    """Read a JSON (or, with PyYAML installed, YAML) experiment description."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            import yaml
        except ImportError:
            raise ConfigError("YAML configs need PyYAML (pip install pyyaml)") from None
        data = yaml.safe_load(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a key-value document")
    return ExperimentConfig.from_dict(data)
