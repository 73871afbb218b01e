"""Generator specifications."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from ..core.errors import InvalidParams, UsageError


class TaskKind(str, Enum):
    """Built-in generators."""

    CANDLESTICK = "candlestick"
    BARMAX = "barmax"
    TEXTARITH = "textarith"

    @classmethod
    def parse(cls, name: str) -> "TaskKind":
        key = name.strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise UsageError(f"Unknown task '{name}' (expected one of: {valid})")


DEFAULT_PARAMS: Dict[TaskKind, Dict[str, int]] = {
    TaskKind.CANDLESTICK: {"k": 10, "base": 100, "max_step": 4, "wick_max": 3},
    TaskKind.BARMAX: {"bars": 4, "max_height": 10},
    TaskKind.TEXTARITH: {"lo": 0, "hi": 99},
}

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Everything a generator needs to produce a dataset.

    Identical specs produce byte-identical datasets.

    Attributes:
        task_kind: Generator to run
        n: Number of items
        seed: Dataset seed in [0, 2**64)
        params: Task parameters; missing keys take the task defaults
    """

    task_kind: TaskKind
    n: int
    seed: int = 0
    params: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Fill defaults and validate parameters."""
        if self.n < 0:
            raise InvalidParams(f"n must be >= 0, got {self.n}")
        if not 0 <= self.seed <= MAX_SEED:
            raise InvalidParams(f"seed must be in [0, 2**64), got {self.seed}")

        defaults = DEFAULT_PARAMS[self.task_kind]
        unknown = sorted(set(self.params) - set(defaults))
        if unknown:
            raise InvalidParams(
                f"Unknown {self.task_kind.value} parameter(s): {', '.join(unknown)} "
                f"(expected: {', '.join(defaults)})"
            )
        merged = {**defaults, **{k: int(v) for k, v in self.params.items()}}
        object.__setattr__(self, "params", merged)
        self._check_params()

    def _check_params(self) -> None:
        p = self.params
        if self.task_kind == TaskKind.CANDLESTICK:
            if p["k"] < 3:
                raise InvalidParams(f"candlestick needs k >= 3 candles, got {p['k']}")
            if p["max_step"] < 1 or p["wick_max"] < 0:
                raise InvalidParams("candlestick needs max_step >= 1 and wick_max >= 0")
        elif self.task_kind == TaskKind.BARMAX:
            if not 3 <= p["bars"] <= 6:
                raise InvalidParams(f"barmax needs 3 <= bars <= 6, got {p['bars']}")
            if p["max_height"] < p["bars"] + 1:
                raise InvalidParams(
                    f"barmax max_height must be at least bars + 1 ({p['bars'] + 1}), "
                    f"got {p['max_height']}"
                )
        elif self.task_kind == TaskKind.TEXTARITH:
            if p["lo"] < 0 or p["hi"] < p["lo"]:
                raise InvalidParams(f"textarith needs 0 <= lo <= hi, got lo={p['lo']} hi={p['hi']}")

    def item_id(self, index: int) -> str:
        return f"{self.task_kind.value}-{self.seed}-{index:06d}"

    def to_dict(self) -> Dict[str, Any]:
        """Convert spec to dictionary."""
        return {
            "task_kind": self.task_kind.value,
            "n": self.n,
            "seed": self.seed,
            "params": dict(self.params),
        }

    @classmethod
    def from_cli(
        cls, task: str, n: int, seed: int = 0, params: Optional[List[str]] = None
    ) -> "GeneratorSpec":
        """
        Build a spec from command-line values.

        Args:
            task: Generator name
            n: Item count
            seed: Dataset seed
            params: "key=value" strings with integer values

        Raises:
            UsageError: Unknown task name
            InvalidParams: Malformed or out-of-range parameter
        """
        kind = TaskKind.parse(task)
        parsed: Dict[str, int] = {}
        for raw in params or []:
            key, sep, value = raw.partition("=")
            if not sep or not key.strip():
                raise InvalidParams(f"Parameter '{raw}' is not of the form key=value")
            try:
                parsed[key.strip()] = int(value.strip())
            except ValueError as e:
                raise InvalidParams(f"Parameter '{key.strip()}' must be an integer") from e
        return cls(task_kind=kind, n=n, seed=seed, params=parsed)
