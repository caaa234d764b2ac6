"""
Concave arc cost oracles.

Each cost kind is a small frozen dataclass implementing ``CostSpec``. The
declarative kinds serialize to ``{"kind": ..., "params": {...}}`` and are
looked up through ``COST_KINDS`` when instance files are loaded. ``OpaqueCost``
wraps an arbitrary callable and must be safe to call from several threads.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, ClassVar, Mapping, Optional, Union

import numpy as np

Number = Union[int, float]


class CostSpec(ABC):
    """A concave cost function of the flow on a single arc."""

    kind: ClassVar[str]

    @abstractmethod
    def __call__(self, x: Number) -> Number: ...

    @abstractmethod
    def params(self) -> dict[str, Any]: ...

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": self.params()}


@dataclass(frozen=True)
class ZeroCost(CostSpec):
    kind: ClassVar[str] = "zero"

    def __call__(self, x: Number) -> Number:
        return 0

    def params(self) -> dict[str, Any]:
        return {}


@dataclass(frozen=True)
class LinearCost(CostSpec):
    kind: ClassVar[str] = "linear"
    slope: Number = 0

    def __call__(self, x: Number) -> Number:
        return self.slope * x

    def params(self) -> dict[str, Any]:
        return {"slope": self.slope}


@dataclass(frozen=True)
class FixedChargeCost(CostSpec):
    """``setup + slope * x`` for positive flow, 0 for zero flow."""

    kind: ClassVar[str] = "fixed_charge"
    setup: Number = 0
    slope: Number = 0

    def __post_init__(self):
        if self.setup < 0:
            raise ValueError(f"Fixed-charge setup must be nonnegative, got {self.setup}")

    def __call__(self, x: Number) -> Number:
        if x == 0:
            return 0
        return self.setup + self.slope * x

    def params(self) -> dict[str, Any]:
        return {"setup": self.setup, "slope": self.slope}


@dataclass(frozen=True)
class PiecewiseConcaveCost(CostSpec):
    """Continuous piecewise-linear cost with value 0 at zero flow.

    ``slopes[0]`` applies on ``[0, breakpoints[0]]``, ``slopes[i]`` on
    ``[breakpoints[i-1], breakpoints[i]]`` and the last slope beyond the last
    breakpoint, so ``len(slopes) == len(breakpoints) + 1``.
    """

    kind: ClassVar[str] = "piecewise"
    breakpoints: tuple[Number, ...] = ()
    slopes: tuple[Number, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        object.__setattr__(self, "slopes", tuple(self.slopes))
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ValueError("Piecewise cost needs exactly one more slope than breakpoints")
        previous = 0
        for point in self.breakpoints:
            if point <= previous:
                raise ValueError("Piecewise breakpoints must be positive and strictly increasing")
            previous = point
        for left, right in zip(self.slopes, self.slopes[1:]):
            if right > left:
                raise ValueError("Piecewise slopes must be nonincreasing left to right")

    def __call__(self, x: Number) -> Number:
        total: Number = 0
        start: Number = 0
        for point, slope in zip(self.breakpoints, self.slopes):
            if x <= point:
                return total + slope * (x - start)
            total += slope * (point - start)
            start = point
        return total + self.slopes[-1] * (x - start)

    def params(self) -> dict[str, Any]:
        return {"breakpoints": list(self.breakpoints), "slopes": list(self.slopes)}


@dataclass(frozen=True)
class PowerCost(CostSpec):
    kind: ClassVar[str] = "power"
    coeff: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.coeff < 0:
            raise ValueError(f"Power cost coefficient must be nonnegative, got {self.coeff}")
        if not 0 < self.exponent <= 1:
            raise ValueError(f"Power cost exponent must lie in (0, 1], got {self.exponent}")

    def __call__(self, x: Number) -> Number:
        if x == 0:
            return 0
        return self.coeff * float(x) ** self.exponent

    def params(self) -> dict[str, Any]:
        return {"coeff": self.coeff, "exponent": self.exponent}


@dataclass(frozen=True)
class OpaqueCost(CostSpec):
    """Black-box oracle; only concavity spot-checks apply to it."""

    kind: ClassVar[str] = "opaque"
    evaluator: Callable[[Number], Number] = ZeroCost()
    name: str = "opaque"

    def __call__(self, x: Number) -> Number:
        return self.evaluator(x)

    def params(self) -> dict[str, Any]:
        return {"name": self.name}


COST_KINDS: dict[str, type[CostSpec]] = {
    ZeroCost.kind: ZeroCost,
    LinearCost.kind: LinearCost,
    FixedChargeCost.kind: FixedChargeCost,
    PiecewiseConcaveCost.kind: PiecewiseConcaveCost,
    PowerCost.kind: PowerCost,
}

ZERO = ZeroCost()


def cost_from_dict(
    data: Mapping[str, Any],
    evaluators: Optional[Mapping[str, Callable[[Number], Number]]] = None,
) -> CostSpec:
    """Build a cost spec from its ``{"kind", "params"}`` form.

    Opaque costs are resolved by name through ``evaluators``.
    """
    if not isinstance(data, Mapping):
        raise ValueError(f"Cost must be an object, got {type(data).__name__}")
    kind = str(data.get("kind", "")).strip().lower()
    params = dict(data.get("params") or {})
    if kind == OpaqueCost.kind:
        name = str(params.get("name", ""))
        if not evaluators or name not in evaluators:
            raise ValueError(f"No evaluator registered for opaque cost {name!r}")
        return OpaqueCost(evaluator=evaluators[name], name=name)
    cls = COST_KINDS.get(kind)
    if cls is None:
        raise ValueError(f"Unknown cost kind: {kind!r}")
    if cls is PiecewiseConcaveCost:
        params = {
            "breakpoints": tuple(params.get("breakpoints", ())),
            "slopes": tuple(params.get("slopes", (0,))),
        }
    try:
        return cls(**params)
    except TypeError as exc:
        raise ValueError(f"Bad parameters for cost kind {kind!r}: {exc}") from exc


def concavity_violation(
    cost: CostSpec,
    upper: Number,
    samples: int = 17,
    tol: float = 1e-9,
) -> Optional[float]:
    """Spot-check concavity on ``[0, upper]``.

    Returns the first sampled point where the chord test fails, or None.
    Non-finite values count as failures.
    """
    if upper <= 0 or samples < 3:
        return None
    xs = np.linspace(0.0, float(upper), samples)
    ys = []
    for x in xs:
        value = cost(0 if x == 0 else float(x))
        if not math.isfinite(value):
            return float(x)
        ys.append(float(value))
    scale = max(1.0, max(abs(y) for y in ys))
    for i in range(1, samples - 1):
        x0, x1, x2 = xs[i - 1], xs[i], xs[i + 1]
        chord = ((x2 - x1) * ys[i - 1] + (x1 - x0) * ys[i + 1]) / (x2 - x0)
        if ys[i] < chord - tol * scale:
            return float(x1)
    return None
