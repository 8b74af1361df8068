"""Value functions mapping a coalition Gramian to a scalar observability degree.

Two metrics ship:

* trace: total output energy captured over the window. Additive over
  sensors, so a coalition's value is the sum of its members' standalone
  values and no interaction between sensors is ever credited.
* minimum eigenvalue: output energy of the weakest state direction. Zero
  exactly when the coalition loses observability, and non-additive, so it
  rewards sensors that repair each other's blind directions.

The log-determinant is deliberately not offered: coalitions that lose
observability have singular Gramians, where it is undefined.

The value of the empty coalition is 0 for both metrics: the empty energy sum
for the trace, and the PSD floor for the minimum eigenvalue.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator

import numpy as np

from .gramian import (
    PSD_FLOOR,
    PSD_RTOL,
    Gramian,
    coalition_gramian,
    per_sensor_gramians,
)
from .model import (
    ENUMERATION_CAP,
    Coalition,
    EnumerationCapExceeded,
    LtiModel,
    require_valid,
)

__all__ = [
    "CoalitionValue",
    "CoalitionValueTable",
    "ValueFunctionKind",
    "evaluate",
    "value_table",
]


class ValueFunctionKind(Enum):
    """Selector for the observability-degree metric applied to a Gramian."""

    TRACE = "trace"
    MIN_EIGENVALUE = "min-eig"

    @classmethod
    def from_cli_name(cls, name: str) -> "ValueFunctionKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(
            f"unknown metric {name!r}; expected one of "
            + ", ".join(repr(k.value) for k in cls)
        )

    @property
    def cli_name(self) -> str:
        return self.value


def _trace_value(g: Gramian) -> float:
    return float(np.trace(g.entries))


def _min_eigenvalue_value(g: Gramian) -> float:
    eigs = g.eigenvalues
    smallest = float(eigs[0])
    if smallest >= 0.0:
        return smallest
    # Rank-deficient Gramians should report exactly "unobservable", not a
    # tiny negative eigensolver residue.
    spectral_radius = max(abs(smallest), abs(float(eigs[-1])))
    if smallest >= -max(PSD_RTOL * spectral_radius, PSD_FLOOR):
        return 0.0
    raise ValueError(
        f"Gramian has minimum eigenvalue {smallest:.6e}, beyond the PSD tolerance"
    )


# Registry of shipped metrics; adding a metric is a one-entry change here.
_EVALUATORS: dict[ValueFunctionKind, Callable[[Gramian], float]] = {
    ValueFunctionKind.TRACE: _trace_value,
    ValueFunctionKind.MIN_EIGENVALUE: _min_eigenvalue_value,
}


def evaluate(kind: ValueFunctionKind, g: Gramian) -> float:
    """Scalar observability degree of a coalition Gramian.

    The zero Gramian (empty coalition) evaluates to exactly 0 for every
    metric. Minimum eigenvalues within PSD tolerance below zero are clamped
    to 0.
    """
    try:
        evaluator = _EVALUATORS[kind]
    except KeyError:
        raise ValueError(f"no evaluator registered for {kind!r}") from None
    return evaluator(g)


@dataclass(frozen=True)
class CoalitionValue:
    """One (coalition, value) record of a value table."""

    coalition: Coalition
    value: float


class CoalitionValueTable(Mapping):
    """Read-only map from every coalition over p sensors to its metric value.

    Values are stored in a dense array indexed by coalition bitmask, so the
    table supports fast vectorized consumption (``by_bitmask``) alongside the
    mapping interface keyed by :class:`Coalition`.
    """

    def __init__(self, values_by_bitmask: np.ndarray, kind: ValueFunctionKind):
        values = np.asarray(values_by_bitmask, dtype=float)
        if values.ndim != 1 or values.size == 0 or values.size & (values.size - 1):
            raise ValueError("value table length must be a power of two")
        values.setflags(write=False)
        self._values = values
        self._kind = kind
        self._sensor_count = values.size.bit_length() - 1

    @property
    def kind(self) -> ValueFunctionKind:
        return self._kind

    @property
    def sensor_count(self) -> int:
        return self._sensor_count

    @property
    def by_bitmask(self) -> np.ndarray:
        """Values indexed by coalition bitmask (length 2^p, read-only)."""
        return self._values

    @property
    def grand_value(self) -> float:
        """Value of the full coalition of all p sensors."""
        return float(self._values[-1])

    def __getitem__(self, coalition: Coalition) -> float:
        mask = coalition.bitmask
        if mask >= self._values.size:
            raise KeyError(coalition)
        return float(self._values[mask])

    def __iter__(self) -> Iterator[Coalition]:
        return (Coalition.from_bitmask(m) for m in range(self._values.size))

    def __len__(self) -> int:
        return self._values.size

    def records(self) -> Iterator[CoalitionValue]:
        """Iterate (coalition, value) records in ascending bitmask order."""
        for mask in range(self._values.size):
            yield CoalitionValue(Coalition.from_bitmask(mask), float(self._values[mask]))


def value_table(
    model: LtiModel, kind: ValueFunctionKind, *, cap: int = ENUMERATION_CAP
) -> CoalitionValueTable:
    """Evaluate the metric on every one of the 2^p coalitions of a model.

    Coalition Gramians are formed by summing the cached per-sensor Gramians,
    so the model's dynamics are only propagated p times regardless of how
    many coalitions exist. The empty coalition's value is exactly 0.
    """
    require_valid(model)
    p = model.sensor_count
    if p > cap:
        raise EnumerationCapExceeded(
            f"a value table over {p} sensors would hold 2^{p} coalitions, "
            f"above the cap of {cap}; use the permutation-sampling estimator "
            f"(shapley_sampled) instead"
        )
    bank = per_sensor_gramians(model)
    values = np.zeros(1 << p)
    for mask in range(1, 1 << p):
        gram = coalition_gramian(bank, Coalition.from_bitmask(mask))
        values[mask] = evaluate(kind, gram)
    return CoalitionValueTable(values, kind)
