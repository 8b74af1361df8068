"""Domain types for discrete-time LTI models, sensors, and sensor coalitions.

The dynamics are x[k+1] = A x[k] with per-sensor outputs y_i[k] = c_i x[k],
where A is the square state matrix and c_i is the row vector of sensor i.
Outputs are accumulated over a finite window of ``horizon_samples`` time
steps (k = 0 .. horizon_samples - 1).

All types here are immutable after construction and safe to share across
threads. Model validation is data, not an exception: ``validate_model``
returns the list of violated invariants so callers can report them all at
once. Operations that require a well-formed model call ``require_valid``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral
from typing import Iterator

import numpy as np

__all__ = [
    "ENUMERATION_CAP",
    "Coalition",
    "EnumerationCapExceeded",
    "LtiModel",
    "Sensor",
    "ValidationResult",
    "enumerate_subcoalitions",
    "full_coalition",
    "require_valid",
    "validate_model",
]

# Exact coalition enumeration touches 2^p subsets; above this sensor count
# callers are pointed at the permutation-sampling estimator instead.
ENUMERATION_CAP = 24


class EnumerationCapExceeded(ValueError):
    """Raised when an exact 2^p enumeration would exceed the configured cap."""


def _as_readonly_float_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Sensor:
    """A single scalar-output sensor: a name and its measurement row.

    ``row`` has one entry per model state; the sensor observes the linear
    combination row @ x.
    """

    name: str
    row: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row", _as_readonly_float_array(self.row))


@dataclass(frozen=True, eq=False)
class LtiModel:
    """Autonomous discrete-time LTI system with named scalar sensors.

    Construction only coerces array types; shape and finiteness checks live
    in ``validate_model`` so that malformed inputs can be reported as data.
    """

    state_matrix: np.ndarray
    sensors: tuple[Sensor, ...]
    horizon_samples: int

    def __post_init__(self):
        object.__setattr__(
            self, "state_matrix", _as_readonly_float_array(self.state_matrix)
        )
        object.__setattr__(self, "sensors", tuple(self.sensors))

    @property
    def state_dimension(self) -> int:
        return self.state_matrix.shape[0]

    @property
    def sensor_count(self) -> int:
        return len(self.sensors)

    @property
    def sensor_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.sensors)

    def measurement_matrix(self) -> np.ndarray:
        """All sensor rows stacked in index order (p x n)."""
        return np.vstack([s.row for s in self.sensors])


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of ``validate_model``: empty ``violations`` means the model is ok."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_model(model: LtiModel) -> ValidationResult:
    """Check every model invariant and return the violations found.

    Each violation message names the offending field. A model is valid iff
    the state matrix is square and finite, every sensor row is a finite
    vector of matching length with a unique non-empty name, and the horizon
    is a positive sample count.
    """
    violations: list[str] = []

    a = model.state_matrix
    square = a.ndim == 2 and a.shape[0] == a.shape[1] and a.shape[0] >= 1
    if not square:
        violations.append(f"state_matrix: expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        idx = tuple(int(i) for i in np.argwhere(~np.isfinite(a))[0])
        violations.append(f"state_matrix: non-finite entry at {idx}")

    n = a.shape[0] if square else None
    if not model.sensors:
        violations.append("sensors: at least one sensor is required")

    seen: set[str] = set()
    for i, sensor in enumerate(model.sensors):
        label = f"sensors[{i}]"
        if not isinstance(sensor.name, str) or not sensor.name:
            violations.append(f"{label}.name: must be a non-empty string")
        elif sensor.name in seen:
            violations.append(f"{label}.name: duplicate sensor name {sensor.name!r}")
        else:
            seen.add(sensor.name)
        row = sensor.row
        if row.ndim != 1:
            violations.append(f"{label}.row: expected a vector, got shape {row.shape}")
            continue
        if n is not None and row.shape[0] != n:
            violations.append(
                f"{label}.row: row length mismatch (got {row.shape[0]}, "
                f"state dimension is {n})"
            )
        if not np.all(np.isfinite(row)):
            j = int(np.argwhere(~np.isfinite(row))[0][0])
            violations.append(f"{label}.row: non-finite entry at index {j}")

    h = model.horizon_samples
    if not isinstance(h, Integral) or isinstance(h, bool) or h < 1:
        violations.append(f"horizon_samples: must be a positive integer, got {h!r}")

    return ValidationResult(tuple(violations))


def require_valid(model: LtiModel) -> None:
    """Raise ``ValueError`` listing all violations if the model is malformed."""
    result = validate_model(model)
    if not result.ok:
        raise ValueError("invalid model: " + "; ".join(result.violations))


@dataclass(frozen=True)
class Coalition:
    """An immutable subset of sensor indices with set semantics.

    Members are stored deduplicated in ascending order, so iteration order,
    equality, hashing, and the bitmask encoding are all canonical. The empty
    coalition is allowed.
    """

    members: tuple[int, ...]

    def __post_init__(self):
        canonical = []
        for m in set(self.members):
            if not isinstance(m, Integral) or isinstance(m, bool):
                raise ValueError(f"sensor index must be an integer, got {m!r}")
            if m < 0:
                raise ValueError(f"sensor index must be non-negative, got {m}")
            canonical.append(int(m))
        object.__setattr__(self, "members", tuple(sorted(canonical)))

    @classmethod
    def from_bitmask(cls, mask: int) -> "Coalition":
        """Decode a membership bitmask (bit i set means sensor i is a member)."""
        if mask < 0:
            raise ValueError(f"bitmask must be non-negative, got {mask}")
        return cls(tuple(i for i in range(mask.bit_length()) if mask >> i & 1))

    @property
    def bitmask(self) -> int:
        mask = 0
        for m in self.members:
            mask |= 1 << m
        return mask

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, index: object) -> bool:
        return index in self.members

    def __str__(self) -> str:
        return "{" + ", ".join(str(m) for m in self.members) + "}"


def full_coalition(model: LtiModel) -> Coalition:
    """The coalition of every sensor in the model: {0, ..., p-1}."""
    require_valid(model)
    return Coalition(tuple(range(model.sensor_count)))


def enumerate_subcoalitions(
    sensor_count: int, excluded: int, *, cap: int = ENUMERATION_CAP
) -> Iterator[Coalition]:
    """Yield all 2^(p-1) coalitions drawn from the sensors other than ``excluded``.

    Coalitions appear exactly once each, in ascending bitmask order over the
    remaining sensors (so the empty coalition comes first and the full
    remainder last). Sensor counts above ``cap`` are rejected to prevent
    runaway exponential enumeration.
    """
    if sensor_count < 1:
        raise ValueError(f"sensor_count must be >= 1, got {sensor_count}")
    if not 0 <= excluded < sensor_count:
        raise ValueError(
            f"excluded index {excluded} out of range for {sensor_count} sensors"
        )
    if sensor_count > cap:
        raise EnumerationCapExceeded(
            f"enumerating subsets of {sensor_count} sensors exceeds the cap of "
            f"{cap} (2^{sensor_count - 1} coalitions); use the permutation-"
            f"sampling estimator (shapley_sampled) for large sensor sets"
        )
    others = [i for i in range(sensor_count) if i != excluded]

    def _generate() -> Iterator[Coalition]:
        for mask in range(1 << len(others)):
            yield Coalition(
                tuple(others[b] for b in range(len(others)) if mask >> b & 1)
            )

    return _generate()


def members_in_range(coalition: Coalition, sensor_count: int) -> None:
    """Raise ``ValueError`` if the coalition references a sensor index >= p."""
    if coalition.members and coalition.members[-1] >= sensor_count:
        raise ValueError(
            f"coalition {coalition} references sensor index "
            f"{coalition.members[-1]} but only {sensor_count} sensors exist"
        )
