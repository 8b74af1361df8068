"""Observability matrices and Gramians for sensor coalitions.

For a coalition S with stacked measurement rows C_S, the observability
matrix over K+1 samples is the row-stack of C_S A^k for k = 0..K, and the
observability Gramian is

    W_S = sum_k (A^T)^k C_S^T C_S A^k = O_S^T O_S.

W_S is symmetric positive semidefinite and additive over sensors:
W_S = sum of the single-sensor Gramians of the members of S. That additivity
is what makes coalition values cheap: the per-sensor Gramians are built once
(``per_sensor_gramians``) and every coalition Gramian is an n x n sum
(``coalition_gramian``). ``gramian_direct`` keeps the definition-level
construction around as the independent cross-check.

The system is observable over the window iff the full-coalition Gramian is
positive definite, i.e. its minimum eigenvalue is strictly positive.

Summation order is fixed (ascending sensor index, ascending k), so results
are deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .model import Coalition, LtiModel, members_in_range, require_valid

__all__ = [
    "Gramian",
    "GramianBank",
    "ObservabilityMatrix",
    "coalition_gramian",
    "gramian_direct",
    "is_observable",
    "observability_matrix",
    "per_sensor_gramians",
    "symmetric_eigenvalues",
]

# Relative asymmetry tolerated before a matrix is rejected as non-symmetric.
SYMMETRY_RTOL = 1e-12
# Eigenvalues may dip this far below zero (relative to the largest one,
# floored absolutely) before a Gramian is rejected as non-PSD.
PSD_RTOL = 1e-9
PSD_FLOOR = 1e-12


def _check_symmetric(m: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(
            f"{what} must be a non-empty square matrix, got shape {m.shape}"
        )
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{what} contains non-finite entries")
    scale = float(np.max(np.abs(m)))
    asym = float(np.max(np.abs(m - m.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise ValueError(
            f"{what} is not symmetric within tolerance "
            f"(max asymmetry {asym:.3e}, max entry {scale:.3e})"
        )
    return m


def symmetric_eigenvalues(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, in ascending order.

    The input must be symmetric within ``SYMMETRY_RTOL`` relative to its
    largest entry; it is symmetrized as (M + M^T)/2 before the solve so the
    result is deterministic for a given input.
    """
    m = _check_symmetric(m, "matrix")
    return np.linalg.eigvalsh((m + m.T) / 2.0)


@dataclass(frozen=True, eq=False)
class Gramian:
    """Symmetric PSD observability Gramian of one sensor coalition.

    Construction symmetrizes the entries as (M + M^T)/2 to absorb
    floating-point drift, then rejects inputs that are asymmetric beyond
    tolerance or have an eigenvalue below -max(PSD_RTOL * lambda_max,
    PSD_FLOOR). Eigenvalues are computed once and cached.
    """

    entries: np.ndarray
    coalition: Coalition

    def __post_init__(self):
        m = _check_symmetric(self.entries, "Gramian")
        sym = (m + m.T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)
        eigs = self.eigenvalues  # computes and caches; validates PSD below
        tol = max(PSD_RTOL * float(eigs[-1]), PSD_FLOOR)
        if float(eigs[0]) < -tol:
            raise ValueError(
                f"Gramian for coalition {self.coalition} is not positive "
                f"semidefinite (minimum eigenvalue {eigs[0]:.6e})"
            )

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, computed once per instance."""
        eigs = np.linalg.eigvalsh(self.entries)
        eigs.setflags(write=False)
        return eigs

    @property
    def state_dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class ObservabilityMatrix:
    """Stacked blocks C_S A^k for k = 0..K, with (K+1) * |S| rows."""

    entries: np.ndarray
    coalition: Coalition

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True, eq=False)
class GramianBank:
    """The p single-sensor Gramians of a model, index-aligned with its sensors.

    Built once per model; every coalition Gramian is then an entrywise sum of
    bank members.
    """

    per_sensor: tuple[Gramian, ...]
    horizon_samples: int

    def __post_init__(self):
        object.__setattr__(self, "per_sensor", tuple(self.per_sensor))
        if not self.per_sensor:
            raise ValueError("GramianBank requires at least one sensor Gramian")
        for i, g in enumerate(self.per_sensor):
            if g.coalition != Coalition((i,)):
                raise ValueError(
                    f"per_sensor[{i}] holds the Gramian of coalition "
                    f"{g.coalition}, expected {{{i}}}"
                )
        n = self.per_sensor[0].state_dimension
        if any(g.state_dimension != n for g in self.per_sensor):
            raise ValueError("per-sensor Gramians have inconsistent dimensions")

    @property
    def sensor_count(self) -> int:
        return len(self.per_sensor)

    @property
    def state_dimension(self) -> int:
        return self.per_sensor[0].state_dimension


def _coalition_rows(model: LtiModel, coalition: Coalition) -> np.ndarray:
    require_valid(model)
    members_in_range(coalition, model.sensor_count)
    if not coalition.members:
        raise ValueError("empty coalition has no observability matrix")
    return np.vstack([model.sensors[i].row for i in coalition])


def observability_matrix(model: LtiModel, coalition: Coalition) -> ObservabilityMatrix:
    """Build the stacked observability matrix of a non-empty coalition.

    Powers of the state matrix are accumulated by repeated multiplication,
    which stays well defined for defective (non-diagonalizable) dynamics.
    """
    rows = _coalition_rows(model, coalition)
    n = model.state_dimension
    power = np.eye(n)
    blocks = []
    for _ in range(model.horizon_samples):
        blocks.append(rows @ power)
        power = power @ model.state_matrix
    return ObservabilityMatrix(np.vstack(blocks), coalition)


def gramian_direct(model: LtiModel, coalition: Coalition) -> Gramian:
    """Build a coalition Gramian straight from its definition.

    Accumulates sum_k (C_S A^k)^T (C_S A^k) over the sample window. This is
    the reference construction; production paths sum cached per-sensor
    Gramians instead (see ``coalition_gramian``).
    """
    rows = _coalition_rows(model, coalition)
    n = model.state_dimension
    power = np.eye(n)
    acc = np.zeros((n, n))
    for _ in range(model.horizon_samples):
        block = rows @ power
        acc += block.T @ block
        power = power @ model.state_matrix
    return Gramian(acc, coalition)


def per_sensor_gramians(model: LtiModel) -> GramianBank:
    """Build all single-sensor Gramians once, for reuse across coalitions."""
    require_valid(model)
    return GramianBank(
        tuple(
            gramian_direct(model, Coalition((i,)))
            for i in range(model.sensor_count)
        ),
        model.horizon_samples,
    )


def coalition_gramian(bank: GramianBank, coalition: Coalition) -> Gramian:
    """Form a coalition Gramian as the sum of its members' cached Gramians.

    The empty coalition yields the zero matrix, which is the well-defined
    no-sensor Gramian every value function must accept.
    """
    members_in_range(coalition, bank.sensor_count)
    n = bank.state_dimension
    acc = np.zeros((n, n))
    for i in coalition:
        acc += bank.per_sensor[i].entries
    return Gramian(acc, coalition)


def is_observable(g: Gramian, tol: float | None = None) -> bool:
    """Whether the Gramian is positive definite, i.e. every state direction
    contributes output energy.

    ``tol`` is the strict lower bound the minimum eigenvalue must exceed; by
    default 1e-9 * max(1, largest eigenvalue).
    """
    eigs = g.eigenvalues
    if tol is None:
        tol = 1e-9 * max(1.0, float(eigs[-1]))
    elif tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return float(eigs[0]) > tol
