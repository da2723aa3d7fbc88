"""Truncated Fock-space vectors for one and two optical modes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, OutcomeError, TruncationError

DEFAULT_CUTOFF = 64
TAIL_LEVELS = 8
TAIL_TOLERANCE = 1e-12


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise DimensionError(f"expected a {ndim}-d amplitude array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FockVector:
    """Single-mode state vector over |0>, ..., |cutoff>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, 1))
        if self.amplitudes.size == 0:
            raise DimensionError("a Fock vector needs at least the vacuum level")

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / nrm)

    def padded(self, cutoff: int) -> "FockVector":
        if cutoff < self.cutoff:
            raise DimensionError(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        out = np.zeros(cutoff + 1, dtype=np.complex128)
        out[: self.amplitudes.size] = self.amplitudes
        return FockVector(out)

    def __len__(self):
        return self.amplitudes.size


def basis_state(n: int, cutoff: int) -> FockVector:
    if not 0 <= n <= cutoff:
        raise DimensionError(f"level {n} outside 0..{cutoff}")
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps)


def inner_product(u: FockVector, v: FockVector) -> complex:
    """<u|v>, conjugate-linear in ``u``."""
    if u.cutoff != v.cutoff:
        raise DimensionError(f"cutoff mismatch: {u.cutoff} vs {v.cutoff}")
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def fidelity(u: FockVector, v: FockVector) -> float:
    """|<u|v>|^2 of the normalized vectors, padding the shorter one."""
    size = max(u.cutoff, v.cutoff)
    a = u.padded(size).normalized()
    b = v.padded(size).normalized()
    return abs(inner_product(a, b)) ** 2


def parity_masses(v: FockVector) -> tuple[float, float]:
    probs = np.abs(v.amplitudes) ** 2
    return float(probs[0::2].sum()), float(probs[1::2].sum())


def tail_mass(v: FockVector, start: int) -> float:
    """Squared-magnitude sum over levels strictly above ``start``."""
    start = max(start, -1)
    return float(np.sum(np.abs(v.amplitudes[start + 1:]) ** 2))


def check_tail(v: FockVector, tol: float = TAIL_TOLERANCE) -> FockVector:
    mass = tail_mass(v, v.cutoff - TAIL_LEVELS)
    if mass > tol:
        raise TruncationError(
            f"top-{TAIL_LEVELS} tail mass {mass:.3e} exceeds {tol:.1e} at cutoff {v.cutoff}"
        )
    return v


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Joint amplitudes indexed ``[n1, n2]`` (mode 1 first)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, 2))

    @property
    def cutoffs(self) -> tuple[int, int]:
        rows, cols = self.amplitudes.shape
        return rows - 1, cols - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def tensor(u: FockVector, v: FockVector) -> TwoModeState:
    return TwoModeState(np.outer(u.amplitudes, v.amplitudes))


def project_mode2(s: TwoModeState, n: int) -> tuple[FockVector, float]:
    """Unnormalized mode-1 branch <n|_2 s and its weight."""
    if not 0 <= n <= s.cutoffs[1]:
        raise OutcomeError(f"outcome {n} outside mode-2 range 0..{s.cutoffs[1]}")
    branch = FockVector(s.amplitudes[:, n])
    return branch, branch.norm() ** 2
