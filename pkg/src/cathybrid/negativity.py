"""Negativity of CV-mode x qubit pure states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Amplitudes indexed ``[n, q]``: Fock level of mode 1, qubit level q in {0, 1}."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"expected shape (dim, 2), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_branches(cls, psi, phi, a0, a1, b) -> "BipartiteState":
        """Normalized ``a0 psi|1> + a1 b phi|0>``."""
        amps = np.stack([a1 * b * np.asarray(phi), a0 * np.asarray(psi)], axis=1)
        return cls(amps / np.linalg.norm(amps))


def negativity_closed(a0, a1, b_abs: float) -> float:
    """2|a0||a1||B| / (|a0|^2 + |a1|^2 |B|^2)."""
    x, y, b = abs(a0), abs(a1), abs(b_abs)
    if not np.isfinite(b):
        return 0.0
    denom = x * x + y * y * b * b
    if denom == 0.0:
        return 0.0
    return 2.0 * x * y * b / denom


def negativity_ppt(state: BipartiteState, atol: float = 1e-10) -> float:
    """||rho^T_B||_1 - 1 with the transpose taken on the qubit factor."""
    psi = state.amplitudes
    norm = float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) > atol:
        raise NormalizationError(f"state norm^2 is {norm}, expected 1")
    dim = psi.shape[0]
    rho = np.einsum("ia,jb->iajb", psi, psi.conj())
    pt = rho.transpose(0, 3, 2, 1).reshape(2 * dim, 2 * dim)
    evals = np.linalg.eigvalsh(pt)
    return float(2.0 * -evals[evals < 0].sum())


def max_negativity_condition(a0, a1, b_abs: float, tol: float = 1e-9) -> bool:
    """True when |a0| = |a1| |B|, the point where negativity reaches 1."""
    return abs(abs(a0) - abs(a1) * abs(b_abs)) <= tol
