"""Displaced number states in the Fock basis.

Conventions: for real ``alpha``

    D(alpha)|n> = F(alpha) * sum_m c_nm(alpha) |m>,   F(alpha) = exp(-alpha**2 / 2)

so ``c_nm(alpha) = exp(alpha**2 / 2) <m|D(alpha)|n>``. For m >= n

    c_nm = sqrt(n!/m!) * alpha**(m-n) * L_n^(m-n)(alpha**2)

and for m < n the roles swap with ``alpha -> -alpha``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import RangeError
from .fock import TAIL_TOLERANCE, FockVector, check_tail

MAX_ALPHA = 8.0
MAX_INDEX = 128


def real_amplitude(alpha) -> float:
    """Coerce a displacement amplitude to float, rejecting complex phases."""
    if isinstance(alpha, numbers.Complex) and not isinstance(alpha, numbers.Real):
        if complex(alpha).imag != 0.0:
            raise ValueError(f"only real displacement amplitudes are supported, got {alpha!r}")
        alpha = complex(alpha).real
    return float(alpha)


def prefactor(alpha: float) -> float:
    """F(alpha) = exp(-|alpha|^2 / 2)."""
    return float(np.exp(-0.5 * alpha * alpha))


def _check_range(alpha: float, top: int) -> None:
    if abs(alpha) > MAX_ALPHA:
        raise RangeError(f"|alpha| = {abs(alpha)} exceeds {MAX_ALPHA}")
    if top > MAX_INDEX:
        raise RangeError(f"photon index {top} exceeds {MAX_INDEX}")


def _coeff_grid(n: np.ndarray, m: np.ndarray, alpha: float) -> np.ndarray:
    """c_nm(alpha) on broadcast integer grids ``n``, ``m``."""
    n, m = np.broadcast_arrays(np.asarray(n, dtype=np.int64), np.asarray(m, dtype=np.int64))
    lo = np.minimum(n, m)
    hi = np.maximum(n, m)
    k = (hi - lo).astype(float)
    x = alpha * alpha

    # L_lo^(k)(x) by the three-term recurrence, all entries advanced together
    lag = np.ones(lo.shape)
    prev = np.ones(lo.shape)
    cur = 1.0 + k - x
    top = int(lo.max()) if lo.size else 0
    lag = np.where(lo >= 1, cur, lag)
    for j in range(1, top):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
        lag = np.where(lo == j + 1, cur, lag)

    log_ratio = 0.5 * (gammaln(lo + 1.0) - gammaln(hi + 1.0))
    if alpha == 0.0:
        power = np.where(k == 0, 1.0, 0.0)
        return power * lag
    # (+alpha)^k above the diagonal, (-alpha)^k below
    base = np.where(m >= n, alpha, -alpha)
    sign = np.where((base < 0) & (k % 2 == 1), -1.0, 1.0)
    with np.errstate(over="raise"):
        try:
            mag = np.exp(log_ratio + k * np.log(abs(alpha)))
        except FloatingPointError as exc:
            raise RangeError("displacement amplitude prefactor overflowed") from exc
    out = sign * mag * lag
    if not np.all(np.isfinite(out)):
        raise RangeError("displacement amplitudes lost all precision")
    return out


def coeff(n: int, m: int, alpha) -> float:
    """Single amplitude c_nm(alpha)."""
    if n < 0 or m < 0:
        raise ValueError("photon numbers must be nonnegative")
    alpha = real_amplitude(alpha)
    _check_range(alpha, max(n, m))
    return float(_coeff_grid(np.array(n), np.array(m), alpha))


@dataclass(frozen=True, eq=False)
class DisplacementTable:
    alpha: float
    cutoff: int
    coeffs: np.ndarray
    prefactor: float

    def matrix(self) -> np.ndarray:
        """Truncated D(alpha) with entries <m|D|n> at ``[m, n]``."""
        return self.prefactor * self.coeffs.T

    def row_state(self, l: int) -> np.ndarray:
        return self.prefactor * self.coeffs[l]


@lru_cache(maxsize=256)
def _cached_table(alpha: float, cutoff: int) -> DisplacementTable:
    idx = np.arange(cutoff + 1)
    coeffs = _coeff_grid(idx[:, None], idx[None, :], alpha)
    coeffs.setflags(write=False)
    return DisplacementTable(alpha, cutoff, coeffs, prefactor(alpha))


def build_table(alpha, cutoff: int) -> DisplacementTable:
    """c_nm(alpha) for 0 <= n, m <= cutoff (memoized, read-only)."""
    alpha = real_amplitude(alpha)
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    _check_range(alpha, cutoff)
    return _cached_table(alpha, int(cutoff))


def displaced_number_state(l: int, alpha, cutoff: int, tol: float = TAIL_TOLERANCE) -> FockVector:
    """|l, alpha> = D(alpha)|l> truncated at ``cutoff``."""
    if not 0 <= l <= cutoff:
        raise ValueError(f"level {l} outside 0..{cutoff}")
    table = build_table(alpha, cutoff)
    return check_tail(FockVector(table.row_state(l)), tol)


def displacement_matrix_expm(alpha, cutoff: int, padding: int = 64) -> np.ndarray:
    """Independent route: expm of alpha (a^dag - a) on a padded space, cropped.

    Entries well inside the crop are unaffected by the padding edge.
    """
    alpha = real_amplitude(alpha)
    dim = cutoff + 1 + padding
    lower = np.diag(np.sqrt(np.arange(1, dim)), -1)  # a^dag
    gen = alpha * (lower - lower.T)
    return expm(gen)[: cutoff + 1, : cutoff + 1]


def orthonormality_defect(table: DisplacementTable, rows) -> float:
    """max |exp(-alpha^2) sum_m c_lm c_nm - delta_ln| over the given rows."""
    rows = np.asarray(list(rows), dtype=int)
    sub = table.coeffs[rows]
    gram = np.exp(-table.alpha ** 2) * sub @ sub.T
    return float(np.max(np.abs(gram - np.eye(rows.size))))


def safe_rows(table: DisplacementTable, tol: float = TAIL_TOLERANCE) -> list[int]:
    """Rows whose displaced state keeps its top-level tail below ``tol``.

    These are the rows away from the truncation edge: their completeness sums
    are not cut off by the finite table.
    """
    probs = (table.prefactor * table.coeffs) ** 2
    start = table.cutoff - 8 + 1
    tails = probs[:, max(start, 0):].sum(axis=1)
    return [int(l) for l in np.nonzero(tails <= tol)[0]]
