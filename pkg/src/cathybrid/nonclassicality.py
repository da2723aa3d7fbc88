"""Wigner functions, quadrature statistics and the Fano factor.

Quadratures are ``X1 = a + a^dag`` and ``X2 = i (a - a^dag)``, so
``[X1, X2] = -2i`` and the vacuum has unit variance on both axes. A phase-space
point ``(x1, x2)`` corresponds to the coherent amplitude ``(x1 - i x2) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .errors import UndefinedMomentError
from .fock import TAIL_TOLERANCE, FockVector, check_tail

DEFAULT_POINTS = 301


@dataclass(frozen=True, eq=False)
class WignerGrid:
    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray  # indexed [i1, i2]

    def total(self) -> float:
        return float(trapezoid(trapezoid(self.values, self.x2, axis=1), self.x1))

    def marginal(self, axis: str) -> np.ndarray:
        """Integrate out the other quadrature; ``axis`` names the one kept."""
        if axis.upper() == "X1":
            return trapezoid(self.values, self.x2, axis=1)
        return trapezoid(self.values, self.x1, axis=0)

    def at(self, x1: float, x2: float) -> float:
        i = int(np.argmin(np.abs(self.x1 - x1)))
        j = int(np.argmin(np.abs(self.x2 - x2)))
        return float(self.values[i, j])


@dataclass(frozen=True, eq=False)
class QuadratureDistribution:
    axis: str
    x: np.ndarray
    density: np.ndarray

    def total(self) -> float:
        return float(trapezoid(self.density, self.x))

    def mean(self) -> float:
        return float(trapezoid(self.x * self.density, self.x))

    def variance(self) -> float:
        mu = self.mean()
        return float(trapezoid((self.x - mu) ** 2 * self.density, self.x))

    def local_maxima(self, rel_height: float = 1e-6) -> np.ndarray:
        """Positions of interior local maxima above ``rel_height * max``."""
        p = self.density
        inner = (p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:]) & (p[1:-1] > rel_height * p.max())
        return self.x[1:-1][inner]


def _support(v: FockVector) -> np.ndarray:
    """Amplitudes with negligible trailing levels removed."""
    a = v.amplitudes
    mags = np.abs(a)
    keep = np.nonzero(mags > 1e-17 * mags.max())[0]
    return a[: keep[-1] + 1] if keep.size else a[:1]


def default_extent(v: FockVector) -> float:
    """Half-width 2 sqrt(<n>) + 6, i.e. 2 beta + 6 for a cat of amplitude beta."""
    mean_n, _ = photon_moments(v)
    return 2.0 * np.sqrt(mean_n) + 6.0


def grid_axis(extent: float, points: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(-extent, extent, points)


def wigner(state: FockVector, x1: Optional[np.ndarray] = None, x2: Optional[np.ndarray] = None,
           points: int = DEFAULT_POINTS, tol: float = TAIL_TOLERANCE) -> WignerGrid:
    """Wigner function of a pure state from its Fock-basis density matrix.

    Builds the kernels of |m><n| by their Laguerre-Gaussian recurrence and
    sums them with weights rho_mn; normalized so that the integral over
    (x1, x2) is one.
    """
    check_tail(state, tol)
    if x1 is None:
        x1 = grid_axis(default_extent(state), points)
    if x2 is None:
        x2 = np.array(x1)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    amps = _support(state)
    rho = np.outer(amps, amps.conj())
    dim = amps.size

    alpha = 0.5 * (x1[:, None] - 1j * x2[None, :])
    two_a = 2.0 * alpha
    # kernels[n] holds the (m, n) kernel for the current row m
    kernels = [np.exp(-2.0 * np.abs(alpha) ** 2)]
    for n in range(1, dim):
        kernels.append(two_a * kernels[n - 1] / np.sqrt(n))
    w = np.real(rho[0, 0]) * kernels[0]
    for n in range(1, dim):
        w = w + 2.0 * np.real(rho[0, n] * kernels[n])
    for m in range(1, dim):
        temp = kernels[m]
        kernels[m] = (np.conj(two_a) * temp - np.sqrt(m) * kernels[m - 1]) / np.sqrt(m)
        w = w + np.real(rho[m, m] * kernels[m])
        for n in range(m + 1, dim):
            nxt = (two_a * kernels[n - 1] - np.sqrt(m) * temp) / np.sqrt(n)
            temp = kernels[n]
            kernels[n] = nxt
            w = w + 2.0 * np.real(rho[m, n] * kernels[n])
    # kernels above are (2/pi)-free; 1/(2 pi) fixes the (x1, x2) measure
    return WignerGrid(x1, x2, w / (2.0 * np.pi))


def hermite_functions(q: np.ndarray, count: int) -> np.ndarray:
    """Normalized oscillator eigenfunctions psi_0..psi_{count-1} at ``q``."""
    out = np.empty((count, q.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * q * q)
    if count > 1:
        out[1] = np.sqrt(2.0) * q * out[0]
    for n in range(1, count - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * q * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def quadrature_distribution(state: FockVector, axis: str = "X1", x: Optional[np.ndarray] = None,
                            points: int = DEFAULT_POINTS) -> QuadratureDistribution:
    axis = axis.upper()
    if axis not in ("X1", "X2"):
        raise ValueError(f"axis must be X1 or X2, got {axis!r}")
    check_tail(state)
    if x is None:
        x = grid_axis(default_extent(state), points)
    x = np.asarray(x, dtype=float)
    amps = _support(state)
    if axis == "X2":
        amps = amps * (1j ** np.arange(amps.size))
    # X1 = sqrt(2) q with q the unit-oscillator coordinate
    psi = amps @ hermite_functions(x / np.sqrt(2.0), amps.size)
    return QuadratureDistribution(axis, x, np.abs(psi) ** 2 / np.sqrt(2.0))


def _ladder_moments(v: FockVector) -> tuple[complex, complex, float]:
    """<a>, <a^2>, <a^dag a>."""
    c = v.amplitudes
    n = np.arange(c.size)
    a1 = np.vdot(c[:-1], np.sqrt(n[1:]) * c[1:])
    a2 = np.vdot(c[:-2], np.sqrt(n[1:-1] * n[2:]) * c[2:])
    return complex(a1), complex(a2), float(np.sum(n * np.abs(c) ** 2))


def quadrature_moments(state: FockVector, axis: str) -> tuple[float, float]:
    """(<X>, <X^2>) from Fock-basis sums."""
    a1, a2, nbar = _ladder_moments(state)
    if axis.upper() == "X1":
        return 2.0 * a1.real, 2.0 * a2.real + 2.0 * nbar + 1.0
    if axis.upper() == "X2":
        return -2.0 * a1.imag, -2.0 * a2.real + 2.0 * nbar + 1.0
    raise ValueError(f"axis must be X1 or X2, got {axis!r}")


def quadrature_sigma(state: FockVector, axis: str) -> float:
    mean, second = quadrature_moments(state, axis)
    return float(np.sqrt(max(second - mean * mean, 0.0)))


def photon_moments(state: FockVector) -> tuple[float, float]:
    """(<n>, <n^2>)."""
    p = np.abs(state.amplitudes) ** 2
    n = np.arange(p.size)
    return float(np.sum(n * p)), float(np.sum(n * n * p))


def fano(state: FockVector) -> float:
    """Photon-number variance over mean."""
    mean, second = photon_moments(state)
    if mean <= 1e-300:
        raise UndefinedMomentError("Fano factor undefined for zero mean photon number")
    return (second - mean * mean) / mean
