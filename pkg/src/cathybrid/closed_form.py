"""Closed-form conditional states, B-parameters and success probabilities.

Input ``Omega(l, s)`` at amplitude beta, outcome n. With ``sp = s (-1)^n``
the conditional branches expand over states at amplitude ``beta t``::

    Psi = L sum_{p=0..l}   x_p Omega(p, sp)
    Phi = K sum_{p=0..l+1} y_p Omega(p, -sp)

and the heralded state is ``a0 Psi|1> + a1 B Phi|0>`` up to normalization.
Every denominator contains c_{l,n}(beta r) or c_{l+1,n}(beta r), which vanish
at Laguerre zeros; near those points a ConditioningError is raised and the
evolution path in ``entangler`` should be used instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .displacement import coeff, prefactor
from .entangler import BeamSplitterParams, DelocalizedPhoton
from .errors import ConditioningError
from .fock import FockVector
from .states import gram_matrix, parse_sign, sdlps_norm_factor, sdlps_vector, superposition_norm

GUARD = 1e-8


def _guard(value: complex, scale: float, what: str) -> None:
    if abs(value) < GUARD * scale or value == 0:
        raise ConditioningError(f"{what} = {value:.3e} is too close to zero (scale {scale:.3e})")


def _norm_of(coeffs: np.ndarray, sign: int, amp: float) -> float:
    gram = gram_matrix(range(coeffs.size), sign, amp)
    return float(np.real(np.conj(coeffs) @ gram @ coeffs)) ** -0.5


@dataclass(frozen=True, eq=False)
class ClosedForm:
    """Expansion of both conditional branches plus the state-independent weight.

    ``weight`` times ``|a0|^2 + |a1|^2 |B|^2`` is the outcome probability.
    """

    beta: float
    params: BeamSplitterParams
    n: int
    psi_sign: int
    x: np.ndarray
    y: np.ndarray
    psi_norm: float
    phi_norm: float
    b: complex
    weight: float

    @property
    def phi_sign(self) -> int:
        return -self.psi_sign

    def probability(self, photon: DelocalizedPhoton) -> float:
        return self.weight * (abs(photon.a0) ** 2 + abs(photon.a1) ** 2 * abs(self.b) ** 2)

    def states(self, cutoff: int) -> tuple[FockVector, FockVector]:
        amp = self.beta * self.params.t
        psi = sum(xp * sdlps_vector(p, self.psi_sign, amp, cutoff).amplitudes
                  for p, xp in enumerate(self.x))
        phi = sum(yp * sdlps_vector(p, self.phi_sign, amp, cutoff).amplitudes
                  for p, yp in enumerate(self.y))
        return FockVector(self.psi_norm * psi), FockVector(self.phi_norm * phi)


def _single(l: int, sign, n: int, beta: float, params: BeamSplitterParams) -> ClosedForm:
    sign = parse_sign(sign)
    t, r = params.t, params.r
    br, bt = beta * r, beta * t
    s = sign * (-1) ** n
    c = [coeff(k, n, br) for k in range(l + 2)]
    scale = max(abs(v) for v in c)
    _guard(c[l], scale, f"c_{l},{n}(beta r)")
    _guard(c[l + 1], scale, f"c_{l + 1},{n}(beta r)")

    n_psi = [sdlps_norm_factor(p, s, bt) for p in range(l + 1)]
    n_phi = [sdlps_norm_factor(p, -s, bt) for p in range(l + 2)]
    fact = math.factorial

    x = np.array([
        (-1) ** p * (t / r) ** p * math.sqrt(math.comb(l, p))
        * c[l - p] * n_psi[0] / (c[l] * n_psi[p])
        for p in range(l + 1)
    ])
    y = [
        (-1) ** p * t ** (p - 2) * math.sqrt(fact(l) * fact(l - p + 1)) * c[l - p + 1] * n_phi[0]
        / (r ** p * fact(l - p) * math.sqrt((l + 1) * fact(p)) * c[l + 1] * n_phi[p])
        * (t * t - p / (l - p + 1) * r * r)
        for p in range(l + 1)
    ]
    y.append((-1) ** l * t ** (l - 1) * c[0] * n_phi[0] / (r ** (l - 1) * c[l + 1] * n_phi[l + 1]))
    y = np.array(y)

    psi_norm = _norm_of(x, s, bt)
    phi_norm = _norm_of(y, -s, bt)
    b = t * math.sqrt(l + 1) * c[l + 1] * n_psi[0] * psi_norm / (c[l] * n_phi[0] * phi_norm)
    weight = (prefactor(br) ** 2 * r ** (2 * l) * c[l] ** 2 * sdlps_norm_factor(l, sign, beta) ** 2
              / (n_psi[0] ** 2 * psi_norm ** 2))
    return ClosedForm(beta, params, n, s, x, y, psi_norm, phi_norm, complex(b), weight)


def closed_form_amplitudes(l: int, sign, n: int, beta: float, params: BeamSplitterParams):
    """(x, y) coefficient lists; ``y`` has the extra entry for Omega(l+1)."""
    cf = _single(l, sign, n, beta, params)
    return list(cf.x), list(cf.y)


def closed_form_B(l: int, sign, n: int, beta: float, params: BeamSplitterParams) -> complex:
    return _single(l, sign, n, beta, params).b


def closed_form_probability(l: int, sign, n: int, beta: float, params: BeamSplitterParams,
                            photon: DelocalizedPhoton) -> float:
    return _single(l, sign, n, beta, params).probability(photon)


def closed_form(l: int, sign, n: int, beta: float, params: BeamSplitterParams) -> ClosedForm:
    """Full closed-form record for a single even/odd input state."""
    return _single(l, sign, n, beta, params)


@dataclass(frozen=True, eq=False)
class SuperpositionClosedForm:
    f: np.ndarray        # f_kp, p = 0..k
    g: np.ndarray        # g_kp, p = 0..k
    g_extra: np.ndarray  # g_l, l = 0..k (weights of Omega(l+1) in Phi)
    branches: ClosedForm

    @property
    def b(self) -> complex:
        return self.branches.b

    def probability(self, photon: DelocalizedPhoton) -> float:
        return self.branches.probability(photon)


def superposition_closed_form(b: Sequence[complex], sign, n: int, beta: float,
                              params: BeamSplitterParams) -> SuperpositionClosedForm:
    """Closed forms for the input N sum_k b_k Omega(k, sign)."""
    sign = parse_sign(sign)
    bvec = np.asarray(b, dtype=np.complex128)
    k = bvec.size - 1
    t, r = params.t, params.r
    br, bt = beta * r, beta * t
    s = sign * (-1) ** n
    c = [coeff(j, n, br) for j in range(k + 2)]
    n_in = [sdlps_norm_factor(j, sign, beta) for j in range(k + 1)]
    n_psi = [sdlps_norm_factor(p, s, bt) for p in range(k + 1)]
    n_phi = [sdlps_norm_factor(p, -s, bt) for p in range(k + 2)]
    fact = math.factorial

    def f_terms(p):
        return [(-1) ** j * bvec[j] * n_in[j] * r ** (j - p) * c[j - p]
                * math.sqrt(fact(j) / fact(j - p)) for j in range(p, k + 1)]

    def g_terms(p):
        return [(-1) ** j * bvec[j] * n_in[j] * r ** (j - p) * c[j - p + 1]
                * math.sqrt(fact(j) * fact(j - p + 1)) / fact(j - p)
                * (t * t - p / (j - p + 1) * r * r) for j in range(p, k + 1)]

    f = np.array([sum(f_terms(p)) for p in range(k + 1)])
    g = np.array([sum(g_terms(p)) for p in range(k + 1)])
    _guard(f[0], max(abs(v) for v in f_terms(0)), "f_k0")
    _guard(g[0], max(abs(v) for v in g_terms(0)), "g_k0")
    g_extra = np.array([bvec[j] * n_in[j] * t ** j * math.sqrt(j + 1) / n_phi[j + 1]
                        for j in range(k + 1)])

    x = np.array([(-1) ** p * t ** p * f[p] * n_psi[0] / (math.sqrt(fact(p)) * f[0] * n_psi[p])
                  for p in range(k + 1)])
    y = np.zeros(k + 2, dtype=np.complex128)
    y[: k + 1] = [(-1) ** p * t ** p * g[p] * n_phi[0] / (math.sqrt(fact(p)) * g[0] * n_phi[p])
                  for p in range(k + 1)]
    y[1:] += r * t * c[0] * n_phi[0] / g[0] * g_extra

    psi_norm = _norm_of(x, s, bt)
    phi_norm = _norm_of(y, -s, bt)
    b_param = g[0] * n_psi[0] * psi_norm / (t * f[0] * n_phi[0] * phi_norm)
    n_total = superposition_norm(bvec, sign, beta)
    weight = (n_total ** 2 * prefactor(br) ** 2 * abs(f[0]) ** 2
              / (n_psi[0] ** 2 * psi_norm ** 2))
    branches = ClosedForm(beta, params, n, s, x, y, psi_norm, phi_norm, complex(b_param), weight)
    return SuperpositionClosedForm(f, g, g_extra, branches)
