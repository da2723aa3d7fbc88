"""Beam-splitter mixing with a delocalized photon and heralded conditioning.

Mode 1 carries the CV input, modes 2 and 3 share the photon
``a0 |0>_2|1>_3 + a1 |1>_2|0>_3``. Modes 1 and 2 meet on the beam splitter,
mode 2 is counted, and the conditional state lives in modes 1 and 3:

    a0 * A_n |1>_3 + a1 * C_n |0>_3

with ``A_n`` from the vacuum in mode 2 and ``C_n`` from the photon in mode 2.

Operator convention: a1^dag -> t a1^dag - r a2^dag, a2^dag -> r a1^dag + t a2^dag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy.linalg import expm

from .displacement import MAX_INDEX
from .errors import NormalizationError, OutcomeError, RangeError
from .fock import FockVector, TwoModeState, basis_state, parity_masses, project_mode2, tensor
from .negativity import BipartiteState, negativity_closed, negativity_ppt
from .states import NormalizedState

# a branch weaker than this fraction of the other one is treated as absent
BRANCH_FLOOR = 1e-24


@dataclass(frozen=True)
class DelocalizedPhoton:
    a0: complex
    a1: complex

    def __post_init__(self):
        a0, a1 = complex(self.a0), complex(self.a1)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "a1", a1)
        if abs(abs(a0) ** 2 + abs(a1) ** 2 - 1.0) > 1e-12:
            raise NormalizationError(f"|a0|^2 + |a1|^2 must be 1, got {abs(a0) ** 2 + abs(a1) ** 2}")
        if a0 == 0 or a1 == 0:
            raise ValueError("a delocalized photon needs both a0 and a1 nonzero")

    @classmethod
    def balanced(cls) -> "DelocalizedPhoton":
        return cls(2 ** -0.5, 2 ** -0.5)

    @classmethod
    def from_unnormalized(cls, a0: complex, a1: complex) -> "DelocalizedPhoton":
        scale = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        return cls(a0 / scale, a1 / scale)


@dataclass(frozen=True)
class BeamSplitterParams:
    t: float

    def __post_init__(self):
        t = float(self.t)
        if not 0.0 < t < 1.0:
            raise ValueError(f"transmittance must lie in (0, 1), got {t}")
        object.__setattr__(self, "t", t)

    @property
    def r(self) -> float:
        return math.sqrt(1.0 - self.t * self.t)


class BeamSplitter:
    """Photon-number-conserving unitary on modes 1 and 2.

    ``blocks[N]`` acts on ``|N-q, q>`` for q = 0..N (rows and columns indexed
    by the mode-2 count q).
    """

    def __init__(self, params: BeamSplitterParams, max_photons: int):
        if max_photons > 2 * MAX_INDEX + 1:
            raise RangeError(f"total photon number {max_photons} too large")
        self.params = params
        self.max_photons = max_photons
        theta = math.acos(params.t)
        self.blocks = tuple(_block(theta, n) for n in range(max_photons + 1))

    def amplitude(self, out: tuple[int, int], inp: tuple[int, int]) -> float:
        """<out| BS |inp> for two-mode Fock labels (n1, n2)."""
        total = sum(inp)
        if sum(out) != total:
            return 0.0
        return float(self.blocks[total][out[1], inp[1]])

    def apply(self, state: TwoModeState) -> TwoModeState:
        c1, c2 = state.cutoffs
        top = c1 + c2
        if top > self.max_photons:
            raise RangeError(f"state holds up to {top} photons, unitary built for {self.max_photons}")
        src = state.amplitudes
        out = np.zeros((top + 1, top + 1), dtype=np.complex128)
        for total in range(top + 1):
            q = np.arange(max(0, total - c1), min(total, c2) + 1)
            if q.size == 0:
                continue
            vec = src[total - q, q]
            if not np.any(vec):
                continue
            res = self.blocks[total][:, q] @ vec
            qo = np.arange(total + 1)
            out[total - qo, qo] = res
        return TwoModeState(out)

    def defect(self) -> float:
        """max over blocks of |U^T U - I|."""
        return max(float(np.max(np.abs(b.T @ b - np.eye(b.shape[0])))) for b in self.blocks)


def _block(theta: float, total: int) -> np.ndarray:
    gen = np.zeros((total + 1, total + 1))
    q = np.arange(1, total + 1)
    # a1^dag a2 |N-q, q> = sqrt(q (N-q+1)) |N-q+1, q-1>
    amp = np.sqrt(q * (total - q + 1.0))
    gen[q - 1, q] = amp
    gen[q, q - 1] = -amp
    return expm(theta * gen)


@lru_cache(maxsize=64)
def _cached_splitter(t: float, max_photons: int) -> BeamSplitter:
    return BeamSplitter(BeamSplitterParams(t), max_photons)


def beam_splitter_unitary(params: BeamSplitterParams, cutoff: int) -> BeamSplitter:
    """Unitary covering every two-mode state with at most ``cutoff`` photons in total."""
    if cutoff > 2 * MAX_INDEX + 1:
        raise RangeError(f"cutoff {cutoff} too large")
    return _cached_splitter(params.t, int(cutoff))


@dataclass(frozen=True, eq=False)
class ConditionalResult:
    """One heralded outcome. ``psi`` pairs with |1>_3, ``phi`` with |0>_3.

    The conditional state is ``(a0 psi |1> + a1 b_param phi |0>)`` up to
    normalization. ``b_param`` is the real ratio of raw branch norms; phases
    sit in ``psi`` and ``phi``. A missing branch leaves its vector as None.
    """

    n: int
    psi: Optional[FockVector]
    phi: Optional[FockVector]
    b_param: float
    probability: float
    negativity: float
    parity_labels: tuple[Optional[str], Optional[str]]
    separable: bool
    photon: DelocalizedPhoton

    @property
    def defined(self) -> bool:
        return self.probability > 0.0

    def bipartite(self) -> BipartiteState:
        """Normalized mode-1 x qubit amplitudes, qubit index = photon count in mode 3."""
        a0, a1 = self.photon.a0, self.photon.a1
        if self.psi is None and self.phi is None:
            raise ValueError("zero-probability outcome has no state")
        size = (self.psi or self.phi).cutoff + 1
        amps = np.zeros((size, 2), dtype=np.complex128)
        if self.psi is not None and self.phi is not None:
            amps[:, 1] = a0 * self.psi.amplitudes
            amps[:, 0] = a1 * self.b_param * self.phi.amplitudes
        elif self.psi is not None:
            amps[:, 1] = self.psi.amplitudes
        else:
            amps[:, 0] = self.phi.amplitudes
        return BipartiteState(amps / np.linalg.norm(amps))

    def to_dict(self) -> dict:
        b_abs = abs(self.b_param)
        return {
            "n": self.n,
            "probability": self.probability,
            "negativity": self.negativity,
            "B_abs": b_abs if math.isfinite(b_abs) else None,
            "psi_parity": self.parity_labels[0],
            "phi_parity": self.parity_labels[1],
            "separable": self.separable,
        }


def _parity_label(v: FockVector) -> str:
    even, odd = parity_masses(v)
    if odd <= 1e-20 * (even + odd):
        return "even"
    if even <= 1e-20 * (even + odd):
        return "odd"
    return "mixed"


def conditional_branches(state: FockVector, params: BeamSplitterParams, n: int):
    """Raw (A_n, C_n) mode-1 branches for outcome ``n``."""
    cutoff = state.cutoff
    if not 0 <= n <= cutoff + 1:
        raise OutcomeError(f"outcome {n} outside 0..{cutoff + 1}")
    bs = beam_splitter_unitary(params, cutoff + 1)
    vac = bs.apply(tensor(state, basis_state(0, 1)))
    one = bs.apply(tensor(state, basis_state(1, 1)))
    a_branch, _ = project_mode2(vac, n)
    c_branch, _ = project_mode2(one, n)
    return a_branch, c_branch


def evolve_and_condition(
    input_state: Union[NormalizedState, FockVector],
    photon: DelocalizedPhoton,
    params: BeamSplitterParams,
    n: int,
    use_ppt: bool = False,
) -> ConditionalResult:
    """Direct evolution of the full three-mode state, then projection on ``n``.

    ``use_ppt`` computes the negativity by partial transposition instead of
    the branch-ratio formula; both agree for this state family.
    """
    vec = input_state.vector if isinstance(input_state, NormalizedState) else input_state
    a_branch, c_branch = conditional_branches(vec, params, n)
    wa = a_branch.norm() ** 2
    wc = c_branch.norm() ** 2
    a0, a1 = photon.a0, photon.a1
    probability = abs(a0) ** 2 * wa + abs(a1) ** 2 * wc

    scale = max(wa, wc)
    has_a = wa > BRANCH_FLOOR * scale and wa > 0.0
    has_c = wc > BRANCH_FLOOR * scale and wc > 0.0
    psi = a_branch.normalized() if has_a else None
    phi = c_branch.normalized() if has_c else None
    labels = (_parity_label(psi) if psi else None, _parity_label(phi) if phi else None)

    if has_a and has_c:
        b_param = math.sqrt(wc / wa)
        separable = False
    else:
        b_param = 0.0 if has_a else (math.inf if has_c else math.nan)
        separable = True

    result = ConditionalResult(n, psi, phi, b_param, probability, 0.0, labels, separable, photon)
    if separable:
        return result
    if use_ppt:
        neg = negativity_ppt(result.bipartite())
    else:
        neg = negativity_closed(a0, a1, b_param)
    return ConditionalResult(n, psi, phi, b_param, probability, neg, labels, False, photon)


def outcome_probabilities(state: FockVector, photon: DelocalizedPhoton,
                          params: BeamSplitterParams) -> np.ndarray:
    """P_n for every n = 0..cutoff+1 from one pass of the evolution."""
    cutoff = state.cutoff
    bs = beam_splitter_unitary(params, cutoff + 1)
    vac = bs.apply(tensor(state, basis_state(0, 1))).amplitudes
    one = bs.apply(tensor(state, basis_state(1, 1))).amplitudes
    wa = np.sum(np.abs(vac) ** 2, axis=0)
    wc = np.sum(np.abs(one) ** 2, axis=0)
    return abs(photon.a0) ** 2 * wa + abs(photon.a1) ** 2 * wc


def expected_parities(sign: int, n: int) -> tuple[str, str]:
    """Parities of (psi, phi) for input parity ``sign`` and outcome ``n``."""
    psi_even = (sign > 0) == (n % 2 == 0)
    return ("even", "odd") if psi_even else ("odd", "even")
