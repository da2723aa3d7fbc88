"""Even/odd superpositions of displaced number states and their relatives.

``Omega(l, s, beta) = N_s^(l)(beta) (|l, -beta> + s (-1)^l |l, beta>)`` with
``s = +1`` (even Fock content) or ``s = -1`` (odd Fock content).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .displacement import MAX_ALPHA, build_table, coeff, prefactor, real_amplitude
from .errors import DegenerateStateError, ConfigError
from .fock import DEFAULT_CUTOFF, TAIL_TOLERANCE, FockVector, check_tail


class Kind(str, Enum):
    SDLPS = "sdlps"
    SUPERPOSITION = "superposition"
    TRUNCATED = "truncated"


def parse_sign(sign) -> int:
    if sign in ("+", 1, +1.0, "even"):
        return 1
    if sign in ("-", -1, -1.0, "odd"):
        return -1
    raise ConfigError(f"sign must be '+' or '-', got {sign!r}")


def sign_symbol(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _parse_coefficients(values) -> tuple[complex, ...]:
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ConfigError(f"complex coefficient must be [re, im], got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        elif isinstance(v, dict):
            out.append(complex(float(v.get("re", 0.0)), float(v.get("im", 0.0))))
        else:
            out.append(complex(v))
    return tuple(out)


def _dump_coefficient(c: complex):
    return c.real if c.imag == 0 else [c.real, c.imag]


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of an input CV state.

    ``truncated`` specs take either explicit ``d`` coefficients or
    ``(l, beta, terms)``, in which case ``d`` is filled from c_{l,2m}(beta)
    (even) or c_{l,2m+1}(beta) (odd) for m = 0..terms-1.
    """

    kind: Kind
    sign: int
    beta: Optional[float] = None
    l: int = 0
    b: tuple = field(default=())
    d: tuple = field(default=())
    terms: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "sign", parse_sign(self.sign))
        if self.beta is not None:
            object.__setattr__(self, "beta", real_amplitude(self.beta))
        object.__setattr__(self, "b", _parse_coefficients(self.b))
        object.__setattr__(self, "d", _parse_coefficients(self.d))
        if self.l < 0:
            raise ConfigError("l must be nonnegative")
        if self.kind is Kind.SDLPS:
            self._need_beta()
            if self.sign < 0 and self.beta == 0.0:
                raise DegenerateStateError("odd state at beta = 0 has divergent normalization")
        elif self.kind is Kind.SUPERPOSITION:
            self._need_beta()
            if not self.b or all(c == 0 for c in self.b):
                raise ConfigError("superposition needs a nonempty, not all-zero b list")
        else:
            if not self.d:
                if self.terms is None or self.beta is None:
                    raise ConfigError("truncated state needs d, or l/beta/terms")
                if self.terms < 1:
                    raise ConfigError("terms must be positive")
            elif all(c == 0 for c in self.d):
                raise ConfigError("truncated coefficients are all zero")

    def _need_beta(self):
        if self.beta is None:
            raise ConfigError(f"{self.kind.value} state needs beta")
        if self.beta < 0:
            raise ConfigError("beta must be nonnegative")

    @classmethod
    def sdlps(cls, l: int, sign, beta: float) -> "StateSpec":
        return cls(Kind.SDLPS, sign, beta=beta, l=l)

    @classmethod
    def superposition(cls, b: Sequence, sign, beta: float) -> "StateSpec":
        return cls(Kind.SUPERPOSITION, sign, beta=beta, b=tuple(b))

    @classmethod
    def truncated(cls, d: Sequence, sign) -> "StateSpec":
        return cls(Kind.TRUNCATED, sign, d=tuple(d))

    @classmethod
    def truncated_sdlps(cls, l: int, sign, beta: float, terms: int) -> "StateSpec":
        return cls(Kind.TRUNCATED, sign, beta=beta, l=l, terms=terms)

    def with_beta(self, beta: float) -> "StateSpec":
        if self.kind is Kind.TRUNCATED and self.d and self.terms is None:
            return self
        return StateSpec(self.kind, self.sign, beta=beta, l=self.l, b=self.b,
                         d=() if self.terms is not None else self.d, terms=self.terms)

    def truncated_coefficients(self) -> tuple[complex, ...]:
        if self.d:
            return self.d
        offset = 0 if self.sign > 0 else 1
        return tuple(complex(coeff(self.l, 2 * m + offset, self.beta)) for m in range(self.terms))

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "sign": sign_symbol(self.sign)}
        if self.beta is not None:
            out["beta"] = self.beta
        if self.kind is Kind.SDLPS or self.terms is not None:
            out["l"] = self.l
        if self.b:
            out["b"] = [_dump_coefficient(c) for c in self.b]
        if self.d:
            out["d"] = [_dump_coefficient(c) for c in self.d]
        if self.terms is not None:
            out["terms"] = self.terms
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StateSpec":
        unknown = set(data) - {"kind", "sign", "beta", "l", "b", "d", "terms"}
        if unknown:
            raise ConfigError(f"unknown state fields: {sorted(unknown)}")
        try:
            return cls(
                Kind(data["kind"]),
                data["sign"],
                beta=data.get("beta"),
                l=int(data.get("l", 0)),
                b=tuple(data.get("b", ())),
                d=tuple(data.get("d", ())),
                terms=data.get("terms"),
            )
        except KeyError as exc:
            raise ConfigError(f"state spec missing field {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StateSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class NormalizedState:
    spec: StateSpec
    vector: FockVector
    norm_factor: float

    @property
    def sign(self) -> int:
        return self.spec.sign


def _cross_overlap(k: int, m: int, alpha: float) -> float:
    """F(alpha) c_mk(alpha), i.e. <k|D(alpha)|m>, also past the table range."""
    if abs(alpha) <= MAX_ALPHA:
        return prefactor(alpha) * coeff(m, k, alpha)
    lo, hi = min(k, m), max(k, m)
    x = alpha if k >= m else -alpha
    lag = eval_genlaguerre(lo, hi - lo, alpha * alpha)
    if lag == 0:
        return 0.0
    logmag = (0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + (hi - lo) * np.log(abs(x))
              - 0.5 * alpha * alpha + np.log(abs(lag)))
    return float(np.sign(x) ** (hi - lo) * np.sign(lag) * np.exp(logmag))


def sdlps_norm_factor(l: int, sign, beta) -> float:
    """N_s^(l)(beta) = (2 (1 + s (-1)^l F(2 beta) c_ll(2 beta)))^(-1/2)."""
    sign = parse_sign(sign)
    beta = real_amplitude(beta)
    overlap = _cross_overlap(l, l, 2 * beta)
    radicand = 2.0 * (1.0 + sign * (-1) ** l * overlap)
    if radicand <= 1e-300:
        raise DegenerateStateError(
            f"normalization of Omega(l={l}, {sign_symbol(sign)}) diverges at beta={beta}"
        )
    return radicand ** -0.5


def sdlps_vector(l: int, sign, beta, cutoff: int = DEFAULT_CUTOFF,
                 tol: float = TAIL_TOLERANCE) -> FockVector:
    """Fock expansion of a single even/odd displaced-l-photon superposition."""
    sign = parse_sign(sign)
    beta = real_amplitude(beta)
    norm = sdlps_norm_factor(l, sign, beta)
    if l > cutoff:
        raise ValueError(f"l = {l} exceeds cutoff {cutoff}")
    row = build_table(beta, cutoff).coeffs[l]
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    start = 0 if sign > 0 else 1
    amps[start::2] = (-1) ** (l + (0 if sign > 0 else 1)) * 2.0 * norm * prefactor(beta) * row[start::2]
    return check_tail(FockVector(amps), tol)


def overlap_closed_form(k: int, m: int, sign, beta, sign_m=None) -> float:
    """<Omega(k, s)|Omega(m, s)>; zero when the two parities differ."""
    sign = parse_sign(sign)
    if sign_m is not None and parse_sign(sign_m) != sign:
        return 0.0
    beta = real_amplitude(beta)
    nk = sdlps_norm_factor(k, sign, beta)
    nm = sdlps_norm_factor(m, sign, beta)
    delta = 1.0 if k == m else 0.0
    return 2.0 * nk * nm * (delta + sign * (-1) ** m * _cross_overlap(k, m, 2 * beta))


def gram_matrix(levels: Sequence[int], sign, beta) -> np.ndarray:
    levels = list(levels)
    return np.array([[overlap_closed_form(k, m, sign, beta) for m in levels] for k in levels])


def superposition_norm(b: Sequence[complex], sign, beta) -> float:
    """1 / ||sum_k b_k Omega(k, s)|| using the closed-form Gram matrix."""
    b = np.asarray(b, dtype=np.complex128)
    gram = gram_matrix(range(b.size), sign, beta)
    sq = float(np.real(np.conj(b) @ gram @ b))
    if sq <= 1e-300:
        raise DegenerateStateError("superposition has zero norm")
    return sq ** -0.5


def build(spec: StateSpec, cutoff: int = DEFAULT_CUTOFF, tol: float = TAIL_TOLERANCE) -> NormalizedState:
    if spec.kind is Kind.SDLPS:
        vec = sdlps_vector(spec.l, spec.sign, spec.beta, cutoff, tol)
        return NormalizedState(spec, vec, sdlps_norm_factor(spec.l, spec.sign, spec.beta))

    if spec.kind is Kind.SUPERPOSITION:
        norm = superposition_norm(spec.b, spec.sign, spec.beta)
        amps = np.zeros(cutoff + 1, dtype=np.complex128)
        for k, bk in enumerate(spec.b):
            if bk != 0:
                amps += bk * sdlps_vector(k, spec.sign, spec.beta, cutoff, tol).amplitudes
        return NormalizedState(spec, check_tail(FockVector(norm * amps), tol), norm)

    d = np.asarray(spec.truncated_coefficients(), dtype=np.complex128)
    offset = 0 if spec.sign > 0 else 1
    top = 2 * (d.size - 1) + offset
    if top > cutoff:
        raise ValueError(f"truncated state reaches level {top} beyond cutoff {cutoff}")
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    amps[offset: top + 1: 2] = d
    norm = 1.0 / float(np.linalg.norm(d))
    return NormalizedState(spec, FockVector(norm * amps), norm)
