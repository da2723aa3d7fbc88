"""Independent oracles shared by the tests."""
import numpy as np
from scipy.linalg import expm

from cathybrid.states import sdlps_vector


def ladder(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def dense_beam_splitter(t, dim):
    """Full two-mode expm of theta (a1^dag a2 - a2^dag a1) on a dim x dim space."""
    a = ladder(dim)
    eye = np.eye(dim)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    theta = np.arccos(t)
    return expm(theta * (a1.T @ a2 - a2.T @ a1))


def expansion(vec, sign, amp, levels):
    """Least-squares coefficients of ``vec`` over Omega(p, sign, amp), p in levels."""
    basis = np.stack([sdlps_vector(p, sign, amp, len(vec) - 1).amplitudes for p in levels], axis=1)
    coef, *_ = np.linalg.lstsq(basis, vec, rcond=None)
    return coef
