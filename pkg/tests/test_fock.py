import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cathybrid.errors import DimensionError, OutcomeError, TruncationError
from cathybrid.fock import (FockVector, TwoModeState, basis_state, check_tail, inner_product,
                            parity_masses, project_mode2, tail_mass, tensor)
from cathybrid.states import sdlps_vector

finite = st.floats(-10, 10, allow_nan=False)
amps = arrays(np.complex128, 9, elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))


def test_inner_product_basis():
    assert inner_product(basis_state(0, 5), basis_state(0, 5)) == 1
    assert inner_product(basis_state(0, 5), basis_state(1, 5)) == 0


def test_inner_product_orthogonal_parities():
    u = sdlps_vector(0, "+", 2.0)
    v = sdlps_vector(1, "-", 2.0)
    assert abs(inner_product(u, v)) < 1e-10


def test_inner_product_cutoff_mismatch():
    with pytest.raises(DimensionError):
        inner_product(basis_state(0, 3), basis_state(0, 4))


@given(amps, amps, st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_inner_product_sesquilinear(a, b, z):
    u, v = FockVector(a), FockVector(b)
    lhs = inner_product(FockVector(z * a), v)
    assert abs(lhs - np.conj(z) * inner_product(u, v)) <= 1e-9 * (1 + abs(lhs))
    assert abs(inner_product(u, v)) <= np.linalg.norm(a) * np.linalg.norm(b) * (1 + 1e-12) + 1e-12
    self_ip = inner_product(u, u)
    assert abs(self_ip.imag) <= 1e-12 * (1 + abs(self_ip)) and self_ip.real >= 0


def test_parity_masses_examples():
    assert parity_masses(basis_state(0, 4)) == (1.0, 0.0)
    even, odd = parity_masses(sdlps_vector(0, "-", 2.0))
    assert even <= 1e-24 and abs(odd - 1) < 1e-12
    even, odd = parity_masses(sdlps_vector(1, "+", 2.0))
    assert odd <= 1e-24 and abs(even - 1) < 1e-12


@given(amps, st.floats(0, 2 * np.pi))
def test_parity_masses_phase_invariant(a, phase):
    # squared amplitudes must stay out of the subnormal range
    assume(np.linalg.norm(a) > 1e-100)
    v = FockVector(a).normalized()
    w = FockVector(np.exp(1j * phase) * v.amplitudes)
    assert np.allclose(parity_masses(v), parity_masses(w), atol=1e-14)
    assert abs(sum(parity_masses(v)) - 1) < 1e-12


def test_vectors_are_read_only():
    v = basis_state(2, 4)
    with pytest.raises(ValueError):
        v.amplitudes[0] = 1.0


def test_tail_mass_and_check():
    v = FockVector(np.ones(20) / np.sqrt(20))
    assert tail_mass(v, 11) == pytest.approx(8 / 20)
    with pytest.raises(TruncationError):
        check_tail(v)
    check_tail(basis_state(3, 20))


def test_project_mode2_examples():
    s = tensor(basis_state(0, 3), basis_state(0, 3))
    branch, w = project_mode2(s, 0)
    assert w == 1 and branch.amplitudes[0] == 1
    branch, w = project_mode2(s, 1)
    assert w == 0 and not np.any(branch.amplitudes)
    with pytest.raises(OutcomeError):
        project_mode2(s, 4)


def test_project_mode2_after_splitter():
    # BS|1,0> = t|1,0> - r|0,1>; outcome 1 leaves -r|0>
    from cathybrid.entangler import BeamSplitterParams, beam_splitter_unitary
    bs = beam_splitter_unitary(BeamSplitterParams(0.6), 2)
    out = bs.apply(tensor(basis_state(1, 1), basis_state(0, 1)))
    branch, w = project_mode2(out, 1)
    assert abs(branch.amplitudes[0] + 0.8) < 1e-12
    assert abs(w - 0.64) < 1e-12


@settings(max_examples=40)
@given(arrays(np.complex128, (6, 5), elements=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)))
def test_projection_completeness(a):
    assume(np.linalg.norm(a) > 1e-100)
    s = TwoModeState(a / np.linalg.norm(a))
    total = sum(project_mode2(s, n)[1] for n in range(s.cutoffs[1] + 1))
    assert abs(total - 1) < 1e-10
