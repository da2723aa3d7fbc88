import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cathybrid.displacement import (build_table, coeff, displaced_number_state, displacement_matrix_expm,
                                    orthonormality_defect, prefactor, safe_rows)
from cathybrid.errors import RangeError, TruncationError
from cathybrid.nonclassicality import photon_moments


def mp_coeff(n, m, alpha):
    mpmath.mp.dps = 60
    a = mpmath.mpf(alpha)
    if m >= n:
        return mpmath.sqrt(mpmath.factorial(n) / mpmath.factorial(m)) * a ** (m - n) * mpmath.laguerre(n, m - n, a * a)
    return mpmath.sqrt(mpmath.factorial(m) / mpmath.factorial(n)) * (-a) ** (n - m) * mpmath.laguerre(m, n - m, a * a)


@pytest.mark.parametrize("alpha", [0.0, 0.3, -1.7, 4.0])
def test_coeff_vacuum_diagonal(alpha):
    assert coeff(0, 0, alpha) == 1.0


def test_coeff_zero_displacement_is_identity():
    for n in range(6):
        for m in range(6):
            assert coeff(n, m, 0.0) == (1.0 if n == m else 0.0)


def test_coeff_against_expm():
    oracle = displacement_matrix_expm(1.5, 10)
    # <3|D(1.5)|0> exp(1.5^2/2)
    expected = oracle[3, 0] / prefactor(1.5)
    assert coeff(0, 3, 1.5) == pytest.approx(expected, abs=1e-11)
    assert coeff(0, 3, 1.5) == pytest.approx(1.5 ** 3 / np.sqrt(6), abs=1e-12)
    assert coeff(0, 3, 1.5) == pytest.approx(1.3778379803155376, abs=1e-12)


def test_coeff_high_precision_reference():
    table = build_table(8.0, 128)
    for n in range(0, 129, 16):
        for m in range(0, 129, 13):
            exact = float(mp_coeff(n, m, 8.0) * mpmath.exp(-32))
            assert abs(table.coeffs[n, m] * prefactor(8.0) - exact) < 1e-12


def test_table_matches_coeff():
    table = build_table(1.3, 30)
    for n, m in [(0, 0), (3, 7), (7, 3), (12, 12), (30, 2)]:
        assert table.coeffs[n, m] == pytest.approx(coeff(n, m, 1.3), abs=1e-11)


def test_table_identity_and_expm_entry():
    assert np.array_equal(build_table(0.0, 8).coeffs, np.eye(9))
    oracle = displacement_matrix_expm(1.0, 20)
    assert build_table(1.0, 20).matrix()[2, 2] == pytest.approx(oracle[2, 2], abs=1e-11)
    assert np.max(np.abs(build_table(1.0, 20).matrix()[:12, :12] - oracle[:12, :12])) < 1e-11


@given(st.integers(0, 40), st.integers(0, 40), st.floats(0, 4))
def test_sign_law(n, m, alpha):
    assert coeff(n, m, -alpha) == pytest.approx((-1) ** (m - n) * coeff(n, m, alpha), abs=1e-12, rel=1e-12)


def test_row_orthonormality_and_unitarity():
    table = build_table(2.0, 64)
    rows = safe_rows(table)
    assert len(rows) >= 10
    assert orthonormality_defect(table, rows) <= 1e-10
    d = table.matrix()[:, rows]
    assert np.max(np.abs(d.T @ d - np.eye(len(rows)))) <= 1e-10


def test_displaced_state():
    vac = displaced_number_state(0, 0.0, 10)
    assert vac.amplitudes[0] == 1 and np.count_nonzero(vac.amplitudes) == 1
    coh = displaced_number_state(0, 2.0, 64)
    assert abs(coh.norm() - 1) < 1e-10
    assert photon_moments(coh)[0] == pytest.approx(4.0, abs=1e-8)
    plus = displaced_number_state(1, 1.2, 64).amplitudes
    minus = displaced_number_state(1, -1.2, 64).amplitudes
    m = np.arange(65)
    assert np.allclose(minus, (-1.0) ** (m - 1) * plus, atol=1e-14)


def test_displaced_state_truncation():
    with pytest.raises(TruncationError):
        displaced_number_state(0, 4.0, 20)


def test_range_and_phase_errors():
    with pytest.raises(RangeError):
        coeff(0, 0, 9.0)
    with pytest.raises(RangeError):
        build_table(1.0, 129)
    with pytest.raises(ValueError):
        build_table(1 + 1j, 10)
    assert build_table(1 + 0j, 4).alpha == 1.0
