import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.exceptions import NotPositiveDefiniteError
from src.linalg.spd import SpdMatrix, as_spd, spd_exp, spd_log, spd_power
from src.random_matrices import random_spd


def test_from_array_rejects_indefinite() -> None:
    with pytest.raises(NotPositiveDefiniteError, match="not positive definite"):
        SpdMatrix.from_array(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefiniteError):
        SpdMatrix.from_array(np.zeros((2, 2)))


def test_from_psd_accepts_singular_but_marks_it() -> None:
    p = SpdMatrix.from_psd(np.diag([1.0, 0.0]))
    assert not p.definite
    with pytest.raises(NotPositiveDefiniteError):
        p.log_eigenvalues()
    with pytest.raises(NotPositiveDefiniteError):
        spd_power(p, -1.0)
    np.testing.assert_allclose(spd_power(p, 0.5).matrix, np.diag([1.0, 0.0]))


def test_as_spd_passes_instances_through() -> None:
    p = SpdMatrix.from_array(np.eye(2))
    assert as_spd(p) is p


def test_power_closed_forms() -> None:
    np.testing.assert_allclose(spd_power(as_spd(4.0 * np.eye(2)), 0.5).matrix, 2.0 * np.eye(2))
    inverse_root = spd_power(as_spd(np.diag([4.0, 9.0])), -0.5).matrix
    np.testing.assert_allclose(inverse_root, np.diag([0.5, 1.0 / 3.0]))
    np.testing.assert_allclose(spd_power(as_spd(np.diag([4.0, 9.0])), 0.0).matrix, np.eye(2))


def test_log_closed_forms() -> None:
    np.testing.assert_allclose(spd_log(as_spd(np.eye(3))), np.zeros((3, 3)), atol=1e-15)
    np.testing.assert_allclose(spd_log(as_spd(np.diag([np.e, np.e**2]))), np.diag([1.0, 2.0]))


def test_eigenvalues_sorted_descending() -> None:
    p = random_spd(5, seed=2, condition_target=50.0)
    assert np.all(np.diff(p.eigenvalues) <= 0)


@seed(2)
@settings(deadline=None, max_examples=25)
@given(draw=st.integers(min_value=0, max_value=2**32 - 1))
def test_power_and_log_round_trips(draw: int) -> None:
    p = random_spd(4, seed=draw, condition_target=100.0)
    root = spd_power(p, 0.5)
    np.testing.assert_allclose(spd_power(root, 2.0).matrix, p.matrix, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(spd_exp(spd_log(p)).matrix, p.matrix, rtol=1e-9, atol=1e-9)
    product = spd_power(p, 0.3).matrix @ spd_power(p, 0.9).matrix
    np.testing.assert_allclose(product, spd_power(p, 1.2).matrix, rtol=1e-9, atol=1e-9)
