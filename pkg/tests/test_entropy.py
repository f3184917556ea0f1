import numpy as np
import pytest
from hypothesis import given, strategies as st

from covrad.entropy import entropy_hq, entropy_hq_inverse
from covrad.errors import InvalidInputError


def test_binary_maximum():
    assert entropy_hq(2, 0.5) == pytest.approx(1.0, abs=1e-15)


def test_endpoints():
    assert entropy_hq(2, 0.0) == 0.0
    assert entropy_hq(3, 1.0) == pytest.approx(np.log(2) / np.log(3))
    assert entropy_hq_inverse(2, 0.0) == 0.0
    assert entropy_hq_inverse(4, 1.0) == pytest.approx(0.75)


def test_inverse_of_gap():
    v = entropy_hq_inverse(2, 0.306)
    assert entropy_hq(2, v) == pytest.approx(0.306, abs=1e-9)
    assert 0 < v < 0.5


@pytest.mark.parametrize("q", [2, 3, 4, 7])
def test_round_trip_grid(q):
    for y in np.linspace(0, 1, 100):
        assert entropy_hq(q, entropy_hq_inverse(q, y)) == pytest.approx(y, abs=1e-9)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_concave_on_grid(q):
    x = np.arange(0, 1 + 1e-12, 1e-3)
    h = np.array([entropy_hq(q, v) for v in x])
    assert (h[:-2] + h[2:] - 2 * h[1:-1] <= 1e-12).all()


@given(st.integers(2, 9), st.floats(0, 1))
def test_inverse_in_range(q, y):
    x = entropy_hq_inverse(q, y)
    assert 0 <= x <= 1 - 1 / q + 1e-12


def test_rejects_out_of_range():
    with pytest.raises(InvalidInputError):
        entropy_hq(2, 1.5)
    with pytest.raises(InvalidInputError):
        entropy_hq_inverse(2, -0.1)
    with pytest.raises(InvalidInputError):
        entropy_hq(1, 0.2)
