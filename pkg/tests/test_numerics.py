import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liouville_fbm._utilities.numerics import loglog_fit, ordered_map, richardson, richardson_three_level


@settings(max_examples=50, deadline=None)
@given(slope=st.floats(-3.0, 3.0), scale=st.floats(0.1, 10.0))
def test_loglog_fit_recovers_power_laws(slope, scale):
    x = np.array([0.01, 0.02, 0.05, 0.1, 0.5])
    fitted, intercept = loglog_fit(x, scale * x**slope)
    assert fitted == pytest.approx(slope, abs=1e-9)
    assert intercept == pytest.approx(math.log(scale), abs=1e-9)


def test_loglog_fit_rejects_degenerate_data():
    with pytest.raises(ValueError):
        loglog_fit([1.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        loglog_fit([1.0, 2.0], [0.0, 1.0])


def test_richardson_removes_the_leading_term():
    exact, c, p = 2.0, 0.3, 0.6
    coarse, fine = exact + c * 0.1**p, exact + c * 0.05**p
    assert richardson(coarse, fine, p) == pytest.approx(exact, abs=1e-14)


def test_richardson_three_level_estimates_order():
    exact, c, p = 1.0, 0.5, 1.5
    values = tuple(exact + c * (0.1 / 2**k) ** p for k in range(3))
    value, order = richardson_three_level(values)
    assert order == pytest.approx(p, abs=1e-9)
    assert value == pytest.approx(exact, abs=1e-12)


def test_richardson_three_level_flags_non_monotone_levels():
    value, order = richardson_three_level((1.0, 2.0, 1.5))
    assert value == 1.5
    assert math.isnan(order)


def test_ordered_map_keeps_item_order():
    assert ordered_map(lambda x: x * x, range(10), workers=4) == [x * x for x in range(10)]
