import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from lazyrates.errors import ParameterError
from lazyrates.stats import classify_regime, clopper_pearson, clopper_pearson_upper, tail_summary


def _upper_oracle(k, n, alpha=0.005):
    # largest p with P(X <= k | p) >= alpha, by bisection on the binomial cdf
    if k == n:
        return 1.0
    lo, hi = k / n, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if stats.binom.cdf(k, n, mid) >= alpha:
            lo = mid
        else:
            hi = mid
    return lo


def test_known_values():
    # k = 0: upper = 1 - (alpha/2)^(1/n)
    assert clopper_pearson_upper(0, 1000) == pytest.approx(1 - 0.005 ** (1 / 1000), rel=1e-10)
    assert clopper_pearson_upper(0, 1000) == pytest.approx(0.0052843060394974425, rel=1e-12)
    assert clopper_pearson(5, 5) == (pytest.approx(0.005 ** (1 / 5)), 1.0)
    assert clopper_pearson(0, 3)[0] == 0.0


@pytest.mark.parametrize("k,n", [(0, 10), (3, 10), (9, 10), (17, 2000), (1, 1)])
def test_matches_bisection_oracle(k, n):
    assert clopper_pearson_upper(k, n) == pytest.approx(_upper_oracle(k, n), abs=1e-9)


def test_errors():
    with pytest.raises(ParameterError):
        clopper_pearson(3, 2)
    with pytest.raises(ParameterError):
        clopper_pearson(0, 0)
    with pytest.raises(ParameterError):
        clopper_pearson(1, 2, level=1.0)


def test_tail_summary():
    k, tail, up = tail_summary(np.array([0.1, 0.5, 0.7, 0.5]), 0.5)
    assert k == 3 and tail == 0.75 and tail <= up <= 1


def test_regime_labels():
    assert classify_regime(1.2, 0.5, 2).startswith("vacuous")
    assert classify_regime(0.1, 2.1, 2) == "trivially satisfied"
    assert classify_regime(0.1, 0.5, 2) == "non-vacuous"


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.data())
def test_interval_contains_point_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = clopper_pearson(k, n)
    assert 0 <= lo <= k / n <= hi <= 1
    if k < n:
        assert clopper_pearson_upper(k + 1, n) >= hi
