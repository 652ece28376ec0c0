import math

import numpy as np
import pytest

from lazyrates.errors import ConfigError, StructuralError
from lazyrates.infotheory import (
    DecouplingConfig,
    choi_cond_hmin,
    completely_depolarizing_channel,
    decoupling_experiment,
    decoupling_threshold,
    identity_channel,
    partial_trace_channel,
)
from lazyrates.linop import BipartiteSpace, projector
from lazyrates.sampler import SeededRng, haar_pure_state

from conftest import random_state


def _ket(d):
    v = np.zeros(d, dtype=complex)
    v[0] = 1
    return v


def test_identity_channel_statistic_is_constant():
    d = 4
    res = decoupling_experiment(DecouplingConfig(identity_channel(d), _ket(d), 50, 0.1, seed=1))
    # ||U sigma U^dag - I/d||_1 = 2 - 2/d for every pure sigma
    assert res.mean_statistic == pytest.approx(2 - 2 / d, abs=1e-12)
    assert res.max_statistic == pytest.approx(2 - 2 / d, abs=1e-12)
    assert res.extra["choi_cond_hmin"] == pytest.approx(-2, abs=1e-6)
    assert res.config["path"] == "dense"


def test_huge_r_gives_zero_tail():
    ch = partial_trace_channel(BipartiteSpace(2, 4))
    res = decoupling_experiment(DecouplingConfig(ch, _ket(8), 100, 2.0, seed=2))
    assert res.n_exceed == 0 and res.empirical_tail == 0
    assert res.regime != "non-vacuous"


def test_depolarizing_channel_has_zero_statistic(rng):
    ch = completely_depolarizing_channel(3, 2)
    res = decoupling_experiment(DecouplingConfig(ch, random_state(3, rng), 20, 0.5, seed=3))
    assert res.max_statistic <= 1e-12


def test_threshold_formula():
    assert decoupling_threshold(3.0, 0.25) == pytest.approx(2 ** -1.5 + 0.25)
    ch = partial_trace_channel(BipartiteSpace(2, 8))
    assert choi_cond_hmin(ch) == pytest.approx(2, abs=1e-6)


def test_fast_and_dense_paths_agree_in_distribution():
    sp = BipartiteSpace(2, 8)
    ch = partial_trace_channel(sp)
    fast = decoupling_experiment(DecouplingConfig(ch, _ket(16), 400, 0.3, seed=4, choi_hmin=2.0))
    # a density-matrix input of rank one is still pure; a slightly mixed one forces the dense path
    mixed = 0.999999 * projector(_ket(16)) + 0.000001 * np.eye(16) / 16
    dense = decoupling_experiment(DecouplingConfig(ch, mixed, 400, 0.3, seed=5, choi_hmin=2.0))
    assert fast.config["path"] == "fast" and dense.config["path"] == "dense"
    assert fast.mean_statistic == pytest.approx(dense.mean_statistic, abs=0.03)
    assert fast.cross_checks >= 1 and fast.cross_check_max_error <= 1e-8


def test_theoretical_bound_and_regime():
    ch = partial_trace_channel(BipartiteSpace(4, 16))
    r = 0.5
    res = decoupling_experiment(DecouplingConfig(ch, _ket(64), 200, r, seed=6, choi_hmin=2.0))
    assert res.theoretical_delta == pytest.approx(2 * math.exp(-64 * r * r / 16))
    assert res.threshold_used == pytest.approx(0.5 + r)
    assert res.regime == "non-vacuous"
    assert res.bound_satisfied
    assert 0 <= res.empirical_tail <= res.ci99_upper <= 1


def test_determinism():
    ch = partial_trace_channel(BipartiteSpace(2, 4))
    a = decoupling_experiment(DecouplingConfig(ch, _ket(8), 30, 0.5, seed=7, choi_hmin=1.0))
    b = decoupling_experiment(DecouplingConfig(ch, _ket(8), 30, 0.5, seed=7, choi_hmin=1.0))
    assert a.mean_statistic == b.mean_statistic and a.n_exceed == b.n_exceed


def test_config_errors(rng):
    ch = partial_trace_channel(BipartiteSpace(2, 4))
    with pytest.raises(ConfigError):
        DecouplingConfig(ch, _ket(8), 0, 0.5, seed=1)
    with pytest.raises(ConfigError):
        DecouplingConfig(ch, _ket(8), 10, 0.0, seed=1)
    with pytest.raises(ConfigError):
        DecouplingConfig(ch, _ket(4), 10, 0.5, seed=1)
    with pytest.raises(StructuralError):
        DecouplingConfig("tr_E", _ket(8), 10, 0.5, seed=1)
    big = partial_trace_channel(BipartiteSpace(4, 32))
    with pytest.raises(ConfigError):
        decoupling_experiment(DecouplingConfig(big, np.eye(128) / 128, 10, 0.5, seed=1))
