import numpy as np
import pytest

from uncertainty_limits.corpus import (
    SIGNAL_KINDS,
    random_signal,
    random_stable_system,
    signal_corpus,
    system_corpus,
)
from uncertainty_limits.errors import InvalidParameterError


def test_signal_corpus_is_reproducible():
    a = signal_corpus(9, seed=5)
    b = signal_corpus(9, seed=5)
    for x, y in zip(a, b):
        assert x.t0 == y.t0 and x.dt == y.dt
        np.testing.assert_array_equal(x.values, y.values)
    c = signal_corpus(9, seed=6)
    assert any(len(x) != len(y) or not np.array_equal(x.values, y.values) for x, y in zip(a, c))


def test_signal_corpus_cycles_kinds_and_decays():
    sigs = signal_corpus(2 * len(SIGNAL_KINDS), seed=3, smooth=True)
    assert len(sigs) == 6
    for h in sigs:
        assert h.energy_l2 > 0
        assert h.tails_decayed()


def test_unknown_kind():
    with pytest.raises(InvalidParameterError):
        random_signal(np.random.default_rng(0), "chirp")


def test_system_corpus_properties():
    systems = system_corpus(40, seed=2)
    assert systems[0].num.tolist() == system_corpus(1, seed=2)[0].num.tolist()
    for s in systems:
        assert s.is_stable
        assert 2 <= s.order <= 6
        assert s.relative_degree >= 2
        assert s.dc_gain == pytest.approx(1.0, rel=1e-12)
        assert np.all(np.abs(s.poles) <= 5.0 + 1e-9)
        assert np.all(np.abs(s.poles) >= 0.2 - 1e-9)


def test_system_options():
    rng = np.random.default_rng(1)
    s = random_stable_system(rng, min_order=1, max_order=1, min_relative_degree=1)
    assert s.order == 1
    with pytest.raises(InvalidParameterError):
        random_stable_system(rng, min_order=3, max_order=2)
