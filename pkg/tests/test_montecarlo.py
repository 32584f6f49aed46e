import math

import numpy as np
import pytest

from complex_ou.montecarlo import McEstimate, make_rng, spawn_rngs


def test_rng_reproducible():
    assert make_rng(5).standard_normal(3).tolist() == make_rng(5).standard_normal(3).tolist()
    g = np.random.default_rng(1)
    assert make_rng(g) is g


def test_spawned_streams_differ():
    a, b = spawn_rngs(3, 2)
    assert a.standard_normal() != b.standard_normal()
    a2, _ = spawn_rngs(3, 2)
    assert a2.standard_normal() == spawn_rngs(3, 2)[0].standard_normal()


def test_estimate_fields():
    est = McEstimate.from_samples([1 + 1j, 3 + 1j])
    assert est.value == 2 + 1j
    assert est.stderr_re == pytest.approx(1.0)
    assert est.stderr_im == 0.0
    assert est.n == 2
    with pytest.raises(ValueError):
        McEstimate.from_samples([1.0])


def test_zscores_zero_spread_component():
    est = McEstimate.from_samples([1.0, 3.0])
    assert est.zscores(2 + 1e-17j) == (0.0, 0.0)
    assert est.zscores(2 + 1j)[1] == math.inf
    assert est.zscores(4.0)[0] == pytest.approx(2.0)


def test_within():
    est = McEstimate(1 + 1j, 0.1, 0.1, 100)
    assert est.within(1.25 + 1.25j)
    assert not est.within(1.35 + 1j)
