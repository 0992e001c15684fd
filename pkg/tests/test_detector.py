import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ris_ssk.detector import DetectionInput, complexity, ml_detect, ml_detect_batch


def brute_force(y, scale, gains):
    best, best_metric = None, math.inf
    for n, g in enumerate(gains):
        r = complex(y) - scale * complex(g)
        metric = r.real * r.real + r.imag * r.imag
        if metric < best_metric:
            best, best_metric = n, metric
    return best


def test_exact_hit():
    gains = np.array([3.0, 7.5, 1.2, 5.0])
    for k in range(4):
        y = 2.0 * 0.9 * gains[k]
        assert ml_detect(DetectionInput(y, 0.9, 2.0, gains)) == k


def test_tie_breaks_to_smallest_index():
    assert ml_detect(DetectionInput(0.3 + 0.1j, 1.0, 1.0, np.full(4, 2.0))) == 0
    assert ml_detect_batch(np.array([0.3]), 1.0, np.full((1, 4), 2.0))[0] == 0


def test_random_instances_match_brute_force(rng):
    for _ in range(500):
        gains = rng.uniform(0, 10, 4)
        y = complex(rng.normal(0, 5), rng.normal(0, 5))
        sqrt_ps, zeta = rng.uniform(0.1, 3), rng.uniform(0.2, 1)
        assert ml_detect(DetectionInput(y, zeta, sqrt_ps, gains)) == brute_force(y, sqrt_ps * zeta, gains)


def test_batch_matches_scalar(rng):
    gains = rng.normal(size=(300, 4)) + 1j * rng.normal(size=(300, 4))
    y = rng.normal(size=300) + 1j * rng.normal(size=300)
    batch = ml_detect_batch(y, 0.7, gains)
    assert [brute_force(y[i], 0.7, gains[i]) for i in range(300)] == batch.tolist()


@given(st.floats(0.01, 100.0), st.integers(0, 10_000))
def test_scale_invariance(c, seed):
    r = np.random.default_rng(seed)
    gains = r.uniform(0, 5, 4)
    y = complex(r.normal(0, 3), r.normal(0, 3))
    a = ml_detect(DetectionInput(y, 0.8, 1.5, gains))
    b = ml_detect(DetectionInput(c * y, 0.8, c * 1.5, gains))
    assert a == b


def test_noiseless_exhaustive_small_grid():
    # zeta = 1, no noise, RIS aligned to the transmitted antenna; every
    # candidate hypothesis evaluated through the applied configuration
    levels = [0.5, 1.0]
    phases = [0.0, math.pi / 2, math.pi]
    for L in (1, 2):
        for a0 in itertools.product(levels, repeat=L):
            for a1 in itertools.product(levels, repeat=L):
                for p1 in itertools.product(phases, repeat=L):
                    g = np.array([a0, np.array(a1) * np.exp(-1j * np.array(p1))]).T
                    h = np.ones(L)
                    phasor = np.conj(g[:, 0]) / np.abs(g[:, 0])
                    y = np.sum(h * phasor * g[:, 0])
                    cand = np.array([np.sum(h * phasor * g[:, n]) for n in range(2)])
                    got = ml_detect(DetectionInput(y, 1.0, 1.0, cand))
                    assert got == brute_force(y, 1.0, cand)
                    if not np.isclose(cand[1], cand[0]):
                        assert got == 0


def test_input_validation():
    with pytest.raises(ValueError):
        DetectionInput(1.0, 1.0, 1.0, np.array([]))
    with pytest.raises(ValueError):
        DetectionInput(1.0, 1.0, 1.0, np.array([1.0, -0.1]))
    with pytest.raises(ValueError):
        DetectionInput(1.0, 1.0, 0.0, np.array([1.0, 2.0]))


@pytest.mark.parametrize("L, n_t, mults, adds", [(144, 2, 296, 290), (1, 2, 10, 4), (256, 4, 1040, 1028)])
def test_complexity(L, n_t, mults, adds):
    r = complexity(L, n_t)
    assert (r.real_multiplications, r.real_additions) == (mults, adds)


def test_complexity_domain():
    with pytest.raises(ValueError):
        complexity(0, 2)
    with pytest.raises(ValueError):
        complexity(4, 1)
