import math
import random
import warnings

import pytest
from scipy.integrate import IntegrationWarning, quad

from levmem.integrals import (
    damped_cos2,
    damped_sin2,
    damped_sincos,
    decay_integral,
    g_integrals,
)


def _quad(fn, t):
    with warnings.catch_warnings():
        # asking for 1e-13 sometimes trips the roundoff detector; the result is still far inside 1e-8
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(fn, 0.0, t, epsabs=0.0, epsrel=1e-13, limit=2000)
    return val


def _draws(n, seed):
    rng = random.Random(seed)
    for _ in range(n):
        yield 10 ** rng.uniform(-2, 6), 10 ** rng.uniform(-2, 6), 10 ** rng.uniform(-7, -2)


@pytest.mark.parametrize("G,decay,t", list(_draws(100, 7)))
def test_g_integrals_match_quadrature(G, decay, t):
    # defining integrals in the original variable s, no shared code path
    G11, G22 = g_integrals(G, decay, t, scaled=True)
    ref11 = _quad(lambda s: math.exp(2 * decay * (s - t)) * math.sin(G * (t - s)) ** 2, t)
    ref22 = _quad(lambda s: math.exp(2 * decay * (s - t)) * math.cos(G * (t - s)) ** 2, t)
    assert G11 == pytest.approx(ref11, rel=1e-8, abs=1e-300)
    assert G22 == pytest.approx(ref22, rel=1e-8)


@pytest.mark.parametrize("k,G,t", [(0.0, 3.0, 2.0), (1e-9, 1e5, 1e-3), (50.0, 0.0, 0.1),
                                   (1e6, 1.0, 1e-2), (2.0, 1e-8, 1.0), (0.3, 7.9e4, 1.9e-5)])
def test_window_integrals_edge_regimes(k, G, t):
    assert damped_sin2(k, G, t) == pytest.approx(
        _quad(lambda u: math.exp(-k * u) * math.sin(G * u) ** 2, t), rel=1e-9, abs=1e-300)
    assert damped_cos2(k, G, t) == pytest.approx(
        _quad(lambda u: math.exp(-k * u) * math.cos(G * u) ** 2, t), rel=1e-9)
    ref = _quad(lambda u: math.exp(-k * u) * math.sin(G * u) * math.cos(G * u), t)
    assert damped_sincos(k, G, t) == pytest.approx(ref, rel=1e-8, abs=1e-15 * t)


def test_zero_decay_limit_is_exact():
    G, t = 2.5, 1.3
    s, c = g_integrals(G, 0.0, t)
    assert s == pytest.approx(t / 2 - math.sin(2 * G * t) / (4 * G), rel=1e-13)
    assert c == pytest.approx(t / 2 + math.sin(2 * G * t) / (4 * G), rel=1e-13)


def test_zero_coupling_reduces_to_pure_decay():
    decay, t = 40.0, 0.02
    G11, G22 = g_integrals(0.0, decay, t)
    assert G11 == 0.0
    assert G22 == pytest.approx(math.expm1(2 * decay * t) / (2 * decay), rel=1e-13)


def test_empty_window():
    assert g_integrals(1e4, 3.0, 0.0) == (0.0, 0.0)
    assert decay_integral(5.0, 0.0) == 0.0


def test_sin2_plus_cos2_is_decay_integral():
    rng = random.Random(3)
    for _ in range(200):
        k, G, t = 10 ** rng.uniform(-3, 5), 10 ** rng.uniform(-3, 5), 10 ** rng.uniform(-6, 0)
        total = damped_sin2(k, G, t) + damped_cos2(k, G, t)
        assert total == pytest.approx(decay_integral(k, t), rel=1e-12)


def test_scaled_form_never_overflows():
    s, c = g_integrals(1e3, 1e4, 1.0, scaled=True)
    assert math.isfinite(s) and math.isfinite(c)
    ref = _quad(lambda s: math.exp(2e4 * (s - 1.0)) * math.cos(1e3 * (1.0 - s)) ** 2, 1.0)
    assert c == pytest.approx(ref, rel=1e-6)


def test_negative_duration_rejected():
    with pytest.raises(ValueError):
        g_integrals(1.0, 1.0, -1.0)
