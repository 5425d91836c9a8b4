"""Damped trigonometric window integrals.

Every noise term in the transfer formulas reduces to one of

    S = int_0^t exp(-k u) sin^2(G u) du
    C = int_0^t exp(-k u) cos^2(G u) du
    M = int_0^t exp(-k u) sin(G u) cos(G u) du

written here in the "time since injection" variable u, which keeps the
exponential bounded.  The closed forms cancel catastrophically when the
window holds little rotation (G t small, or G small against k), so those
regimes are summed as a power series in G u instead.
"""

import math

from scipy.special import gammainc, gammaln

_SERIES_SWITCH = 0.5
_MAX_TERMS = 200


def decay_integral(k, t):
    """int_0^t exp(-k u) du, exact in the k -> 0 limit."""
    if t <= 0.0:
        return 0.0
    if k == 0.0:
        return t
    return -math.expm1(-k * t) / k


def _log_moment(n, k, t):
    # log of int_0^t exp(-k u) u^n du
    x = k * t
    if x < 1.0:
        # int_0^1 exp(-x v) v^n dv as an alternating series in x
        total = 0.0
        term = 1.0
        j = 0
        while True:
            contrib = term / (n + 1 + j)
            total += contrib
            if abs(contrib) < 1e-18 * abs(total) or j > 60:
                break
            j += 1
            term *= -x / j
        return (n + 1) * math.log(t) + math.log(total)
    return gammaln(n + 1) - (n + 1) * math.log(k) + math.log(gammainc(n + 1, x))


def _series(k, G, t, kind):
    logG = math.log(G)
    total = 0.0
    for j in range(_MAX_TERMS):
        if kind == "sin2":
            # sin^2 y = sum_{m>=1} (-1)^(m+1) 2^(2m-1) y^(2m) / (2m)!
            m = j + 1
            power = 2 * m
            log_c = (2 * m - 1) * math.log(2.0) - gammaln(power + 1)
            sign = 1.0 if m % 2 == 1 else -1.0
        else:
            # sin y cos y = sum_{m>=0} (-1)^m 2^(2m) y^(2m+1) / (2m+1)!
            m = j
            power = 2 * m + 1
            log_c = 2 * m * math.log(2.0) - gammaln(power + 1)
            sign = 1.0 if m % 2 == 0 else -1.0
        term = math.exp(log_c + power * logG + _log_moment(power, k, t))
        total += sign * term
        if term < 1e-17 * abs(total):
            return total
    raise ArithmeticError("damped trig series did not converge")


def _closed(k, G, t):
    # returns (E, K, L) with K + iL = int_0^t exp(-(k - 2iG) u) du
    E = decay_integral(k, t)
    ekt = math.exp(-k * t)
    re_w = -math.expm1(-k * t) + 2.0 * ekt * math.sin(G * t) ** 2
    im_w = -ekt * math.sin(2.0 * G * t)
    # divide w by z = k - 2iG
    den = k * k + 4.0 * G * G
    K = (re_w * k - im_w * 2.0 * G) / den
    L = (im_w * k + re_w * 2.0 * G) / den
    return E, K, L


def _use_series(k, G, t):
    return G * t < _SERIES_SWITCH or 2.0 * G < _SERIES_SWITCH * k


def damped_sin2(k, G, t):
    """int_0^t exp(-k u) sin^2(G u) du."""
    if t <= 0.0 or G == 0.0:
        return 0.0
    G = abs(G)
    if _use_series(k, G, t):
        return _series(k, G, t, "sin2")
    E, K, _ = _closed(k, G, t)
    return 0.5 * (E - K)


def damped_cos2(k, G, t):
    """int_0^t exp(-k u) cos^2(G u) du."""
    if t <= 0.0:
        return 0.0
    return decay_integral(k, t) - damped_sin2(k, G, t)


def damped_sincos(k, G, t):
    """int_0^t exp(-k u) sin(G u) cos(G u) du."""
    if t <= 0.0 or G == 0.0:
        return 0.0
    sign = 1.0 if G > 0 else -1.0
    G = abs(G)
    if _use_series(k, G, t):
        return sign * _series(k, G, t, "sincos")
    _, _, L = _closed(k, G, t)
    return sign * 0.5 * L


def g_integrals(G, decay, duration, scaled=False):
    """The pair (G11, G22) of the retrieved-photon noise integrals.

    G11 = int_0^t exp(2 decay s) sin^2[G (t - s)] ds and G22 the same with
    cos^2.  These grow like exp(2 decay t); ``scaled=True`` returns them
    multiplied by exp(-2 decay t), which is the combination that actually
    enters the photon-number formulas and never overflows.

    G33 is ``g_integrals(G_r, B_r, t_2s)[1]``.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    s = damped_sin2(2.0 * decay, G, duration)
    c = damped_cos2(2.0 * decay, G, duration)
    if scaled:
        return s, c
    grow = math.exp(2.0 * decay * duration)
    return grow * s, grow * c
