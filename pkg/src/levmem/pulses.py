"""Control and signal pulse envelopes."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class PulseSpec:
    """A gaussian pulse (peak ``amplitude`` at ``center``, std-dev ``width``)
    or a constant pulse of height ``amplitude`` on ``[start, start + width]``.

    For the signal pulse the amplitude is a photon flux (1/s), for the
    write/read pulses an angular rate.
    """

    shape: str
    amplitude: float
    width: float
    center: float = 0.0
    label: str = "write"
    start: float = 0.0

    def __post_init__(self):
        if self.shape not in ("gaussian", "constant"):
            raise ConfigError(f"unknown pulse shape {self.shape!r}")
        if self.amplitude < 0:
            raise ConfigError("pulse amplitude must be >= 0")
        if not self.width > 0:
            raise ConfigError("pulse width must be > 0")


def envelope(pulse, t):
    """Pulse value at time(s) ``t``; returns a float for scalar input."""
    t_arr = np.asarray(t, dtype=float)
    if pulse.shape == "gaussian":
        out = pulse.amplitude * np.exp(-((t_arr - pulse.center) ** 2) / (2.0 * pulse.width**2))
    else:
        inside = (t_arr >= pulse.start) & (t_arr <= pulse.start + pulse.width)
        out = np.where(inside, pulse.amplitude, 0.0)
    return float(out) if out.ndim == 0 else out


def composite_coupling(write, read, t):
    """G_i(t) = G_w(t) + G_r(t)."""
    return envelope(write, t) + envelope(read, t)


def pulse_area(pulse):
    if pulse.shape == "gaussian":
        return SQRT_2PI * pulse.amplitude * pulse.width
    return pulse.amplitude * pulse.width


def is_half_pi(pulse, tol=0.1):
    area = pulse_area(pulse)
    target = 0.5 * math.pi
    return target * (1 - tol) <= area <= target * (1 + tol)


def support(pulse, n_sigma=8.0):
    """Interval outside of which the envelope is negligible."""
    if pulse.shape == "gaussian":
        return pulse.center - n_sigma * pulse.width, pulse.center + n_sigma * pulse.width
    return pulse.start, pulse.start + pulse.width


def signal_pulse(photons, center, width):
    """Gaussian source-flux pulse carrying ``photons`` photons in total."""
    return PulseSpec("gaussian", photons / (SQRT_2PI * width), width, center, label="signal")


def equivalent_constant(pulse):
    """Constant pulse with the same area lasting 2 * width (gaussian input),
    returned as (amplitude, duration)."""
    if pulse.shape == "constant":
        return pulse.amplitude, pulse.width
    duration = 2.0 * pulse.width
    return pulse_area(pulse) / duration, duration
