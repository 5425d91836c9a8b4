"""Frequency-domain transmission of the three-port (signal, mechanics,
readout) system with constant couplings.

Rows of the scattering matrix that reach the readout output:

    T31 = -sqrt(2B) sqrt(2B_r) G_w G_r / I
    T33 = 2 B_r [(i w + Gam)(i(w + D1) + B) + G_w^2] / I - 1
    T32 = -i sqrt(2B_r) sqrt(2 gamma) G_r (i(w + D1) + B) / I
    M32 = -i sqrt(2B_r) sqrt(2 F) G_r (i(w + D1) + B) / I

    I = (i(w + D1) + B) [(i w + Gam)(i(w + D2) + B_r) + G_r^2]
        + G_w^2 (i(w + D2) + B_r)
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, NotFoundError, NumericalError, PoleError

POLE_FLOOR = 1e-300
MAX_OMEGA = 1e12


@dataclass(frozen=True)
class ScatterParams:
    G_w: float
    G_r: float
    Gamma: float
    B: float
    B_r: float
    Delta1: float = 0.0
    Delta2: float = 0.0
    gamma_noise: float = 0.0
    F_noise: float = 0.0

    def __post_init__(self):
        for name in ("G_w", "G_r", "Gamma", "B", "B_r", "gamma_noise", "F_noise"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0")

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def C_w(self):
        return self.G_w**2 / (self.Gamma * self.B)

    @property
    def C_r(self):
        return self.G_r**2 / (self.Gamma * self.B_r)

    @classmethod
    def impedance_matched(cls, G_w, Gamma, B, B_r, **kw):
        """Read coupling chosen so that B_r G_w^2 = B G_r^2."""
        if not B > 0:
            raise ConfigError("impedance matching needs B > 0")
        return cls(G_w=G_w, G_r=G_w * math.sqrt(B_r / B), Gamma=Gamma, B=B, B_r=B_r, **kw)


@dataclass(frozen=True)
class TransmissionSpectrum:
    omega: np.ndarray
    T31: np.ndarray
    T32: np.ndarray
    T33: np.ndarray
    M32: np.ndarray

    def __len__(self):
        return len(self.omega)

    def magnitudes(self):
        return {k: np.abs(getattr(self, k)) for k in ("T31", "T32", "T33", "M32")}


def _coefficients(w, p):
    w = np.asarray(w, dtype=float)
    opt_w = 1j * (w + p.Delta1) + p.B
    opt_r = 1j * (w + p.Delta2) + p.B_r
    mech = 1j * w + p.Gamma
    I = opt_w * (mech * opt_r + p.G_r**2) + p.G_w**2 * opt_r
    small = np.abs(I) < POLE_FLOOR
    if np.any(small):
        raise PoleError(float(w[small].flat[0]) if w.ndim else float(w))
    kr = math.sqrt(2.0 * p.B_r)
    T31 = -math.sqrt(2.0 * p.B) * kr * p.G_w * p.G_r / I
    T33 = 2.0 * p.B_r * (mech * opt_w + p.G_w**2) / I - 1.0
    T32 = -1j * kr * math.sqrt(2.0 * p.gamma_noise) * p.G_r * opt_w / I
    M32 = -1j * kr * math.sqrt(2.0 * p.F_noise) * p.G_r * opt_w / I
    return T31, T32, T33, M32


def transmission_at(w, p):
    """(T31, T32, T33, M32) at angular frequency ``w``."""
    return tuple(complex(x) for x in _coefficients(float(w), p))


def spectrum(p, omega):
    omega = np.asarray(omega, dtype=float)
    if omega.size == 0:
        raise ConfigError("empty frequency grid")
    T31, T32, T33, M32 = _coefficients(omega, p)
    return TransmissionSpectrum(omega=omega, T31=T31, T32=T32, T33=T33, M32=M32)


def drift_matrix(p):
    """Drift matrix of (a_s, b, a_r); the poles of every coefficient sit at
    i w = its eigenvalues."""
    return np.array([
        [-(1j * p.Delta1 + p.B), -1j * p.G_w, 0.0],
        [-1j * p.G_w, -p.Gamma, -1j * p.G_r],
        [0.0, -1j * p.G_r, -(1j * p.Delta2 + p.B_r)],
    ])


def t31_dc(C_w, C_r):
    if C_w < 0 or C_r < 0:
        raise ConfigError("cooperativities must be >= 0")
    if math.isinf(C_w) or math.isinf(C_r):
        if math.isinf(C_w) and math.isinf(C_r):
            return 1.0
        return 0.0
    return 2.0 * math.sqrt(C_w * C_r) / (C_w + C_r + 1.0)


def _abs_t31(w, p):
    return abs(_coefficients(float(w), p)[0])


def _bisect(f, lo, hi, rtol):
    """Root of f on [lo, hi] with f(lo) > 0 >= f(hi)."""
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class HalfWidth:
    first: float
    outermost: float

    def __float__(self):
        return self.first


def half_width(p, rtol=1e-12, growth=1.25):
    """Frequency where |T31| first falls to half its zero-frequency value.

    The bracket starts at Gamma / 100 (moved down if it is already past the
    crossing) and grows geometrically.  When |T31| is non-monotone, the
    outermost crossing is reported too.
    """
    target = 0.5 * _abs_t31(0.0, p)
    if not target > 0:
        raise NotFoundError("T31(0) = 0: no half-width")

    def f(w):
        return _abs_t31(w, p) - target

    lo = p.Gamma / 100.0 if p.Gamma > 0 else 1e-6
    while f(lo) <= 0:
        lo /= growth
        if lo < 1e-300:
            raise NotFoundError("|T31| drops to half at arbitrarily small frequency")
    hi = lo * growth
    while f(hi) > 0:
        lo, hi = hi, hi * growth
        if hi > MAX_OMEGA:
            raise NotFoundError(f"no half-width crossing below {MAX_OMEGA:g} rad/s")
    first = _bisect(f, lo, hi, rtol)

    # outermost: last sign change on a fine log grid up to where |T31| has
    # surely rolled off (well beyond every rate in the problem)
    top = 1e3 * max(p.G_w, p.G_r, p.Gamma, p.B, p.B_r, abs(p.Delta1), abs(p.Delta2), hi)
    grid = np.geomspace(hi, min(top, MAX_OMEGA), 4000)
    # normal-mode peaks can be narrower than the grid spacing
    modes = np.abs(np.linalg.eigvals(drift_matrix(p)).imag)
    grid = np.unique(np.concatenate([grid, modes[(modes > hi) & (modes < grid[-1])]]))
    vals = np.abs(_coefficients(grid, p)[0]) - target
    above = np.nonzero(vals > 0)[0]
    if above.size == 0:
        return HalfWidth(first, first)
    i = above[-1]
    if i + 1 >= grid.size:
        raise NotFoundError(f"|T31| still above half at {grid[-1]:g} rad/s")
    return HalfWidth(first, float(_bisect(f, grid[i], grid[i + 1], rtol)))


def pulse_fidelity(p, sigma_w, transmission=None, epsrel=1e-8):
    """Overlap fidelity of a gaussian spectral pulse exp(-w^2/sigma^2)
    against its filtered copy |T31(w)| exp(-w^2/sigma^2).

    ``transmission`` overrides |T31| with any callable of w (for tests and
    synthetic responses).
    """
    if not sigma_w > 0:
        raise ConfigError("sigma_w must be > 0")
    mag = transmission if transmission is not None else (lambda w: _abs_t31(w, p))
    norm = 1.0 / (math.sqrt(math.pi) * sigma_w)

    def a_in(w):
        return norm * math.exp(-(w / sigma_w) ** 2)

    lim = 8.0 * sigma_w
    pts = [0.0]

    def integral(fn):
        val, err = quad(fn, -lim, lim, epsrel=epsrel, epsabs=0.0, limit=400, points=pts)
        if not math.isfinite(val) or err > max(1e-6 * abs(val), 1e-300):
            raise NumericalError(f"pulse-fidelity quadrature did not converge (err {err:.3g})")
        return val

    overlap = integral(lambda w: mag(w) * a_in(w) ** 2)
    in_norm = integral(lambda w: a_in(w) ** 2)
    out_norm = integral(lambda w: (mag(w) * a_in(w)) ** 2)
    if out_norm == 0:
        return 0.0
    return min(overlap**2 / (in_norm * out_norm), 1.0)
