"""Gaussian-state transfer through write / free evolution / read.

Quadratures are X = a + a^dag and Y = i(a^dag - a): vacuum variance 1 and a
coherent amplitude alpha has mean (2 Re alpha, 2 Im alpha).  Pulses are
constant during their windows (gaussian pulses are mapped to constant ones
of equal area lasting twice their width).

The retrieved optical quadrature is, per input,

    X_out = a X(0) + b P(0) + noise,    Y_out = a Y(0) - b Q(0) + noise
    a = eta_r (eta_w cos(th_r) cos(th_w) - eta_f sin(th_r) sin(th_w))
    b = eta_r (eta_w cos(th_r) sin(th_w) + eta_f sin(th_r) cos(th_w))

with th_w = G_w t_1s, th_r = G_r t_2s.  Mechanical noise enters during the
write window, the free evolution and the read window, each weighted by the
squared kernel of its path; optical bath noise has kernels of its own.
Those kernel integrals are the damped sin^2 / cos^2 / sin cos windows of
:mod:`levmem.integrals`.  See :func:`noise_terms` for the two ways the
bath vacuum can be accounted for.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, NumericalError
from .integrals import damped_cos2, damped_sin2, damped_sincos, decay_integral
from .pulses import SQRT_2PI

MAX_SQUEEZING = 5.0
CONVENTIONS = ("standard", "paper")


@dataclass(frozen=True)
class GaussianInputState:
    alpha: complex = 0j
    r: float = 0.0
    N_mech: float = 0.0

    def __post_init__(self):
        if not np.isfinite(complex(self.alpha)):
            raise ConfigError("alpha must be finite")
        if not abs(self.r) <= MAX_SQUEEZING:
            raise ConfigError(f"|r| must be <= {MAX_SQUEEZING}")
        if self.N_mech < 0:
            raise ConfigError("N_mech must be >= 0")

    @property
    def I1(self):
        return complex(self.alpha).real ** 2

    @property
    def I2(self):
        return complex(self.alpha).imag ** 2

    def input_means(self):
        a = complex(self.alpha)
        return 2.0 * a.real, 2.0 * a.imag

    def input_variances(self):
        return math.exp(-2.0 * self.r), math.exp(2.0 * self.r)


@dataclass(frozen=True)
class ProtocolSpec:
    G_w: float
    G_r: float
    t_1s: float
    t_2s: float
    t_f: float
    B: float
    B_r: float
    Gamma: float
    gamma_noise: float = 0.0
    F_noise: float = 0.0
    mode: str = "constant_pulses"

    def __post_init__(self):
        if self.mode not in ("constant_pulses", "gaussian_pulses"):
            raise ConfigError(f"unknown protocol mode {self.mode!r}")
        if not (self.t_1s > 0 and self.t_2s > 0):
            raise ConfigError("pulse durations must be > 0")
        if self.t_f < 0:
            raise ConfigError("t_f must be >= 0")
        for name in ("G_w", "G_r", "B", "B_r", "Gamma", "gamma_noise", "F_noise"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")

    def replace(self, **changes):
        return replace(self, **changes)

    def as_constant(self):
        """Equivalent constant-pulse protocol.

        In gaussian mode G_w/G_r are peak amplitudes and t_1s/t_2s the
        std-dev widths; each pulse becomes a constant one of equal area and
        duration 2 * width.
        """
        if self.mode == "constant_pulses":
            return self
        return replace(
            self, mode="constant_pulses",
            G_w=SQRT_2PI * self.G_w / 2.0, G_r=SQRT_2PI * self.G_r / 2.0,
            t_1s=2.0 * self.t_1s, t_2s=2.0 * self.t_2s,
        )

    @classmethod
    def from_rates(cls, rates, G_w, G_r, t_1s, t_2s, t_f, mode="constant_pulses"):
        return cls(
            G_w=G_w, G_r=G_r, t_1s=t_1s, t_2s=t_2s, t_f=t_f,
            B=rates.B_write_total, B_r=rates.B_read, Gamma=rates.Gamma,
            gamma_noise=rates.gamma_noise, F_noise=rates.F_noise, mode=mode,
        )


@dataclass(frozen=True)
class CovMatrix:
    V_XX: float
    V_YY: float
    V_XY: float
    mean_X: float
    mean_Y: float

    @property
    def matrix(self):
        return np.array([[self.V_XX, self.V_XY], [self.V_XY, self.V_YY]])

    @property
    def mean(self):
        return np.array([self.mean_X, self.mean_Y])


@dataclass(frozen=True)
class Attenuation:
    eta_w: float
    eta_f: float
    eta_r: float
    zeta: float
    xi: float

    def __iter__(self):
        return iter((self.eta_w, self.eta_f, self.eta_r, self.zeta, self.xi))


def attenuation_factors(proto):
    p = proto.as_constant()
    eta_w = math.exp(-p.B * p.t_1s)
    eta_f = math.exp(-p.Gamma * (p.t_f + p.t_1s))
    eta_r = math.exp(-p.B_r * p.t_2s)
    zeta = 0.0 - math.expm1(-p.B_r * p.t_2s - p.Gamma * p.t_f - p.Gamma * p.t_1s)
    th_plus = p.G_w * p.t_1s + p.G_r * p.t_2s
    th_minus = p.G_w * p.t_1s - p.G_r * p.t_2s
    xi = eta_r / 4.0 * ((eta_w - eta_f) * math.cos(th_plus) + (eta_w + eta_f) * math.cos(th_minus))
    return Attenuation(eta_w, eta_f, eta_r, zeta, xi)


def transfer_coefficients(proto):
    """(a, b): weights of the input optical and mechanical quadratures in
    the retrieved optical quadrature."""
    p = proto.as_constant()
    eta_w, eta_f, eta_r, _, _ = attenuation_factors(p)
    cw, sw = math.cos(p.G_w * p.t_1s), math.sin(p.G_w * p.t_1s)
    cr, sr = math.cos(p.G_r * p.t_2s), math.sin(p.G_r * p.t_2s)
    a = eta_r * (eta_w * cr * cw - eta_f * sr * sw)
    b = eta_r * (eta_w * cr * sw + eta_f * sr * cw)
    return a, b


NOISE_MODELS = ("physical", "kernel")


def _window_kernels(p):
    """Squared-kernel integrals of the optical and mechanical noise inputs
    over the write window, the free-evolution window and the read window,
    before multiplication by any noise strength."""
    eta_r = math.exp(-p.B_r * p.t_2s)
    cr, sr = math.cos(p.G_r * p.t_2s), math.sin(p.G_r * p.t_2s)
    e_tf = math.exp(-p.Gamma * p.t_f)
    Gw, t1 = p.G_w, p.t_1s
    M_mix = damped_sincos(p.B + p.Gamma, Gw, t1)
    # optical noise: optical path cos, mechanical path -sin
    k_opt = (cr * cr * damped_cos2(2 * p.B, Gw, t1) - 2 * cr * sr * e_tf * M_mix
             + sr * sr * e_tf**2 * damped_sin2(2 * p.Gamma, Gw, t1))
    # mechanical noise: optical path sin, mechanical path cos
    k_mech = (cr * cr * damped_sin2(2 * p.B, Gw, t1) + 2 * cr * sr * e_tf * M_mix
              + sr * sr * e_tf**2 * damped_cos2(2 * p.Gamma, Gw, t1))
    return {
        "write_optical": eta_r**2 * k_opt,
        "write_mechanical": eta_r**2 * k_mech,
        "free_mechanical": eta_r**2 * sr * sr * decay_integral(2 * p.Gamma, p.t_f),
        "read_optical": damped_cos2(2 * p.B_r, p.G_r, p.t_2s),
        "read_mechanical": damped_sin2(2 * p.B_r, p.G_r, p.t_2s),
    }


def noise_terms(proto, model="physical", include_free_noise=True):
    """Variance added to the retrieved quadrature, split by window.

    ``physical``: bath vacuum enters as 1 - a^2 - b^2 (the retrieved mode is
    a beam-splitter mixture of inputs and vacuum), and the mechanical
    excess 4 (gamma + F) is weighted by the kernel integrals.  The map is
    then always a valid Gaussian channel.

    ``kernel``: every bath is weighted by its kernel integral with strengths
    2B (optical), 2 gamma + 2F (mechanical) and 2B_r (readout).  This is
    only trustworthy deep in strong coupling and can dip below vacuum.

    X and Y receive identical noise.
    """
    if model not in NOISE_MODELS:
        raise ConfigError(f"unknown noise model {model!r}")
    p = proto.as_constant()
    k = _window_kernels(p)
    if not include_free_noise:
        k["free_mechanical"] = 0.0
    mech_keys = ("write_mechanical", "free_mechanical", "read_mechanical")
    if model == "physical":
        a, b = transfer_coefficients(p)
        excess = 4.0 * (p.gamma_noise + p.F_noise)
        out = {key: excess * k[key] for key in mech_keys}
        out["vacuum"] = max(0.0, 1.0 - a * a - b * b)
        return out
    D_mech = 2.0 * (p.gamma_noise + p.F_noise)
    return {
        "write_optical": 2 * p.B * k["write_optical"],
        "write_mechanical": D_mech * k["write_mechanical"],
        "free_mechanical": D_mech * k["free_mechanical"],
        "read_optical": 2 * p.B_r * k["read_optical"],
        "read_mechanical": D_mech * k["read_mechanical"],
    }


def propagate_quadratures(state, proto, model="physical", include_free_noise=True):
    a, b = transfer_coefficients(proto)
    vx, vy = state.input_variances()
    vp = 2.0 * state.N_mech + 1.0
    noise = math.fsum(noise_terms(proto, model, include_free_noise).values())
    mx, my = state.input_means()
    return CovMatrix(
        V_XX=a * a * vx + b * b * vp + noise,
        V_YY=a * a * vy + b * b * vp + noise,
        V_XY=0.0,
        mean_X=a * mx,
        mean_Y=a * my,
    )


def fidelity(state, proto, convention="standard", cov=None, model="physical"):
    """Transfer fidelity between the input state and the retrieved state.

    The retrieved displacement is taken as the input one shrunk by
    1 - zeta.  ``standard`` is the exact Gaussian overlap
    2/sqrt(A) exp(-2 zeta^2 (I1/A11 + I2/A22)), equal to 1 for identical
    pure states; ``paper`` keeps the sqrt(2/A) prefactor and the
    zeta^2 (I1 A22 + I2 A11)/A exponent (with decaying sign).
    """
    if convention not in CONVENTIONS:
        raise ConfigError(f"unknown fidelity convention {convention!r}")
    cov = propagate_quadratures(state, proto, model) if cov is None else cov
    zeta = attenuation_factors(proto).zeta
    vx, vy = state.input_variances()
    A11 = vx + cov.V_XX
    A22 = vy + cov.V_YY
    A = A11 * A22
    if not A > 0:
        raise NumericalError(f"non-positive covariance sum determinant {A!r}")
    if convention == "standard":
        F = 2.0 / math.sqrt(A) * math.exp(-2.0 * zeta**2 * (state.I1 / A11 + state.I2 / A22))
        if F > 1.0 + 1e-9:
            raise NumericalError(f"fidelity {F!r} above 1: covariance below vacuum")
        return min(F, 1.0)
    return math.sqrt(2.0 / A) * math.exp(-(zeta**2) * (state.I1 * A22 + state.I2 * A11) / A)


def gaussian_wigner(X, Y, mean, V_XX, V_YY):
    """Diagonal-covariance Gaussian Wigner function (vacuum variance 1)."""
    mx, my = mean
    norm = 1.0 / (2.0 * math.pi * math.sqrt(V_XX * V_YY))
    return norm * np.exp(-((X - mx) ** 2) / (2.0 * V_XX) - ((Y - my) ** 2) / (2.0 * V_YY))


def wigner_parameters(state, proto=None, convention="standard"):
    """(mean, V_XX, V_YY) of the Wigner function to draw.

    Without a protocol this is the input state.  Otherwise the covariance
    is the retrieved one and the mean is xi * (2 Re alpha, 2 Im alpha);
    the ``paper`` convention drops the factor 2, which makes the value at
    the origin coincide with the printed closed form.
    """
    a = complex(state.alpha)
    if proto is None:
        vx, vy = state.input_variances()
        return (2.0 * a.real, 2.0 * a.imag), vx, vy
    cov = propagate_quadratures(state, proto)
    xi = attenuation_factors(proto).xi
    scale = 2.0 if convention == "standard" else 1.0
    return (scale * xi * a.real, scale * xi * a.imag), cov.V_XX, cov.V_YY


def printed_wigner_origin(state, proto):
    """W at the phase-space origin in its printed closed form."""
    cov = propagate_quadratures(state, proto)
    xi = attenuation_factors(proto).xi
    V = cov.V_XX * cov.V_YY
    return (
        1.0 / (2.0 * math.pi * math.sqrt(V))
        * math.exp(-(xi**2) / (2.0 * V) * (state.I1 * cov.V_YY + state.I2 * cov.V_XX))
    )


def wigner_grid(state, proto=None, x_range=(-6.0, 6.0), y_range=(-6.0, 6.0), resolution=201,
                convention="standard"):
    """Wigner function on a regular grid: returns (x, y, W) with W[i, j] at
    (x[j], y[i])."""
    if isinstance(resolution, int):
        nx = ny = resolution
    else:
        nx, ny = resolution
    if nx < 2 or ny < 2:
        raise ConfigError("wigner grid needs at least 2 points per axis")
    if not (x_range[1] > x_range[0] and y_range[1] > y_range[0]):
        raise ConfigError("degenerate wigner grid range")
    x = np.linspace(*x_range, nx)
    y = np.linspace(*y_range, ny)
    mean, vxx, vyy = wigner_parameters(state, proto, convention)
    XX, YY = np.meshgrid(x, y)
    return x, y, gaussian_wigner(XX, YY, mean, vxx, vyy)
