"""Physical inputs and the rates derived from them.

All frequencies are angular rates in rad/s and are used as given (no 2*pi
conversion); all other quantities are SI.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional

from scipy.constants import Boltzmann as k_B
from scipy.constants import c as c_light
from scipy.constants import hbar

from .errors import ConfigError, NumericalError

log = logging.getLogger(__name__)

COOPERATIVITY_CONVENTIONS = ("consistent", "printed")


@dataclass(frozen=True)
class PhysicalParams:
    mass: float
    omega_x: float
    radius: float
    temperature: float
    pressure: float = 0.0
    epsilon_c: float = 1.133
    lambda_s: float = 780e-9
    lambda_w: float = 1064e-9
    lambda_r: float = 1064e-9
    delta_x: float = 10e-9
    waist_w0: float = 0.0
    signal_linewidth: float = 0.0
    gas_viscosity: Optional[float] = None
    gamma_g: Optional[float] = None
    delta_Gamma: float = 0.0
    B_s: float = 0.0
    B_w: float = 0.0
    B_r: float = 0.0
    A_t: float = 0.0
    A_w: float = 0.0
    A_r: float = 0.0
    chi: float = 0.0
    photon_flux_Phi: Optional[float] = None
    gain_G: float = 0.0
    N_mech: float = 0.0
    gamma_noise: Optional[float] = None
    F_noise: Optional[float] = None
    detuning_Delta: float = 0.0

    def __post_init__(self):
        for name in ("mass", "omega_x", "radius", "temperature"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.pressure < 0:
            raise ConfigError("pressure must be >= 0")
        for name in ("delta_Gamma", "B_s", "B_w", "B_r", "A_t", "A_w", "A_r"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.N_mech < 0:
            raise ConfigError("N_mech must be >= 0")
        has_stokes = self.gas_viscosity is not None
        has_direct = self.gamma_g is not None
        if has_stokes == has_direct:
            raise ConfigError(
                "gas damping needs exactly one of gas_viscosity (with pressure) or gamma_g"
            )
        if has_direct and self.gamma_g < 0:
            raise ConfigError("gamma_g must be >= 0")
        if has_stokes and self.gas_viscosity < 0:
            raise ConfigError("gas_viscosity must be >= 0")
        for name in ("gamma_noise", "F_noise"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(f"{name} must be >= 0")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedRates:
    ell_x: float
    eta_f: float
    gamma_g: float
    Gamma: float
    D_p: float
    D_q: float
    gamma_noise: float
    F_noise: float
    B_write_total: float
    B_read: float
    C_w: float
    C_r: float
    C_w_printed: float
    C_r_printed: float
    tau_R: float
    cooperativity_convention: str = "consistent"

    def as_dict(self):
        return dataclasses.asdict(self)


def zero_point_length(mass, omega_x):
    return math.sqrt(hbar / (2.0 * mass * omega_x))


def gas_damping(p):
    """Gas damping rate gamma_g and friction coefficient eta_f."""
    if p.gamma_g is not None:
        return p.gamma_g, 2.0 * p.mass * p.gamma_g
    eta_f = 6.0 * math.pi * p.gas_viscosity * p.radius
    return eta_f / (2.0 * p.mass), eta_f


def at_pressure(p, pressure):
    """Copy of ``p`` at another pressure.

    A direct gamma_g is rescaled linearly with pressure (molecular-flow
    scaling anchored at the configured pressure); a Stokes-law viscosity is
    pressure independent and is left alone.
    """
    if pressure < 0:
        raise ConfigError("pressure must be >= 0")
    if p.gamma_g is not None:
        if p.pressure <= 0:
            raise ConfigError("cannot rescale gamma_g from a zero reference pressure")
        return p.replace(pressure=pressure, gamma_g=p.gamma_g * pressure / p.pressure)
    return p.replace(pressure=pressure)


def at_temperature(p, temperature):
    """Copy of ``p`` at another bath temperature; the thermal noise rate is
    rescaled proportionally to T (classical bath)."""
    if temperature <= 0:
        raise ConfigError("temperature must be > 0")
    changes = {"temperature": temperature}
    if p.gamma_noise is not None:
        changes["gamma_noise"] = p.gamma_noise * temperature / p.temperature
    return p.replace(**changes)


def printed_thermal_noise(p, gamma_g, T_eff=None):
    """gamma = 2 m gamma_g k_B T_eff as printed.  Not a rate dimensionally."""
    T_eff = p.temperature if T_eff is None else T_eff
    log.warning("thermal noise from 2 m gamma_g k_B T_eff: dimensionally not a rate")
    return 2.0 * p.mass * gamma_g * k_B * T_eff


def printed_feedback_noise(p):
    """F = 54 m hbar omega_x chi^2 Phi G^2 (2N^2 + 2N + 1) as printed."""
    if p.photon_flux_Phi is None:
        raise ConfigError("F_noise not given and photon_flux_Phi missing for the printed formula")
    log.warning("feedback noise from 54 m hbar omega_x chi^2 Phi G^2 (...): dimensionally not a rate")
    N = p.N_mech
    return (
        54.0 * p.mass * hbar * p.omega_x * p.chi**2 * p.photon_flux_Phi * p.gain_G**2
        * (2 * N * N + 2 * N + 1)
    )


def derive_rates(p, G_w0, G_r0, cooperativity="consistent"):
    if G_w0 < 0 or G_r0 < 0:
        raise ConfigError("pulse amplitudes must be >= 0")
    if cooperativity not in COOPERATIVITY_CONVENTIONS:
        raise ConfigError(f"unknown cooperativity convention {cooperativity!r}")
    ell_x = zero_point_length(p.mass, p.omega_x)
    gamma_g, eta_f = gas_damping(p)
    Gamma = gamma_g + p.delta_Gamma
    D_p = 2.0 * eta_f * k_B * p.temperature * ell_x**2 / hbar**2
    D_q = eta_f * hbar**2 / (24.0 * k_B * p.temperature * p.mass**2 * ell_x**2)
    gamma_noise = p.gamma_noise if p.gamma_noise is not None else printed_thermal_noise(p, gamma_g)
    F_noise = p.F_noise if p.F_noise is not None else printed_feedback_noise(p)
    B = p.B_s + p.B_w

    def coop(G, Bi, factor):
        if G == 0:
            return 0.0
        denom = Gamma * Bi
        if denom == 0:
            return math.inf
        return factor * G * G / denom

    C_w, C_r = coop(G_w0, B, 1.0), coop(G_r0, p.B_r, 1.0)
    C_w4, C_r4 = coop(G_w0, B, 4.0), coop(G_r0, p.B_r, 4.0)
    values = dict(
        ell_x=ell_x, eta_f=eta_f, gamma_g=gamma_g, Gamma=Gamma, D_p=D_p, D_q=D_q,
        gamma_noise=gamma_noise, F_noise=F_noise, B_write_total=B, B_read=p.B_r,
    )
    for name, v in values.items():
        if v < 0 or math.isnan(v):
            raise NumericalError(f"derived {name} = {v!r}")
    tau_R = 1.0 / Gamma if Gamma > 0 else math.inf
    if cooperativity == "printed":
        C_w, C_r, C_w4, C_r4 = C_w4, C_r4, C_w4, C_r4
    return DerivedRates(
        **values, C_w=C_w, C_r=C_r, C_w_printed=C_w4, C_r_printed=C_r4,
        tau_R=tau_R, cooperativity_convention=cooperativity,
    )


def particle_volume(radius):
    return 4.0 / 3.0 * math.pi * radius**3


def coupling_g(p):
    """Single-photon optomechanical coupling of the signal field.

    g = V_n (2 eps_c omega_s d_omega_s x0) / (pi^2 w0^2 c) * dx / w0^2 with
    the undefined length x0 taken to be the zero-point fluctuation.
    """
    if p.waist_w0 <= 0:
        raise ConfigError("waist_w0 must be > 0 to evaluate the coupling")
    omega_s = 2.0 * math.pi * c_light / p.lambda_s
    x0 = zero_point_length(p.mass, p.omega_x)
    w2 = p.waist_w0**2
    return (
        particle_volume(p.radius)
        * 2.0 * p.epsilon_c * omega_s * p.signal_linewidth * x0
        / (math.pi**2 * w2 * c_light)
        * p.delta_x / w2
    )
