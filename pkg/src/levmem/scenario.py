"""Turn a raw config (plus per-point overrides) into model objects."""

import copy
import dataclasses
import math
from dataclasses import dataclass

from .errors import ConfigError
from .gaussian import GaussianInputState, ProtocolSpec
from .params import PhysicalParams, at_pressure, at_temperature, derive_rates
from .pulses import SQRT_2PI, PulseSpec, signal_pulse
from .scattering import ScatterParams

MBAR = 100.0  # Pa


@dataclass(frozen=True)
class Scenario:
    params: PhysicalParams
    rates: object
    write: PulseSpec
    read: PulseSpec
    signal: PulseSpec
    proto: ProtocolSpec
    state: GaussianInputState
    scatter: ScatterParams
    sigma_w: float
    options: dict


def half_pi_duration(G, mode):
    """Duration (constant) or width (gaussian) giving a pi/2 rotation."""
    if not G > 0:
        raise ConfigError("coupling must be > 0 for pi/2 timing")
    if mode == "constant_pulses":
        return 0.5 * math.pi / G
    return 0.5 * math.pi / (SQRT_2PI * G)


def _split(overrides):
    direct, special = {}, {}
    for key, value in (overrides or {}).items():
        if key in ("params.temperature", "params.pressure", "params.pressure_mbar") or key in (
            "protocol.G", "protocol.G_over_omega_x", "protocol.P_w_mW", "protocol.P_r_mW"
        ):
            special[key] = value
        else:
            direct[key] = value
    return direct, special


def _set(raw, key, value):
    parts = key.split(".")
    node = raw
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value


def _pulse(block, label):
    return PulseSpec(
        shape=block["shape"], amplitude=float(block["amplitude"]), width=float(block["width"]),
        center=float(block.get("center", 0.0)), label=label, start=float(block.get("start", 0.0)),
    )


def build_scenario(raw, overrides=None):
    raw = copy.deepcopy(raw)
    direct, special = _split(overrides)
    for key, value in direct.items():
        _set(raw, key, value)
    opts = raw["options"]

    try:
        params = PhysicalParams(**raw["params"])
    except TypeError as exc:
        raise ConfigError(f"params: {exc}") from None
    except ConfigError as exc:
        raise ConfigError(f"params: {exc}") from None
    if "params.temperature" in special:
        params = at_temperature(params, float(special["params.temperature"]))
    if "params.pressure_mbar" in special:
        params = at_pressure(params, float(special["params.pressure_mbar"]) * MBAR)
    if "params.pressure" in special:
        params = at_pressure(params, float(special["params.pressure"]))

    try:
        write = _pulse(raw["pulses"]["write"], "write")
        read = _pulse(raw["pulses"]["read"], "read")
        sig = raw["pulses"]["signal"]
        signal = signal_pulse(float(sig["photons"]), float(sig["center"]), float(sig["width"]))
    except (KeyError, ConfigError) as exc:
        raise ConfigError(f"pulses: {exc}") from None

    rates = derive_rates(params, write.amplitude, read.amplitude, opts["cooperativity"])

    pb = dict(raw["protocol"])
    mode = pb["mode"]
    G_w, G_r = float(pb["G_w"]), float(pb["G_r"])
    t_1s, t_2s = float(pb["t_1s"]), float(pb["t_2s"])
    if "protocol.G" in special or "protocol.G_over_omega_x" in special:
        G = (float(special["protocol.G"]) if "protocol.G" in special
             else float(special["protocol.G_over_omega_x"]) * params.omega_x)
        G_w = G_r = G
        t_1s = t_2s = half_pi_duration(G, mode)
    P_ref = float(opts["reference_power_mW"])
    if "protocol.P_w_mW" in special:
        G_w = G_w * math.sqrt(float(special["protocol.P_w_mW"]) / P_ref)
        t_1s = half_pi_duration(G_w, mode)
    if "protocol.P_r_mW" in special:
        G_r = G_r * math.sqrt(float(special["protocol.P_r_mW"]) / P_ref)
        t_2s = half_pi_duration(G_r, mode)
    try:
        proto = ProtocolSpec.from_rates(rates, G_w, G_r, t_1s, t_2s, float(pb["t_f"]), mode=mode)
    except ConfigError as exc:
        raise ConfigError(f"protocol: {exc}") from None

    st = raw["state"]
    if float(st["abs_alpha2"]) < 0:
        raise ConfigError("state: abs_alpha2 must be >= 0")
    alpha = math.sqrt(float(st["abs_alpha2"])) * complex(math.cos(st["phase"]), math.sin(st["phase"]))
    try:
        state = GaussianInputState(alpha=alpha, r=float(st["r"]), N_mech=params.N_mech)
    except ConfigError as exc:
        raise ConfigError(f"state: {exc}") from None

    sc = raw["scatter"]
    kw = dict(Gamma=rates.Gamma, B=rates.B_write_total, B_r=rates.B_read,
              Delta1=float(sc["Delta1"]), Delta2=float(sc["Delta2"]),
              gamma_noise=rates.gamma_noise, F_noise=rates.F_noise)
    if sc["impedance_match"]:
        scatter = ScatterParams.impedance_matched(write.amplitude, **kw)
    else:
        scatter = ScatterParams(G_w=write.amplitude, G_r=read.amplitude, **kw)
    sigma_w = float(sc["sigma_w"])
    if not sigma_w > 0:
        raise ConfigError("scatter: sigma_w must be > 0")

    return Scenario(
        params=params, rates=rates, write=write, read=read, signal=signal, proto=proto,
        state=state, scatter=scatter, sigma_w=sigma_w, options=dict(opts),
    )


def describe(scn):
    """Flat dict of the resolved scenario (for metadata and debugging)."""
    out = {}
    for name in ("params", "proto", "state", "scatter"):
        for k, v in dataclasses.asdict(getattr(scn, name)).items():
            out[f"{name}.{k}"] = v
    return out
