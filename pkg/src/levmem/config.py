"""JSON run configuration: loading, default filling and validation.

A user file is deep-merged over the shipped defaults (``data/fig2.json``),
so any block or key may be omitted.  Unknown keys are rejected.
"""

import copy
import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .gaussian import CONVENTIONS, NOISE_MODELS
from .params import PhysicalParams
from .scenario import build_scenario

BLOCKS = ("params", "pulses", "protocol", "state", "scatter", "sweep", "output", "options", "figures")
PULSE_KEYS = {
    "write": {"shape", "amplitude", "width", "center", "start"},
    "read": {"shape", "amplitude", "width", "center", "start"},
    "signal": {"photons", "width", "center"},
}
PROTOCOL_KEYS = {"mode", "G_w", "G_r", "t_1s", "t_2s", "t_f"}
STATE_KEYS = {"abs_alpha2", "phase", "r"}
SCATTER_KEYS = {"impedance_match", "Delta1", "Delta2", "sigma_w"}
OUTPUT_KEYS = {"directory", "formats", "timestamp"}
OPTION_KEYS = {
    "cooperativity", "fidelity_convention", "noise_model", "tol", "t_grid", "switch_time",
    "fresh_readout_mode", "jobs", "reference_power_mW", "quoted_decay_time",
}
FIGURE_KEYS = {
    "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig5a", "fig5b", "fig6", "fig7a", "fig7b",
    "fig8a", "fig8b",
}
AXIS_KEYS = {"key", "values", "start", "stop", "count", "scale"}
SWEEP_KEYS = {"axes", "quantity", "set"}
FORMATS = ("csv", "svg", "both")

PARAM_FIELDS = {f.name for f in dataclasses.fields(PhysicalParams)}
# sweepable keys that are not plain fields
DERIVED_KEYS = {
    "params.pressure_mbar",
    "protocol.G", "protocol.G_over_omega_x", "protocol.P_w_mW", "protocol.P_r_mW",
}


def sweepable_keys():
    keys = {f"params.{k}" for k in PARAM_FIELDS}
    keys |= {f"protocol.{k}" for k in PROTOCOL_KEYS}
    keys |= {f"state.{k}" for k in STATE_KEYS}
    keys |= {f"scatter.{k}" for k in SCATTER_KEYS}
    for name, fields in PULSE_KEYS.items():
        keys |= {f"pulses.{name}.{k}" for k in fields}
    return keys | DERIVED_KEYS


def default_config_text():
    return resources.files("levmem").joinpath("data/fig2.json").read_text(encoding="utf-8")


def _parse(text, origin):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{origin}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{origin}: top level must be a JSON object")
    return data


def _merge(base, over, path=""):
    out = copy.deepcopy(base)
    for key, value in over.items():
        here = f"{path}.{key}" if path else key
        if key not in out:
            raise ConfigError(f"unknown key {here!r}")
        if isinstance(value, dict) and isinstance(out[key], dict) and key != "set":
            out[key] = _merge(out[key], value, here)
        else:
            out[key] = copy.deepcopy(value)
    return out


def axis_values(axis, where="axis"):
    """Expand an axis spec into a list of floats (or strings for ``mode``)."""
    unknown = set(axis) - AXIS_KEYS
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    key = axis.get("key")
    if key not in sweepable_keys():
        raise ConfigError(f"{where}: unknown key {key!r}")
    if "values" in axis:
        values = list(axis["values"])
    else:
        try:
            start, stop, count = float(axis["start"]), float(axis["stop"]), int(axis["count"])
        except KeyError as exc:
            raise ConfigError(f"{where}: missing {exc.args[0]!r} (give values or start/stop/count)") from None
        if count < 1:
            raise ConfigError(f"{where}: count must be >= 1")
        scale = axis.get("scale", "linear")
        if scale == "linear":
            values = np.linspace(start, stop, count).tolist()
        elif scale == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{where}: log axis needs positive bounds")
            values = np.geomspace(start, stop, count).tolist()
        else:
            raise ConfigError(f"{where}: scale must be 'linear' or 'log'")
    if not values:
        raise ConfigError(f"{where}: no values")
    for v in values:
        if not isinstance(v, str) and not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ConfigError(f"{where}: non-finite value {v!r}")
    return values


def _check_keys(block, allowed, name):
    unknown = set(block) - set(allowed)
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {sorted(unknown)}")


def _check_axes(spec, where):
    axes = spec.get("axes", [])
    if not 1 <= len(axes) <= 2:
        raise ConfigError(f"{where}: need one or two axes")
    for i, ax in enumerate(axes):
        axis_values(ax, f"{where}.axes[{i}]")
    for key in spec.get("set", {}) or {}:
        if key not in sweepable_keys():
            raise ConfigError(f"{where}.set: unknown key {key!r}")


def validate(raw):
    _check_keys(raw, BLOCKS, "config")
    _check_keys(raw["params"], PARAM_FIELDS, "params")
    _check_keys(raw["pulses"], PULSE_KEYS, "pulses")
    for name, fields in PULSE_KEYS.items():
        _check_keys(raw["pulses"][name], fields, f"pulses.{name}")
    _check_keys(raw["protocol"], PROTOCOL_KEYS, "protocol")
    _check_keys(raw["state"], STATE_KEYS, "state")
    _check_keys(raw["scatter"], SCATTER_KEYS, "scatter")
    _check_keys(raw["output"], OUTPUT_KEYS, "output")
    _check_keys(raw["options"], OPTION_KEYS, "options")
    _check_keys(raw["figures"], FIGURE_KEYS, "figures")
    if raw["output"]["formats"] not in FORMATS:
        raise ConfigError(f"output.formats must be one of {FORMATS}")
    for name, fig in raw["figures"].items():
        if "axes" in fig:
            _check_axes(fig, f"figures.{name}")
    if raw.get("sweep") is not None:
        sweep = raw["sweep"]
        _check_keys(sweep, SWEEP_KEYS, "sweep")
        _check_axes(sweep, "sweep")
    opts = raw["options"]
    if opts["fidelity_convention"] not in CONVENTIONS:
        raise ConfigError(f"options.fidelity_convention must be one of {CONVENTIONS}")
    if opts["noise_model"] not in NOISE_MODELS:
        raise ConfigError(f"options.noise_model must be one of {NOISE_MODELS}")
    if opts["jobs"] is not None and not (isinstance(opts["jobs"], int) and opts["jobs"] >= 1):
        raise ConfigError("options.jobs must be a positive integer or null")
    # building the base scenario surfaces every invariant violation
    build_scenario(raw)


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    source: str = "<defaults>"

    @property
    def digest(self):
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def scenario(self, overrides=None):
        return build_scenario(self.raw, overrides)

    def figure(self, name):
        return self.raw["figures"][name]

    def with_options(self, **options):
        raw = copy.deepcopy(self.raw)
        for key, value in options.items():
            if value is None:
                continue
            if key not in OPTION_KEYS:
                raise ConfigError(f"unknown option {key!r}")
            raw["options"][key] = value
        validate(raw)
        return RunConfig(raw, self.source)

    @property
    def params(self):
        return self.scenario().params

    @property
    def protocol(self):
        return self.scenario().proto


def load_config(path=None, text=None):
    """Load a config file (or literal JSON ``text``) over the defaults."""
    base = _parse(default_config_text(), "defaults")
    if path is None and text is None:
        raw, origin = base, "<defaults>"
    else:
        if text is None:
            p = Path(path)
            try:
                text = p.read_text(encoding="utf-8")
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {path}") from None
            except UnicodeDecodeError as exc:
                raise ConfigError(f"{path}: not UTF-8 ({exc.reason})") from None
            origin = str(p)
        else:
            origin = "<text>"
        raw = _merge(base, _parse(text, origin))
    validate(raw)
    return RunConfig(raw, origin)


__all__ = ["RunConfig", "load_config", "axis_values", "sweepable_keys"]
