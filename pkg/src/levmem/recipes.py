"""Figure recipes: each writes CSV tables (and matching SVGs) to a directory."""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import MomentRates, integrate_moments, storage_retrieval_trace
from .errors import ConfigError
from .gaussian import wigner_grid
from .output import metadata_lines, write_csv
from .params import coupling_g
from .pulses import pulse_area
from .scattering import half_width, spectrum
from .sweep import run_sweep

LABELS = {
    "state.r": "r",
    "state.abs_alpha2": "|alpha|^2",
    "protocol.G_over_omega_x": "G / omega_x",
    "protocol.P_w_mW": "P_w (mW)",
    "protocol.P_r_mW": "P_r (mW)",
    "protocol.t_1s": "t_1s (s)",
    "protocol.t_2s": "t_2s (s)",
    "protocol.t_f": "t_f (s)",
    "params.temperature": "T (K)",
    "params.pressure_mbar": "P (mbar)",
    "scatter.sigma_w": "sigma_w (rad/s)",
}


@dataclass
class RecipeResult:
    files: list = field(default_factory=list)
    failures: int = 0
    summary: list = field(default_factory=list)


@dataclass
class Context:
    cfg: object
    out: Path
    formats: str = "both"
    jobs: int = None
    timestamp: bool = False

    @property
    def want_csv(self):
        return self.formats in ("csv", "both")

    @property
    def want_svg(self):
        return self.formats in ("svg", "both")

    def header(self, name, extra=None):
        return metadata_lines(self.cfg, name, extra, self.timestamp)

    def csv(self, result, name, columns, rows, extra=None):
        if self.want_csv:
            result.files.append(write_csv(self.out / f"{name}.csv", columns, rows, self.header(name, extra)))

    def svg(self, result, name, draw, *args, **kwargs):
        if self.want_svg:
            from . import plotting

            result.files.append(getattr(plotting, draw)(self.out / f"{name}.svg", *args, **kwargs))


def _as_float(values):
    return np.array([math.nan if v is None else float(v) for v in values])


def _figure_sweep(ctx, result, name, quantity, value_col, zlabel, logx=False):
    spec = ctx.cfg.figure(name)
    table = run_sweep(ctx.cfg, spec["axes"], quantity, spec.get("set"), ctx.jobs)
    result.failures += table.failures
    extra = {"quantity": quantity}
    if spec.get("set"):
        extra["fixed"] = " ".join(f"{k}={v}" for k, v in sorted(spec["set"].items()))
    if name == "fig3c":
        extra["power_map"] = (
            f"G = G_ref * sqrt(P / {ctx.cfg.raw['options']['reference_power_mW']} mW), "
            "pulses re-timed to pi/2"
        )
    ctx.csv(result, name, table.columns, table.rows, extra)
    keys = [ax["key"] for ax in spec["axes"]]
    z = _as_float(table.column(value_col))
    if len(keys) == 1:
        x = _as_float(table.column(keys[0]))
        ctx.svg(result, name, "line_plot", x, {value_col: z}, LABELS.get(keys[0], keys[0]), zlabel,
                logx=logx)
    else:
        x = sorted(set(table.column(keys[0])), key=float)
        y = sorted(set(table.column(keys[1])), key=float)
        Z = z.reshape(len(x), len(y)).T
        ctx.svg(result, name, "heatmap", x, y, Z, LABELS.get(keys[0], keys[0]),
                LABELS.get(keys[1], keys[1]), zlabel, logx=logx)
    ok = z[np.isfinite(z)]
    if ok.size:
        result.summary.append(f"{name}: {value_col} in [{ok.min():.6g}, {ok.max():.6g}] over {z.size} points")
    return table


def recipe_derive(ctx):
    result = RecipeResult()
    scn = ctx.cfg.scenario()
    r, p = scn.rates, scn.params
    quoted = float(ctx.cfg.raw["options"]["quoted_decay_time"])
    rows = [
        ("ell_x", r.ell_x, "m"),
        ("eta_f", r.eta_f, "kg/s"),
        ("gamma_g", r.gamma_g, "rad/s"),
        ("Gamma", r.Gamma, "rad/s"),
        ("tau_R", r.tau_R, "s"),
        ("quoted_decay_time", quoted, "s"),
        ("quoted_over_tau_R", quoted / r.tau_R, "1"),
        ("D_p", r.D_p, "1/s"),
        ("D_q", r.D_q, "1/s"),
        ("gamma_noise", r.gamma_noise, "1/s"),
        ("F_noise", r.F_noise, "1/s"),
        ("B_write_total", r.B_write_total, "rad/s"),
        ("B_read", r.B_read, "rad/s"),
        ("C_w_consistent", r.C_w_printed / 4.0, "1"),
        ("C_r_consistent", r.C_r_printed / 4.0, "1"),
        ("C_w_printed", r.C_w_printed, "1"),
        ("C_r_printed", r.C_r_printed, "1"),
        ("write_pulse_area", pulse_area(scn.write), "rad"),
        ("read_pulse_area", pulse_area(scn.read), "rad"),
    ]
    if p.waist_w0 > 0:
        rows.append(("g", coupling_g(p), "rad/s"))
    note = (
        f"quoted mechanical decay time {quoted:g} s is {quoted / r.tau_R:.3g} x 1/Gamma = "
        f"{r.tau_R:.4g} s; the two are not reconciled"
    )
    ctx.csv(result, "derive", ["quantity", "value", "unit"], rows, {"note": note})
    width = max(len(name) for name, _, _ in rows)
    result.summary.extend(f"{name:<{width}}  {value:.6g} {unit}" for name, value, unit in rows)
    result.summary.append(note)
    return result


def recipe_fig2(ctx):
    result = RecipeResult()
    scn = ctx.cfg.scenario()
    o = scn.options
    trace = integrate_moments(
        MomentRates.from_derived(scn.rates, scn.params), scn.write, scn.read, scn.signal,
        t_grid=tuple(o["t_grid"]), tol=o["tol"], initial=(0.0, scn.params.N_mech, 0j),
        switch_time=o["switch_time"], fresh_readout_mode=o["fresh_readout_mode"],
    )
    power = storage_retrieval_trace(trace, scn.write, scn.read)
    cols = ["t_s", "n_opt", "n_mech", "Re_coh", "Im_coh", "G_w", "G_r", "optical_power", "mechanical_power"]
    rows = [list(r) + [op, mp] for r, op, mp in
            zip(trace.rows(), power["optical_power"], power["mechanical_power"])]
    eff = power["efficiency"]
    ctx.csv(result, "fig2", cols, rows, {"efficiency": "undefined" if eff is None else repr(eff),
                                        "trace_digest": trace.metadata["digest"]})
    ctx.svg(result, "fig2", "storage_plot", trace.times, trace.G_w, trace.G_r,
            power["optical_power"], power["mechanical_power"])
    t_peak = trace.times[np.argmax(np.where(trace.times > scn.read.center - 4 * scn.read.width,
                                            power["optical_power"], -1.0))]
    eff_text = "undefined" if eff is None else f"{eff:.6g}"
    result.summary.append(f"fig2: efficiency {eff_text}, retrieval peak at {t_peak * 1e3:.4f} ms")
    return result


def recipe_fig3(ctx):
    result = RecipeResult()
    _figure_sweep(ctx, result, "fig3a", "fidelity", "fidelity", "F")
    _figure_sweep(ctx, result, "fig3b", "fidelity", "fidelity", "F", logx=True)
    _figure_sweep(ctx, result, "fig3c", "fidelity", "fidelity", "F")
    return result


def recipe_fig4(ctx):
    result = RecipeResult()
    _figure_sweep(ctx, result, "fig4a", "fidelity", "fidelity", "F")
    _figure_sweep(ctx, result, "fig4b", "fidelity", "fidelity", "F")
    return result


def recipe_fig5(ctx):
    result = RecipeResult()
    _figure_sweep(ctx, result, "fig5a", "fidelity", "fidelity", "F")
    _figure_sweep(ctx, result, "fig5b", "fidelity", "fidelity", "F", logx=True)
    return result


def recipe_fig6(ctx):
    result = RecipeResult()
    spec = ctx.cfg.figure("fig6")
    scn = ctx.cfg.scenario()
    conv = scn.options["fidelity_convention"]
    grid = dict(x_range=tuple(spec["x_range"]), y_range=tuple(spec["y_range"]),
                resolution=int(spec["resolution"]), convention=conv)
    panels = [("fig6a", None)] + [
        (f"fig6{c}", scn.proto.replace(t_1s=w, t_2s=w)) for c, w in zip("bcd", spec["widths"])
    ]
    for name, proto in panels:
        x, y, W = wigner_grid(scn.state, proto, **grid)
        XX, YY = np.meshgrid(x, y)
        rows = zip(XX.ravel(), YY.ravel(), W.ravel())
        extra = {"panel": "input state" if proto is None else f"t_1s = t_2s = {proto.t_1s:g} s"}
        ctx.csv(result, name, ["X", "Y", "W"], rows, extra)
        ctx.svg(result, name, "heatmap", x, y, W, "X", "Y", "W")
        result.summary.append(f"{name}: peak W = {W.max():.6g} ({extra['panel']})")
    return result


def recipe_fig7(ctx):
    result = RecipeResult()
    _figure_sweep(ctx, result, "fig7a", "g2", "g2", "g2(0)")
    _figure_sweep(ctx, result, "fig7b", "g2", "g2", "g2(0)")
    return result


def recipe_fig8a(ctx):
    result = RecipeResult()
    scn = ctx.cfg.scenario()
    spec = ctx.cfg.figure("fig8a")
    hw = half_width(scn.scatter)
    omega = np.linspace(-1.0, 1.0, int(spec["count"])) * spec["span_half_widths"] * hw.first
    sp = spectrum(scn.scatter, omega)
    mags = sp.magnitudes()
    cols = ["omega", "abs_T31", "abs_T32", "abs_T33", "abs_M32"]
    rows = zip(omega, mags["T31"], mags["T32"], mags["T33"], mags["M32"])
    extra = {"half_width": repr(hw.first), "half_width_outermost": repr(hw.outermost),
             "C_w": repr(scn.scatter.C_w), "C_r": repr(scn.scatter.C_r)}
    ctx.csv(result, "fig8a", cols, rows, extra)
    ctx.svg(result, "fig8a", "line_plot", omega, {k: mags[k] for k in ("T31", "T32", "T33", "M32")},
            "omega (rad/s)", "|T|")
    result.summary.append(f"fig8a: |T31(0)| = {np.abs(sp.T31).max():.12g}, half-width {hw.first:.6g} rad/s")
    return result


def recipe_fig8b(ctx):
    result = RecipeResult()
    scn = ctx.cfg.scenario()
    spec = ctx.cfg.figure("fig8b")
    hw = half_width(scn.scatter).first
    axis = {"key": "scatter.sigma_w", "start": spec["start_half_widths"] * hw,
            "stop": spec["stop_half_widths"] * hw, "count": int(spec["count"]), "scale": "log"}
    table = run_sweep(ctx.cfg, [axis], "pulse_fidelity", None, ctx.jobs)
    result.failures += table.failures
    ctx.csv(result, "fig8b", table.columns, table.rows, {"half_width": repr(hw)})
    ctx.svg(result, "fig8b", "line_plot", _as_float(table.column("scatter.sigma_w")),
            {"F_p": _as_float(table.column("pulse_fidelity"))}, LABELS["scatter.sigma_w"], "F_p",
            logx=True)
    result.summary.append(f"fig8b: {len(table.rows)} points, half-width {hw:.6g} rad/s")
    return result


def recipe_sweep(ctx):
    spec = ctx.cfg.raw.get("sweep")
    if not spec:
        raise ConfigError("recipe 'sweep' needs a 'sweep' block in the config")
    result = RecipeResult()
    quantity = spec.get("quantity", "fidelity")
    table = run_sweep(ctx.cfg, spec["axes"], quantity, spec.get("set"), ctx.jobs)
    result.failures += table.failures
    ctx.csv(result, "sweep", table.columns, table.rows, {"quantity": quantity})
    value_col = table.columns[len(spec["axes"])]
    z = _as_float(table.column(value_col))
    keys = [ax["key"] for ax in spec["axes"]]
    if len(keys) == 1:
        ctx.svg(result, "sweep", "line_plot", _as_float(table.column(keys[0])), {value_col: z},
                keys[0], value_col)
    else:
        x = sorted(set(table.column(keys[0])), key=float)
        y = sorted(set(table.column(keys[1])), key=float)
        ctx.svg(result, "sweep", "heatmap", x, y, z.reshape(len(x), len(y)).T, keys[0], keys[1], value_col)
    result.summary.append(f"sweep: {len(table.rows)} rows, {table.failures} failed")
    return result


RECIPES = {
    "derive": recipe_derive,
    "fig2": recipe_fig2,
    "fig3": recipe_fig3,
    "fig4": recipe_fig4,
    "fig5": recipe_fig5,
    "fig6": recipe_fig6,
    "fig7": recipe_fig7,
    "fig8a": recipe_fig8a,
    "fig8b": recipe_fig8b,
    "sweep": recipe_sweep,
}


def run_recipe(name, cfg, out=None, formats=None, jobs=None, timestamp=None):
    if name not in RECIPES:
        raise ConfigError(f"unknown recipe {name!r}; choose from {sorted(RECIPES)}")
    output = cfg.raw["output"]
    ctx = Context(
        cfg=cfg,
        out=Path(out if out is not None else output["directory"]),
        formats=formats or output["formats"],
        jobs=jobs,
        timestamp=output["timestamp"] if timestamp is None else timestamp,
    )
    return RECIPES[name](ctx)
