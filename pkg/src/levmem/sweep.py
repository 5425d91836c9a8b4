"""Parameter sweeps over one or two config axes.

Each point rebuilds the scenario from the raw config plus its overrides,
evaluates one named quantity and yields a row.  A failing point becomes a
flagged row; the sweep carries on.  Rows always come back in axis-major
order, whether evaluated serially or in a process pool.
"""

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config import axis_values
from .correlations import G2Inputs, g2_zero, mean_photon_retrieved
from .dynamics import MomentRates, integrate_moments, storage_retrieval_trace
from .errors import ConfigError, LevmemError
from .gaussian import fidelity, propagate_quadratures
from .scattering import half_width, pulse_fidelity, t31_dc, transmission_at
from .scenario import build_scenario


def q_fidelity(scn):
    o = scn.options
    return {"fidelity": fidelity(scn.state, scn.proto, o["fidelity_convention"], model=o["noise_model"])}


def q_covariance(scn):
    c = propagate_quadratures(scn.state, scn.proto, scn.options["noise_model"])
    return {"V_XX": c.V_XX, "V_YY": c.V_YY, "V_XY": c.V_XY, "mean_X": c.mean_X, "mean_Y": c.mean_Y}


def q_g2(scn):
    inp = G2Inputs(scn.state, scn.proto)
    n = mean_photon_retrieved(inp)
    return {"g2": g2_zero(inp), "n_retrieved": n}


def q_efficiency(scn):
    o = scn.options
    trace = integrate_moments(
        MomentRates.from_derived(scn.rates, scn.params), scn.write, scn.read, scn.signal,
        t_grid=tuple(o["t_grid"]), tol=o["tol"], initial=(0.0, scn.params.N_mech, 0j),
        switch_time=o["switch_time"], fresh_readout_mode=o["fresh_readout_mode"],
    )
    eff = storage_retrieval_trace(trace, scn.write, scn.read)["efficiency"]
    return {"efficiency": math.nan if eff is None else eff}


def q_transmission(scn):
    p = scn.scatter
    T31, T32, T33, M32 = transmission_at(0.0, p)
    return {"abs_T31_0": abs(T31), "abs_T32_0": abs(T32), "abs_T33_0": abs(T33),
            "abs_M32_0": abs(M32), "t31_dc": t31_dc(p.C_w, p.C_r)}


def q_half_width(scn):
    hw = half_width(scn.scatter)
    return {"half_width": hw.first, "half_width_outermost": hw.outermost}


def q_pulse_fidelity(scn):
    return {"pulse_fidelity": pulse_fidelity(scn.scatter, scn.sigma_w)}


QUANTITIES = {
    "fidelity": q_fidelity,
    "covariance": q_covariance,
    "g2": q_g2,
    "efficiency": q_efficiency,
    "transmission": q_transmission,
    "half_width": q_half_width,
    "pulse_fidelity": q_pulse_fidelity,
}


@dataclass
class Table:
    columns: list
    rows: list
    failures: int = 0
    meta: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _evaluate(task):
    raw, overrides, quantity = task
    try:
        return QUANTITIES[quantity](build_scenario(raw, overrides)), "ok"
    except (LevmemError, ArithmeticError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def default_jobs():
    return os.cpu_count() or 1


def run_sweep(cfg, axes, quantity, fixed=None, jobs=None):
    """Evaluate ``quantity`` on the Cartesian product of ``axes``.

    ``axes`` is a list of one or two axis specs (see :func:`axis_values`);
    ``fixed`` maps extra keys to constant values for every point.
    """
    if quantity not in QUANTITIES:
        raise ConfigError(f"unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}")
    if not 1 <= len(axes) <= 2:
        raise ConfigError("a sweep needs one or two axes")
    keys = [ax["key"] for ax in axes]
    grids = [axis_values(ax, f"axis {ax.get('key')!r}") for ax in axes]
    fixed = dict(fixed or {})
    points = list(itertools.product(*grids))
    tasks = [(cfg.raw, {**fixed, **dict(zip(keys, pt))}, quantity) for pt in points]

    jobs = jobs or cfg.raw["options"].get("jobs") or default_jobs()
    if jobs == 1 or len(tasks) < 2:
        results = [_evaluate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=chunk))

    names = None
    for values, status in results:
        if values is not None:
            names = list(values)
            break
    if names is None:
        names = [quantity]
    rows, failures = [], 0
    for pt, (values, status) in zip(points, results):
        if values is None:
            failures += 1
            rows.append(list(pt) + [None] * len(names) + [status])
        else:
            rows.append(list(pt) + [values[n] for n in names] + [status])
    return Table(columns=keys + names + ["status"], rows=rows, failures=failures,
                 meta={"quantity": quantity, "fixed": fixed})
