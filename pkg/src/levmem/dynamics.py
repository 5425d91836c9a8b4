"""Second-order moment dynamics of the write / store / read sequence.

State: n_opt = <a+a>, n_mech = <b+b>, coh = <b+a>.  The fourth moment
<a+b> is the complex conjugate of coh and is never stored separately.

    d n_opt/dt  = -2B n_opt  - 2G Im(coh) + S(t)
    d n_mech/dt = -2Gam n_mech + 2G Im(coh) + 2(gamma + F)
    d coh/dt    = -(i Delta + B + Gam) coh + i G (n_opt - n_mech)

G(t) is the sum of the write and read envelopes and S(t) = 4 B I_in(t) is
the signal photon flux.  The optical damping B switches from the write value
to the read value at ``switch_time``.  By default the optical moments are
also reset there: the read pulse scatters into a fresh readout mode that
starts in vacuum, and whatever signal light was not stored leaves in its
own channel (recorded as ``signal_residual`` in the metadata).
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, NumericalError
from .pulses import envelope, support


@dataclass(frozen=True)
class MomentRates:
    B_write: float
    B_read: float
    Gamma: float
    gamma_noise: float = 0.0
    F_noise: float = 0.0
    Delta: float = 0.0

    @classmethod
    def from_derived(cls, rates, params):
        return cls(
            B_write=rates.B_write_total, B_read=rates.B_read, Gamma=rates.Gamma,
            gamma_noise=rates.gamma_noise, F_noise=rates.F_noise, Delta=params.detuning_Delta,
        )


@dataclass
class MomentTrace:
    times: np.ndarray
    n_opt: np.ndarray
    n_mech: np.ndarray
    coh: np.ndarray
    G_w: np.ndarray
    G_r: np.ndarray
    source: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def coh_conj(self):
        return np.conj(self.coh)

    def __len__(self):
        return len(self.times)

    def rows(self):
        """(t, n_opt, n_mech, Re coh, Im coh, G_w, G_r) tuples."""
        return zip(
            self.times, self.n_opt, self.n_mech, self.coh.real, self.coh.imag, self.G_w, self.G_r
        )


def _digest(obj):
    text = json.dumps(obj, sort_keys=True, default=repr)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _breakpoints(t0, t1, pulses, switch_time):
    points = {t0, t1}
    if switch_time is not None and t0 < switch_time < t1:
        points.add(switch_time)
    for p in pulses:
        if p is not None and p.shape == "constant":
            for edge in support(p):
                if t0 < edge < t1:
                    points.add(edge)
    return sorted(points)


def integrate_moments(
    rates, write, read, signal=None, t_grid=(0.0, 1.2e-3, 1e-6), tol=1e-9,
    initial=(0.0, 0.0, 0j), switch_time=None, max_step=None, fresh_readout_mode=True,
):
    """Integrate the moment equations and sample them on a uniform grid.

    ``t_grid`` is (t0, t1, step).  ``initial`` is (n_opt, n_mech, coh) at t0.
    The optical damping switch defaults to halfway between the write and
    read pulse centres.
    """
    t0, t1, step = t_grid
    if not t1 > t0:
        raise ValueError("t_grid needs t0 < t1")
    if not (tol > 0 and step > 0):
        raise ValueError("tol and grid step must be > 0")
    n_out = int(math.floor((t1 - t0) / step + 1e-9)) + 1
    times = t0 + step * np.arange(n_out)
    if switch_time is None:
        switch_time = 0.5 * (write.center + read.center)
    if max_step is None:
        widths = [p.width for p in (write, read, signal) if p is not None]
        max_step = 0.25 * min(widths)

    g2 = 2.0 * (rates.gamma_noise + rates.F_noise)

    def make_rhs(B):
        Bsum = B + rates.Gamma

        def rhs(t, y):
            n_a, n_b, cr, ci = y
            G = envelope(write, t) + envelope(read, t)
            S = envelope(signal, t) if signal is not None else 0.0
            return [
                -2.0 * B * n_a - 2.0 * G * ci + S,
                -2.0 * rates.Gamma * n_b + 2.0 * G * ci + g2,
                -Bsum * cr + rates.Delta * ci,
                -Bsum * ci - rates.Delta * cr + G * (n_a - n_b),
            ]

        return rhs

    n_a0, n_b0, c0 = initial
    y = np.array([n_a0, n_b0, complex(c0).real, complex(c0).imag], dtype=float)
    out = np.empty((n_out, 4))
    nfev = 0
    signal_residual = None
    edges = _breakpoints(t0, t1, (write, read, signal), switch_time)
    for a, b in zip(edges[:-1], edges[1:]):
        B = rates.B_write if a < switch_time else rates.B_read
        if a == switch_time and fresh_readout_mode:
            signal_residual = float(y[0])
            y = np.array([0.0, y[1], 0.0, 0.0])
        last = b == edges[-1]
        mask = (times >= a) & ((times <= b) if last else (times < b))
        pts = times[mask]
        t_eval = pts if pts.size and pts[-1] == b else np.append(pts, b)
        sol = solve_ivp(
            make_rhs(B), (a, b), y, method="RK45", rtol=tol, atol=tol,
            t_eval=t_eval, max_step=max_step,
        )
        nfev += sol.nfev
        if sol.status != 0:
            t_fail = float(sol.t[-1]) if sol.t.size else a
            raise IntegrationError(sol.message, t=t_fail)
        out[mask] = sol.y[:, : pts.size].T
        y = sol.y[:, -1]
        if not np.all(np.isfinite(sol.y)):
            raise NumericalError(f"non-finite moment in segment [{a}, {b}]")
    floor = -100.0 * tol
    for name, col in (("n_opt", 0), ("n_mech", 1)):
        bad = np.nonzero(out[:, col] < floor)[0]
        if bad.size:
            i = bad[0]
            raise NumericalError(f"{name} = {out[i, col]:.3g} < 0 at t = {times[i]:.6g} s")

    G_w = envelope(write, times)
    G_r = envelope(read, times)
    source = envelope(signal, times) if signal is not None else np.zeros_like(times)
    meta = {
        "digest": _digest([asdict(rates), asdict(write), asdict(read),
                           asdict(signal) if signal else None, list(t_grid), tol,
                           [n_a0, n_b0, repr(c0)], switch_time]),
        "nfev": nfev,
        "tol": tol,
        "switch_time": switch_time,
        "signal_residual": signal_residual,
    }
    return MomentTrace(
        times=times, n_opt=out[:, 0], n_mech=out[:, 1], coh=out[:, 2] + 1j * out[:, 3],
        G_w=np.asarray(G_w, dtype=float), G_r=np.asarray(G_r, dtype=float),
        source=np.asarray(source, dtype=float), metadata=meta,
    )


def _window_peak(t, values, window):
    lo, hi = window
    sel = (t >= lo) & (t <= hi)
    if not sel.any():
        return None
    return float(values[sel].max())


def storage_retrieval_trace(trace, write=None, read=None, raw=False, windows=None, n_sigma=4.0):
    """Power traces for plotting plus a retrieval efficiency.

    ``optical_power`` is the photon flux seen on the optical side: incoming
    signal flux plus the flux converted out of the mechanics (clipped at
    zero, so storage shows up only in ``mechanical_power``).
    ``mechanical_power`` is n_mech.  Both are normalised to unit peak
    unless ``raw``.

    ``efficiency`` is the n_opt peak in the read window over the n_opt peak
    in the write window; None when the write-window peak is zero.  Windows
    default to pulse centre +- n_sigma widths.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    G = trace.G_w + trace.G_r
    conversion = np.clip(-2.0 * G * trace.coh.imag, 0.0, None)
    optical = trace.source + conversion
    mechanical = np.array(trace.n_mech, copy=True)
    if not raw:
        for arr in (optical, mechanical):
            peak = arr.max()
            if peak > 0:
                arr /= peak
    if windows is None:
        if write is None or read is None:
            raise ValueError("need pulses or explicit windows for the efficiency")
        windows = (
            (write.center - n_sigma * write.width, write.center + n_sigma * write.width),
            (read.center - n_sigma * read.width, read.center + n_sigma * read.width),
        )
    w_peak = _window_peak(trace.times, trace.n_opt, windows[0])
    r_peak = _window_peak(trace.times, trace.n_opt, windows[1])
    efficiency = r_peak / w_peak if w_peak and r_peak is not None else None
    return {
        "t": trace.times,
        "optical_power": optical,
        "mechanical_power": mechanical,
        "G_w": trace.G_w,
        "G_r": trace.G_r,
        "efficiency": efficiency,
    }
