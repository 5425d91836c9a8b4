"""Retrieved photon number and zero-delay autocorrelation g2(0).

Both use the constant-pulse solution of the retrieved mode.  The noise
integrals G11, G22 (write window, mechanical decay) and G33 (read window,
readout decay) only ever appear multiplied by the matching attenuation
factor squared, so they are evaluated in their scaled form.
"""

import math
from dataclasses import dataclass

from .errors import UndefinedCorrelationError
from .gaussian import GaussianInputState, ProtocolSpec, attenuation_factors
from .integrals import g_integrals

__all__ = [
    "G2Inputs", "g_integrals", "printed_g_integrals", "mean_photon_retrieved",
    "fourth_moment_retrieved", "g2_zero", "squeezed_coherent_U",
]

DEFAULT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class G2Inputs:
    state: GaussianInputState
    proto: ProtocolSpec
    threshold: float = DEFAULT_THRESHOLD


def printed_g_integrals(G, decay, duration):
    """G11, G22 in the rational closed form.  Divides by ``decay``; kept for
    cross-checks, use :func:`g_integrals` for computation."""
    N1 = -math.expm1(2.0 * decay * duration)
    N2 = 1.0 - math.cos(2.0 * G * duration)
    N3 = math.sin(2.0 * G * duration)
    R = 4.0 * decay * (G * G + decay * decay)
    G11 = -(G * G * N1 + decay**2 * N2 + G * decay * N3) / R
    G22 = -(G * G * N1 + decay**2 * (2.0 * N1 - N2) - G * decay * N3) / R
    return G11, G22


def squeezed_coherent_U(alpha, r):
    """Normally ordered fourth moment <a+^2 a^2> of |alpha, r>."""
    alpha = complex(alpha)
    sh, ch = math.sinh(r), math.cosh(r)
    a2 = abs(alpha) ** 2
    return (
        sh * sh * ch * ch
        - 2.0 * (alpha * alpha).real * sh * ch
        + 2.0 * sh**4
        + 4.0 * a2 * sh * sh
        + a2 * a2
    )


def _pieces(inp):
    p = inp.proto.as_constant()
    _, eta_f, eta_r, _, _ = attenuation_factors(p)
    sw2 = math.sin(p.G_w * p.t_1s) ** 2
    cw2 = 1.0 - sw2
    sr2 = math.sin(p.G_r * p.t_2s) ** 2
    # eta_f^2 carries exp(-2 Gamma t_1s), exactly cancelling the growth of G11/G22
    shrink_f = math.exp(-2.0 * p.Gamma * p.t_f)
    G11, G22 = g_integrals(p.G_w, p.Gamma, p.t_1s, scaled=True)
    _, G33 = g_integrals(p.G_r, p.B_r, p.t_2s, scaled=True)
    return dict(
        p=p, w=(eta_r * eta_f) ** 2 * sr2, sw2=sw2, cw2=cw2,
        G11=eta_r**2 * shrink_f * G11, G22=eta_r**2 * shrink_f * G22, G33=G33,
    )


def mean_photon_retrieved(inp):
    """<a_re+ a_re> for a squeezed coherent signal, thermal mechanics and a
    vacuum readout mode."""
    s, q = inp.state, _pieces(inp)
    p, w = q["p"], q["w"]
    n_sig = abs(complex(s.alpha)) ** 2 + math.sinh(s.r) ** 2
    sr2 = math.sin(p.G_r * p.t_2s) ** 2
    return math.fsum([
        w * q["sw2"] * n_sig,
        w * q["cw2"] * s.N_mech,
        2.0 * p.B_r * q["G33"],
        2.0 * sr2 * (p.B * q["G11"] + (p.gamma_noise + p.F_noise) * q["G22"]),
    ])


def fourth_moment_retrieved(inp):
    """<a_re+^2 a_re^2> in its moment-factored form."""
    s, q = inp.state, _pieces(inp)
    p, w = q["p"], q["w"]
    sr4 = math.sin(p.G_r * p.t_2s) ** 4
    return math.fsum([
        w * w * q["sw2"] ** 2 * squeezed_coherent_U(s.alpha, s.r),
        8.0 * p.B_r**2 * q["G33"] ** 2,
        w * w * q["cw2"] ** 2 * s.N_mech**2,
        8.0 * (p.gamma_noise**2 + p.F_noise**2) * sr4 * q["G22"] ** 2,
        8.0 * p.B**2 * sr4 * q["G11"] ** 2,
    ])


def g2_zero(inp):
    n = mean_photon_retrieved(inp)
    if not n > inp.threshold:
        raise UndefinedCorrelationError(
            f"retrieved photon number {n:.3g} is below the threshold {inp.threshold:.3g}"
        )
    return fourth_moment_retrieved(inp) / (n * n)
