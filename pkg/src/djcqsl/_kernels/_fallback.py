"""Pure-numpy implementation of the hot per-sample kernels.

The compiled extension (``_core``) implements exactly the same contract; the
backend is chosen at import time in ``__init__``. Keep the two in lockstep:
every numerical branch here has a mirror in the .pyx file and the test suite
asserts columnwise agreement.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# |x| below this: evaluate sinh(x)/x and cosh(x) by series (removable 0/0,
# and (e^x - e^-x)/2 would cancel); series error at the cut is ~1e-25
_SERIES_CUT = 1e-3
# Re(x) above this: split the bracket into two decaying exponentials so that
# cosh/sinh never overflow (relevant only for lambda_t beyond ~600)
_SPLIT_CUT = 300.0


def propagator_table(gamma0: float, delta: float, times: np.ndarray):
    """Decay amplitude G and its derivative dG/d(lambda t) on a time array.

    G(t) = e^{-alpha u/2} [alpha (u/2) sinhc(x) + cosh(x)] with u = lambda t,
    alpha = 1 - i delta/lambda, x = (Omega/lambda) u/2, and the derivative
    collapses to dG/du = -(gamma0/lambda) (u/2) e^{-alpha u/2} sinhc(x).
    """
    u = np.asarray(times, dtype=float)
    if gamma0 == 0.0:
        # the bracket collapses against the prefactor identically; returning
        # the exact identity keeps frozen paths free of ulp-level jitter
        return np.ones(u.shape, dtype=complex), np.zeros(u.shape, dtype=complex)
    alpha = complex(1.0, -delta)
    om = np.sqrt(complex(alpha * alpha - 2.0 * gamma0))
    x = om * u / 2.0

    G = np.empty(u.shape, dtype=complex)
    G_dot = np.empty(u.shape, dtype=complex)

    big = x.real > _SPLIT_CUT
    reg = ~big

    xr = x[reg]
    ur = u[reg]
    shc = np.empty(xr.shape, dtype=complex)
    ch = np.empty(xr.shape, dtype=complex)
    small = np.abs(xr) < _SERIES_CUT
    xs2 = xr[small] ** 2
    shc[small] = 1.0 + xs2 / 6.0 * (1.0 + xs2 / 20.0 * (1.0 + xs2 / 42.0))
    ch[small] = 1.0 + xs2 / 2.0 * (1.0 + xs2 / 12.0 * (1.0 + xs2 / 30.0))
    xl = xr[~small]
    ep = np.exp(xl)
    em = 1.0 / ep
    shc[~small] = 0.5 * (ep - em) / xl
    ch[~small] = 0.5 * (ep + em)
    pref = np.exp(-alpha * ur / 2.0)
    G[reg] = pref * (alpha * (ur / 2.0) * shc + ch)
    G_dot[reg] = -gamma0 * (ur / 2.0) * pref * shc

    if np.any(big):
        ub = u[big]
        q = alpha / om
        grow = np.exp((om - alpha) * ub / 2.0)    # Re(om) <= Re(alpha): decays
        decay = np.exp(-(om + alpha) * ub / 2.0)
        G[big] = 0.5 * ((1.0 + q) * grow + (1.0 - q) * decay)
        G_dot[big] = -(gamma0 / om) * 0.5 * (grow - decay)

    return G, G_dot


def path_table(gamma0: float, delta: float, rho_ee: float, rho_eg: complex,
               times: np.ndarray):
    """All per-sample path quantities for one evolution, as a dict of arrays.

    Returned keys: G, G_dot, excited, coherence, excited_dot, coherence_dot,
    norm_op, fisher, fisher_flag, speed, comm_hs, quantumness,
    bures_angle_init, dist_init, dist_stationary, step_angle (length n-1).
    """
    u = np.asarray(times, dtype=float)
    G, G_dot = propagator_table(gamma0, delta, u)

    pop = np.abs(G) ** 2
    pop_dot = 2.0 * np.real(np.conj(G) * G_dot)
    ee = pop * rho_ee
    coh = G * rho_eg
    ee_dot = pop_dot * rho_ee
    coh_dot = G_dot * rho_eg

    norm_op = np.sqrt(ee_dot * ee_dot + np.abs(coh_dot) ** 2)

    # Bloch coordinates: rho = (I + r.sigma)/2 so r = (2 Re c, -2 Im c, 2 ee - 1)
    xt = 2.0 * np.real(coh)
    yt = -2.0 * np.imag(coh)
    zt = 2.0 * ee - 1.0
    xd = 2.0 * np.real(coh_dot)
    yd = -2.0 * np.imag(coh_dot)
    zd = 2.0 * ee_dot
    x0 = 2.0 * rho_eg.real
    y0 = -2.0 * rho_eg.imag
    z0 = 2.0 * rho_ee - 1.0

    det4 = 1.0 - (xt * xt + yt * yt + zt * zt)       # 4 det(rho_t)
    det4_0 = 1.0 - (x0 * x0 + y0 * y0 + z0 * z0)
    radial = xt * xd + yt * yd + zt * zd             # r . dr/du
    rd2 = xd * xd + yd * yd + zd * zd

    # Bloch form of the quantum Fisher information with the pure-state guard:
    # the radial term is a removable 0/0 on analytic paths, so a clamped
    # denominator is used while |r.rdot| stays small; otherwise the sample is
    # flagged and the caller substitutes a finite-angle estimate.
    bad = (det4 < 1e-12) & (np.abs(radial) >= 1e-7)
    fisher = rd2 + radial * radial / np.maximum(det4, 1e-14)
    fisher[bad] = np.nan
    at_zero = (u == 0.0) & (det4_0 < 1e-12)
    if np.any(at_zero):
        # exact limit of the radial term as a pure state leaves the boundary
        fisher[at_zero] = 2.0 * gamma0 * rho_ee * rho_ee
        bad[at_zero] = False
    speed = 0.5 * np.sqrt(np.where(np.isnan(fisher), 0.0, np.maximum(fisher, 0.0)))
    speed[bad] = np.nan

    # ||[rho0, rho_dot]||_hs = |r0 x rdot| / sqrt(2)
    cx = y0 * zd - z0 * yd
    cy = z0 * xd - x0 * zd
    cz = x0 * yd - y0 * xd
    comm_hs = np.sqrt((cx * cx + cy * cy + cz * cz) / 2.0)

    # Q(rho0, rho_t) = |r0 x r_t|^2
    qx = y0 * zt - z0 * yt
    qy = z0 * xt - x0 * zt
    qz = x0 * yt - y0 * xt
    quant = qx * qx + qy * qy + qz * qz

    # Bures angle via atan2(sin L, cos L): cos^2 L is the Hubner fidelity
    # squared and sin^2 L = [|r1-r2|^2 + (sqrt(d1)-sqrt(d2))^2]/4 exactly, a
    # sum of squares, so tiny angles suffer no acos-near-1 cancellation.
    # Determinants below 1e-14 (4e-14 on det4) are rounding noise on pure
    # states; the sqrt would amplify them to ~1e-8 phantom angles.
    rd4c = np.sqrt(np.where(det4 > 4e-14, det4, 0.0))
    rd40 = math.sqrt(det4_0) if det4_0 > 4e-14 else 0.0
    f2 = 0.5 * (1.0 + (x0 * xt + y0 * yt + z0 * zt) + rd40 * rd4c)
    sin2 = 0.25 * ((xt - x0) ** 2 + (yt - y0) ** 2 + (zt - z0) ** 2
                   + (rd4c - rd40) ** 2)
    angle_init = np.arctan2(np.sqrt(sin2), np.sqrt(np.maximum(f2, 0.0)))

    dist_init = np.sqrt((ee - rho_ee) ** 2 + np.abs(coh - rho_eg) ** 2)
    dist_stationary = np.sqrt(ee * ee + np.abs(coh) ** 2)

    dots = xt[:-1] * xt[1:] + yt[:-1] * yt[1:] + zt[:-1] * zt[1:]
    f2s = 0.5 * (1.0 + dots + rd4c[:-1] * rd4c[1:])
    sin2s = 0.25 * (np.diff(xt) ** 2 + np.diff(yt) ** 2 + np.diff(zt) ** 2
                    + np.diff(rd4c) ** 2)
    step_angle = np.arctan2(np.sqrt(sin2s), np.sqrt(np.maximum(f2s, 0.0)))

    return {
        "G": G,
        "G_dot": G_dot,
        "excited": ee,
        "coherence": coh,
        "excited_dot": ee_dot,
        "coherence_dot": coh_dot,
        "norm_op": norm_op,
        "fisher": fisher,
        "fisher_flag": bad,
        "speed": speed,
        "comm_hs": comm_hs,
        "quantumness": quant,
        "bures_angle_init": angle_init,
        "dist_init": dist_init,
        "dist_stationary": dist_stationary,
        "step_angle": step_angle,
    }
