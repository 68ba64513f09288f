# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled implementation of the hot per-sample kernels.

Mirror of ``_fallback.py``: every numerical branch here must match the numpy
reference, and the test suite asserts columnwise agreement between the two.
"""

import numpy as np

from libc.math cimport atan2, fmax, fmin, sqrt, NAN

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)

BACKEND = "cython"

cdef double complex IMAG_UNIT = 1j
cdef double SERIES_CUT = 1e-3
cdef double SPLIT_CUT = 300.0


cdef inline double _clip01(double v) nogil:
    return fmax(0.0, fmin(1.0, v))


cdef void _fill_propagator(double gamma0, double complex alpha,
                           double complex om, double[::1] u,
                           double complex[::1] G, double complex[::1] Gd) nogil:
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double complex x, x2, pref, shc, ch, q, grow, decay, ep, em
    if gamma0 == 0.0:
        # exact identity channel (see _fallback.py)
        for i in range(n):
            G[i] = 1.0
            Gd[i] = 0.0
        return
    for i in range(n):
        x = om * u[i] / 2.0
        if creal(x) > SPLIT_CUT:
            q = alpha / om
            grow = cexp((om - alpha) * u[i] / 2.0)
            decay = cexp(-(om + alpha) * u[i] / 2.0)
            G[i] = 0.5 * ((1.0 + q) * grow + (1.0 - q) * decay)
            Gd[i] = -(gamma0 / om) * 0.5 * (grow - decay)
        else:
            if cabs(x) < SERIES_CUT:
                x2 = x * x
                shc = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0))
                ch = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0))
            else:
                ep = cexp(x)
                em = 1.0 / ep
                shc = 0.5 * (ep - em) / x
                ch = 0.5 * (ep + em)
            pref = cexp(-alpha * u[i] / 2.0)
            G[i] = pref * (alpha * (u[i] / 2.0) * shc + ch)
            Gd[i] = -gamma0 * (u[i] / 2.0) * pref * shc


cdef double complex _omega(double gamma0, double complex alpha) nogil:
    return csqrt(alpha * alpha - 2.0 * gamma0)


def propagator_table(double gamma0, double delta, times):
    """Decay amplitude G and dG/d(lambda t) on a time array."""
    cdef double[::1] u = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    G_arr = np.empty(n, dtype=np.complex128)
    Gd_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] G = G_arr
    cdef double complex[::1] Gd = Gd_arr
    cdef double complex alpha = 1.0 - IMAG_UNIT * delta
    cdef double complex om = _omega(gamma0, alpha)
    with nogil:
        _fill_propagator(gamma0, alpha, om, u, G, Gd)
    return G_arr, Gd_arr


def path_table(double gamma0, double delta, double rho_ee,
               double complex rho_eg, times):
    """All per-sample path quantities for one evolution, as a dict of arrays."""
    cdef double[::1] u = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]

    G_arr = np.empty(n, dtype=np.complex128)
    Gd_arr = np.empty(n, dtype=np.complex128)
    ee_arr = np.empty(n, dtype=np.float64)
    coh_arr = np.empty(n, dtype=np.complex128)
    eed_arr = np.empty(n, dtype=np.float64)
    cohd_arr = np.empty(n, dtype=np.complex128)
    nop_arr = np.empty(n, dtype=np.float64)
    fis_arr = np.empty(n, dtype=np.float64)
    flag_arr = np.zeros(n, dtype=np.uint8)
    spd_arr = np.empty(n, dtype=np.float64)
    comm_arr = np.empty(n, dtype=np.float64)
    qua_arr = np.empty(n, dtype=np.float64)
    ang_arr = np.empty(n, dtype=np.float64)
    di_arr = np.empty(n, dtype=np.float64)
    ds_arr = np.empty(n, dtype=np.float64)
    sa_arr = np.empty(n - 1 if n > 0 else 0, dtype=np.float64)

    cdef double complex[::1] G = G_arr
    cdef double complex[::1] Gd = Gd_arr
    cdef double[::1] ee = ee_arr
    cdef double complex[::1] coh = coh_arr
    cdef double[::1] eed = eed_arr
    cdef double complex[::1] cohd = cohd_arr
    cdef double[::1] nop = nop_arr
    cdef double[::1] fis = fis_arr
    cdef unsigned char[::1] flag = flag_arr
    cdef double[::1] spd = spd_arr
    cdef double[::1] comm = comm_arr
    cdef double[::1] qua = qua_arr
    cdef double[::1] ang = ang_arr
    cdef double[::1] di = di_arr
    cdef double[::1] ds = ds_arr
    cdef double[::1] sa = sa_arr

    cdef double complex alpha = 1.0 - IMAG_UNIT * delta
    cdef double complex om = _omega(gamma0, alpha)

    cdef double x0 = 2.0 * creal(rho_eg)
    cdef double y0 = -2.0 * cimag(rho_eg)
    cdef double z0 = 2.0 * rho_ee - 1.0
    cdef double det4_0 = 1.0 - (x0 * x0 + y0 * y0 + z0 * z0)
    # dets below rounding resolution are snapped to zero (see _fallback.py)
    cdef double rd40 = sqrt(det4_0) if det4_0 > 4e-14 else 0.0

    cdef Py_ssize_t i
    cdef double pop, pop_dot, det4, rd4c, radial, rd2, f2, sin2
    cdef double xt, yt, zt, xd, yd, zd, cx, cy, cz, qx, qy, qz
    cdef double px = 0.0, py = 0.0, pz = 0.0, prd4 = 0.0
    cdef double complex dcoh

    with nogil:
        _fill_propagator(gamma0, alpha, om, u, G, Gd)
        for i in range(n):
            pop = creal(G[i]) * creal(G[i]) + cimag(G[i]) * cimag(G[i])
            pop_dot = 2.0 * creal(conj(G[i]) * Gd[i])
            ee[i] = pop * rho_ee
            coh[i] = G[i] * rho_eg
            eed[i] = pop_dot * rho_ee
            dcoh = Gd[i] * rho_eg
            cohd[i] = dcoh
            nop[i] = sqrt(eed[i] * eed[i] + creal(dcoh) * creal(dcoh)
                          + cimag(dcoh) * cimag(dcoh))

            xt = 2.0 * creal(coh[i])
            yt = -2.0 * cimag(coh[i])
            zt = 2.0 * ee[i] - 1.0
            xd = 2.0 * creal(dcoh)
            yd = -2.0 * cimag(dcoh)
            zd = 2.0 * eed[i]

            det4 = 1.0 - (xt * xt + yt * yt + zt * zt)
            radial = xt * xd + yt * yd + zt * zd
            rd2 = xd * xd + yd * yd + zd * zd
            if det4 < 1e-12 and (radial if radial >= 0 else -radial) >= 1e-7:
                fis[i] = NAN
                spd[i] = NAN
                flag[i] = 1
            else:
                fis[i] = rd2 + radial * radial / fmax(det4, 1e-14)
                spd[i] = 0.5 * sqrt(fmax(fis[i], 0.0))
            if u[i] == 0.0 and det4_0 < 1e-12:
                fis[i] = 2.0 * gamma0 * rho_ee * rho_ee
                spd[i] = 0.5 * sqrt(fis[i])
                flag[i] = 0

            cx = y0 * zd - z0 * yd
            cy = z0 * xd - x0 * zd
            cz = x0 * yd - y0 * xd
            comm[i] = sqrt((cx * cx + cy * cy + cz * cz) / 2.0)

            qx = y0 * zt - z0 * yt
            qy = z0 * xt - x0 * zt
            qz = x0 * yt - y0 * xt
            qua[i] = qx * qx + qy * qy + qz * qz

            # Bures angle via atan2(sin L, cos L); sin^2 L is a sum of squares
            # (see _fallback.py), so tiny angles suffer no cancellation
            rd4c = sqrt(det4) if det4 > 4e-14 else 0.0
            f2 = 0.5 * (1.0 + (x0 * xt + y0 * yt + z0 * zt) + rd40 * rd4c)
            sin2 = 0.25 * ((xt - x0) * (xt - x0) + (yt - y0) * (yt - y0)
                           + (zt - z0) * (zt - z0) + (rd4c - rd40) * (rd4c - rd40))
            ang[i] = atan2(sqrt(sin2), sqrt(fmax(f2, 0.0)))

            di[i] = sqrt((ee[i] - rho_ee) * (ee[i] - rho_ee)
                         + creal(coh[i] - rho_eg) * creal(coh[i] - rho_eg)
                         + cimag(coh[i] - rho_eg) * cimag(coh[i] - rho_eg))
            ds[i] = sqrt(ee[i] * ee[i] + creal(coh[i]) * creal(coh[i])
                         + cimag(coh[i]) * cimag(coh[i]))

            if i > 0:
                f2 = 0.5 * (1.0 + (px * xt + py * yt + pz * zt) + prd4 * rd4c)
                sin2 = 0.25 * ((xt - px) * (xt - px) + (yt - py) * (yt - py)
                               + (zt - pz) * (zt - pz) + (rd4c - prd4) * (rd4c - prd4))
                sa[i - 1] = atan2(sqrt(sin2), sqrt(fmax(f2, 0.0)))
            px = xt
            py = yt
            pz = zt
            prd4 = rd4c

    return {
        "G": G_arr,
        "G_dot": Gd_arr,
        "excited": ee_arr,
        "coherence": coh_arr,
        "excited_dot": eed_arr,
        "coherence_dot": cohd_arr,
        "norm_op": nop_arr,
        "fisher": fis_arr,
        "fisher_flag": flag_arr.astype(bool),
        "speed": spd_arr,
        "comm_hs": comm_arr,
        "quantumness": qua_arr,
        "bures_angle_init": ang_arr,
        "dist_init": di_arr,
        "dist_stationary": ds_arr,
        "step_angle": sa_arr,
    }
