# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sqrt, exp, cos, sin, tan, log, fabs, lround, M_PI
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

BACKEND = "compiled"

DEF MAX_TERMS = 64

cdef double SQRT_PI = 1.7724538509055160273
cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.1102230246251565e-16


cdef inline void _airy1(double x, const double* aai, const double* aaip,
                        const double* u, const double* v, int nu,
                        double switch, double step, double x_uf, int n_taylor,
                        double* ai, double* aip) noexcept nogil:
    cdef double c[MAX_TERMS]
    cdef double x0, h, y, d, zeta, r, su, sv, q, e, xn, r2, pu, qu, pv, qv, ph, cs, sn
    cdef int64_t j
    cdef int k, m, npair
    if fabs(x) < switch:
        j = lround((x + switch) / step)
        x0 = -switch + j * step
        h = x - x0
        c[0] = aai[j]
        c[1] = aaip[j]
        c[2] = 0.5 * x0 * c[0]
        for m in range(1, n_taylor - 2):
            c[m + 2] = (x0 * c[m] + c[m - 1]) / ((m + 2) * (m + 1))
        y = c[n_taylor - 1]
        d = (n_taylor - 1) * c[n_taylor - 1]
        for k in range(n_taylor - 2, -1, -1):
            y = y * h + c[k]
            if k > 0:
                d = d * h + k * c[k]
        ai[0] = y
        aip[0] = d
    elif x >= switch:
        if x > x_uf:
            ai[0] = 0.0
            aip[0] = 0.0
            return
        zeta = (2.0 / 3.0) * x * sqrt(x)
        r = -1.0 / zeta
        su = u[nu - 1]
        sv = v[nu - 1]
        for k in range(nu - 2, -1, -1):
            su = su * r + u[k]
            sv = sv * r + v[k]
        q = sqrt(sqrt(x))
        e = exp(-zeta) / (2.0 * SQRT_PI)
        ai[0] = e / q * su
        aip[0] = -e * q * sv
    else:
        xn = -x
        zeta = (2.0 / 3.0) * xn * sqrt(xn)
        r2 = -1.0 / (zeta * zeta)
        npair = nu // 2
        pu = u[2 * npair - 2]
        qu = u[2 * npair - 1]
        pv = v[2 * npair - 2]
        qv = v[2 * npair - 1]
        for k in range(npair - 2, -1, -1):
            pu = pu * r2 + u[2 * k]
            qu = qu * r2 + u[2 * k + 1]
            pv = pv * r2 + v[2 * k]
            qv = qv * r2 + v[2 * k + 1]
        qu = qu / zeta
        qv = qv / zeta
        ph = zeta - M_PI / 4
        cs = cos(ph)
        sn = sin(ph)
        q = sqrt(sqrt(xn))
        ai[0] = (cs * pu + sn * qu) / (SQRT_PI * q)
        aip[0] = q * (sn * pv - cs * qv) / SQRT_PI


def airy_eval(x, const double[::1] anchor_ai, const double[::1] anchor_aip, const double[::1] u,
              const double[::1] v, double switch, double step, double x_uf, int n_taylor):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    out_ai = np.empty(n, dtype=np.float64)
    out_aip = np.empty(n, dtype=np.float64)
    cdef double[::1] oa = out_ai
    cdef double[::1] ob = out_aip
    cdef int nu = u.shape[0]
    if n_taylor > MAX_TERMS or n_taylor < 4:
        raise ValueError("n_taylor out of range")
    with nogil:
        for i in range(n):
            _airy1(xv[i], &anchor_ai[0], &anchor_aip[0], &u[0], &v[0], nu,
                   switch, step, x_uf, n_taylor, &oa[i], &ob[i])
    shape = np.shape(x)
    return out_ai.reshape(shape), out_aip.reshape(shape)


def trig_sum(z, const double[::1] u, const double[::1] wg, int kind):
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef Py_ssize_t n = zv.shape[0], m = u.shape[0], i, j
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s, zi
    with nogil:
        for i in range(n):
            zi = zv[i]
            s = 0.0
            if kind == 0:
                for j in range(m):
                    s = s + wg[j] * cos(zi * u[j])
            else:
                for j in range(m):
                    s = s + wg[j] * sin(zi * u[j])
            o[i] = s
    return out.reshape(np.shape(z))


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t counter) noexcept nogil:
    cdef uint64_t h = _mix64(key + (counter + 1) * GOLDEN)
    return (<double>(h >> 11) + 0.5) * INV_2_53


def fk_path_values(double x0, double t, int64_t n_steps, int64_t first,
                   int64_t count, uint64_t seed, int sampler, int threads=1):
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef double dt = t / n_steps
    cdef uint64_t base = _mix64(seed)
    cdef Py_ssize_t p
    cdef int64_t j
    cdef uint64_t key
    cdef double x, acc, u1, u2, rad, zs, zb, s
    if threads < 1:
        threads = 1
    for p in prange(count, nogil=True, num_threads=threads, schedule="static"):
        key = _mix64(base ^ _mix64(<uint64_t>(first + p + 1) * GOLDEN))
        x = x0
        acc = 0.0
        for j in range(n_steps):
            if sampler == 0:
                u1 = _uniform(key, 2 * j)
                x = x + dt * tan(M_PI * (u1 - 0.5))
            else:
                u1 = _uniform(key, 2 * j)
                u2 = _uniform(key, 2 * j + 1)
                rad = sqrt(-2.0 * log(u1))
                zs = rad * cos(2.0 * M_PI * u2)
                zb = rad * sin(2.0 * M_PI * u2)
                s = dt * dt / (2.0 * zs * zs)
                x = x + sqrt(2.0 * s) * zb
            acc = acc + x * x
        o[p] = exp(-dt * acc)
    return out
