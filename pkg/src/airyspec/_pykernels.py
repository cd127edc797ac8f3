"""Pure numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` operation for operation.  They are selected
automatically when the compiled module is unavailable, or explicitly with
``AIRYSPEC_PURE_PYTHON=1``.
"""

import numpy as np

BACKEND = "python"

_SQRT_PI = np.sqrt(np.pi)
_CHUNK = 1 << 22

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 2.0 ** -53


def _taylor(x0, y0, d0, h, nterms):
    """Taylor-expand the Airy ODE solution about x0 and evaluate at x0 + h."""
    c = [y0, d0, 0.5 * x0 * y0]
    for m in range(1, nterms - 2):
        c.append((x0 * c[m] + c[m - 1]) / ((m + 2) * (m + 1)))
    y = c[-1]
    d = (len(c) - 1) * c[-1]
    for j in range(len(c) - 2, -1, -1):
        y = y * h + c[j]
        if j > 0:
            d = d * h + j * c[j]
    return y, d


def airy_eval(x, anchor_ai, anchor_aip, u, v, switch, step, x_uf, n_taylor):
    """Vectorized (Ai, Ai') for a float64 array.

    Anchored Taylor expansion inside (-switch, switch); asymptotic series
    outside; exact zero above ``x_uf``.
    """
    x = np.asarray(x, dtype=np.float64)
    ai = np.zeros_like(x)
    aip = np.zeros_like(x)

    inner = np.abs(x) < switch
    if inner.any():
        xi = x[inner]
        j = np.rint((xi + switch) / step).astype(np.int64)
        x0 = -switch + j * step
        y, d = _taylor(x0, anchor_ai[j], anchor_aip[j], xi - x0, n_taylor)
        ai[inner] = y
        aip[inner] = d

    pos = (x >= switch) & (x <= x_uf)
    if pos.any():
        xp = x[pos]
        zeta = (2.0 / 3.0) * xp * np.sqrt(xp)
        r = -1.0 / zeta
        su = np.full_like(xp, u[-1])
        sv = np.full_like(xp, v[-1])
        for k in range(len(u) - 2, -1, -1):
            su = su * r + u[k]
            sv = sv * r + v[k]
        q = np.sqrt(np.sqrt(xp))
        e = np.exp(-zeta) / (2.0 * _SQRT_PI)
        ai[pos] = e / q * su
        aip[pos] = -e * q * sv

    neg = x <= -switch
    if neg.any():
        xn = -x[neg]
        zeta = (2.0 / 3.0) * xn * np.sqrt(xn)
        r2 = -1.0 / (zeta * zeta)
        npair = len(u) // 2
        pu = np.full_like(xn, u[2 * npair - 2])
        qu = np.full_like(xn, u[2 * npair - 1])
        pv = np.full_like(xn, v[2 * npair - 2])
        qv = np.full_like(xn, v[2 * npair - 1])
        for k in range(npair - 2, -1, -1):
            pu = pu * r2 + u[2 * k]
            qu = qu * r2 + u[2 * k + 1]
            pv = pv * r2 + v[2 * k]
            qv = qv * r2 + v[2 * k + 1]
        qu = qu / zeta
        qv = qv / zeta
        phase = zeta - np.pi / 4
        c = np.cos(phase)
        s = np.sin(phase)
        q = np.sqrt(np.sqrt(xn))
        ai[neg] = (c * pu + s * qu) / (_SQRT_PI * q)
        aip[neg] = q * (s * pv - c * qv) / _SQRT_PI
    return ai, aip


def trig_sum(z, u, wg, kind):
    """out[i] = sum_j wg[j] * trig(z[i] * u[j]); kind 0 = cos, 1 = sin."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    rows = max(1, _CHUNK // max(1, len(u)))
    fn = np.cos if kind == 0 else np.sin
    for i in range(0, len(z), rows):
        zz = z[i:i + rows]
        out[i:i + rows] = fn(np.multiply.outer(zz, u)) @ wg
    return out


def _mix64(z):
    # uint64 arithmetic wraps by design
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def path_keys(seed, first, count):
    """Per-path stream keys derived from (seed, path index)."""
    base = _mix64(np.array([seed], dtype=np.uint64))[0]
    idx = np.arange(first, first + count, dtype=np.uint64) + np.uint64(1)
    with np.errstate(over="ignore"):
        return _mix64(base ^ _mix64(idx * GOLDEN))


def uniforms(keys, counter):
    """Uniform draws in (0, 1) at position ``counter`` of each path stream."""
    with np.errstate(over="ignore"):
        h = _mix64(keys + np.uint64(counter + 1) * GOLDEN)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def fk_path_values(x0, t, n_steps, first, count, seed, sampler, threads=1):
    """exp(-sum_j dt * X_{t_j}^2) per path, right-endpoint Riemann sum.

    sampler 0: direct Cauchy increments dt * tan(pi (U - 1/2)).
    sampler 1: Brownian motion (variance 2 per unit time) at 1/2-stable
    subordinator increments dt^2 / (2 Z^2).
    """
    dt = t / n_steps
    keys = path_keys(seed, first, count)
    x = np.full(count, x0, dtype=np.float64)
    acc = np.zeros(count, dtype=np.float64)
    with np.errstate(over="ignore"):
        for j in range(n_steps):
            if sampler == 0:
                u1 = uniforms(keys, 2 * j)
                x = x + dt * np.tan(np.pi * (u1 - 0.5))
            else:
                u1 = uniforms(keys, 2 * j)
                u2 = uniforms(keys, 2 * j + 1)
                rad = np.sqrt(-2.0 * np.log(u1))
                z_sub = rad * np.cos(2.0 * np.pi * u2)
                z_bm = rad * np.sin(2.0 * np.pi * u2)
                s = dt * dt / (2.0 * z_sub * z_sub)
                x = x + np.sqrt(2.0 * s) * z_bm
            acc = acc + x * x
    return np.exp(-dt * acc)
