"""Arbitrary-precision reference values for the Airy function.

Taylor-steps y'' = x y in mpmath from the exact values at the origin,
Ai(0) = 3^(-2/3)/Gamma(2/3) and Ai'(0) = -3^(-1/3)/Gamma(1/3).  Nothing here
imports the production package.
"""

import functools

import mpmath as mp


def _working_dps(x):
    # Forward stepping to x > 0 amplifies the Bi contamination by ~exp(4/3 x^1.5).
    growth = 0.0
    if x > 0:
        growth = float(4.0 / 3.0 * x ** 1.5) / 2.302585
    return int(40 + growth)


def _step(x0, y0, d0, h, tol):
    c = [y0, d0, x0 * y0 / 2]
    while True:
        # c_{m+2} (m+2)(m+1) = x0 c_m + c_{m-1}
        m = len(c) - 2
        c.append((x0 * c[m] + c[m - 1]) / ((m + 2) * (m + 1)))
        k = len(c) - 1
        if k > 12 and abs(c[-1]) * abs(h) ** k < tol and abs(c[-2]) * abs(h) ** (k - 1) < tol:
            break
    y = mp.mpf(0)
    d = mp.mpf(0)
    for j in range(len(c) - 1, -1, -1):
        y = y * h + c[j]
    for j in range(len(c) - 1, 0, -1):
        d = d * h + j * c[j]
    return y, d


@functools.lru_cache(maxsize=4096)
def airy_pair(x, step=0.25):
    """Return (Ai(x), Ai'(x)) as mpf values for a float (or str) x."""
    x = mp.mpf(x)
    with mp.workdps(_working_dps(float(x))):
        y = 1 / (mp.power(3, mp.mpf(2) / 3) * mp.gamma(mp.mpf(2) / 3))
        d = -1 / (mp.power(3, mp.mpf(1) / 3) * mp.gamma(mp.mpf(1) / 3))
        tol = mp.mpf(10) ** (-mp.mp.dps)
        pos = mp.mpf(0)
        n = int(mp.ceil(abs(x) / step))
        if n == 0:
            return +y, +d
        h = x / n
        for _ in range(n):
            y, d = _step(pos, y, d, h, tol)
            pos += h
        return +y, +d


def ai(x):
    return airy_pair(x)[0]


def ai_prime(x):
    return airy_pair(x)[1]
