"""Pure backend for the special-function kernels.

Scalar functions use math/cmath; the *_arr variants are numpy-vectorized
twins used by the batched quadrature paths.  The compiled backend in
``_ckernels.pyx`` implements the same surface with C loops; ``kernels``
picks one at import time.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

BACKEND = "python"

_SQRT_PI = math.sqrt(math.pi)

# B_{2k}, k = 1..13
_B2K = (
    0.16666666666666666667, -0.033333333333333333333, 0.023809523809523809524,
    -0.033333333333333333333, 0.075757575757575757576, -0.25311355311355311355,
    1.1666666666666666667, -7.0921568627450980392, 54.971177944862155388,
    -529.12424242424242424, 6192.1231884057971014, -86580.253113553113553,
    1425517.1666666666667,
)


# ----------------------------------------------------------------------
# error function family
# ----------------------------------------------------------------------

def erf(x: float) -> float:
    """erf via a positive-term series for |x| <= 3, erfcx beyond."""
    if x < 0.0:
        return -erf(-x)
    if x <= 3.0:
        return _erf_series(x)
    return 1.0 - erfcx(x) * math.exp(-x * x)


def erfc(x: float) -> float:
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x <= 3.0:
        return 1.0 - _erf_series(x)
    return erfcx(x) * math.exp(-x * x)


def erfcx(x: float) -> float:
    """Scaled complementary error function e^{x^2} erfc(x)."""
    if x >= 3.0:
        return _erfcx_cf(x)
    if x >= 0.0:
        return math.exp(x * x) * (1.0 - _erf_series(x))
    # reflect; overflows for x << -26 as the true value does
    return 2.0 * math.exp(x * x) - erfcx(-x)


def _erf_series(x: float) -> float:
    # erf(x) = (2x/sqrt(pi)) e^{-x^2} sum_n (2x^2)^n / (2n+1)!!, all terms
    # positive so there is no cancellation
    x2 = 2.0 * x * x
    term = 1.0
    total = 1.0
    n = 0
    while term > 1e-18 * total:
        n += 1
        term *= x2 / (2 * n + 1)
        total += term
        if n > 300:
            break
    return (2.0 * x / _SQRT_PI) * math.exp(-x * x) * total


def _erfcx_cf(x: float) -> float:
    # Laplace continued fraction 1/(x + (1/2)/(x + (2/2)/(x + ...))),
    # modified Lentz evaluation
    tiny = 1e-300
    f = x if x != 0.0 else tiny
    c = f
    d = 0.0
    n = 0
    while n < 200:
        n += 1
        a = 0.5 * n
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return 1.0 / (_SQRT_PI * f)


def erf_arr(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    ax = np.abs(x)
    small = ax <= 3.0
    if np.any(small):
        out[small] = _erf_series_arr(ax[small])
    if np.any(~small):
        xl = ax[~small]
        out[~small] = 1.0 - _erfcx_cf_arr(xl) * np.exp(-xl * xl)
    return np.copysign(out, x) if x.ndim else math.copysign(float(out), float(x))


def erfc_arr(x):
    x = np.asarray(x, dtype=float)
    return 1.0 - erf_arr(x)


def erfcx_arr(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x >= 3.0
    if np.any(big):
        out[big] = _erfcx_cf_arr(x[big])
    rest = ~big
    if np.any(rest):
        xr = x[rest]
        pos = 1.0 - _erf_series_arr(np.abs(xr))
        base = np.exp(xr * xr)
        out[rest] = np.where(xr >= 0.0, base * pos, 2.0 * base - base * pos)
    return out


def _erf_series_arr(x):
    x2 = 2.0 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for n in range(1, 300):
        term = term * x2 / (2 * n + 1)
        total += term
        if term.size == 0 or term.max() <= 1e-18 * total.min():
            break
    return (2.0 * x / _SQRT_PI) * np.exp(-x * x) * total


def _erfcx_cf_arr(x):
    tiny = 1e-300
    f = np.where(x != 0.0, x, tiny)
    c = f.copy()
    d = np.zeros_like(x)
    for n in range(1, 200):
        a = 0.5 * n
        d = x + a * d
        np.copyto(d, tiny, where=d == 0.0)
        c = x + a / c
        np.copyto(c, tiny, where=c == 0.0)
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < 1e-17):
            break
    return 1.0 / (_SQRT_PI * f)


# ----------------------------------------------------------------------
# digamma / log-gamma (complex)
# ----------------------------------------------------------------------

def digamma(z: complex) -> complex:
    """psi(z) by recurrence shift to Re >= 12 plus the Stirling series."""
    z = complex(z)
    acc = 0.0 + 0.0j
    while z.real < 12.0:
        acc -= 1.0 / z
        z += 1.0
    w2 = 1.0 / (z * z)
    s = 0.0 + 0.0j
    p = w2
    for k in range(8):
        s += _B2K[k] / (2 * (k + 1)) * p
        p *= w2
    return acc + cmath.log(z) - 0.5 / z - s


def digamma_arr(z):
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    zz = z.copy()
    for _ in range(64):
        mask = zz.real < 12.0
        if not mask.any():
            break
        acc[mask] -= 1.0 / zz[mask]
        zz[mask] += 1.0
    w2 = 1.0 / (zz * zz)
    s = np.zeros_like(zz)
    p = w2.copy()
    for k in range(8):
        s += _B2K[k] / (2 * (k + 1)) * p
        p = p * w2
    return acc + np.log(zz) - 0.5 / zz - s


def loggamma(z: complex) -> complex:
    """log Gamma by shift to Re >= 12 plus Stirling.

    Continuous on vertical lines in the right half-plane; for Re z <= 0 the
    value is correct modulo 2 pi i (its exponential is always exact), which
    is all the Gamma-ratio callers need.
    """
    z = complex(z)
    shift = 0.0 + 0.0j
    while z.real < 12.0:
        shift += cmath.log(z)
        z += 1.0
    s = 0.0 + 0.0j
    zp = 1.0 / z
    z2 = zp * zp
    for k in range(8):
        s += _B2K[k] / ((2 * k + 2) * (2 * k + 1)) * zp
        zp *= z2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi) + s - shift


# ----------------------------------------------------------------------
# Riemann zeta (complex) by Euler-Maclaurin
# ----------------------------------------------------------------------

def _em_terms(im_abs: float) -> int:
    # 12 Bernoulli corrections need 2 pi N comfortably above |Im s|
    return max(50, int(0.9 * im_abs) + 10)


def zeta_pair(s: complex):
    """Return (zeta(s), zeta'(s)) by Euler-Maclaurin continuation."""
    s = complex(s)
    n_terms = _em_terms(abs(s.imag))
    z = 0.0 + 0.0j
    zp = 0.0 + 0.0j
    for n in range(1, n_terms):
        ln = math.log(n)
        term = cmath.exp(-s * ln)
        z += term
        zp -= ln * term
    ln_n = math.log(n_terms)
    n_1s = cmath.exp((1.0 - s) * ln_n)      # N^{1-s}
    n_ms = cmath.exp(-s * ln_n)             # N^{-s}
    sm1 = s - 1.0
    z += n_1s / sm1 + 0.5 * n_ms
    zp += -n_1s * (ln_n / sm1 + 1.0 / (sm1 * sm1)) - 0.5 * ln_n * n_ms

    # correction terms B_{2k}/(2k)! * N^{1-s-2k} * (s)_{2k-1}
    fact = 1.0
    poch = 1.0 + 0.0j        # (s)_{2k-1} built incrementally
    dpoch = 0.0 + 0.0j
    npow = n_1s
    inv_n2 = 1.0 / (n_terms * n_terms)
    for k in range(1, 13):
        fact *= (2 * k - 1) * (2 * k)
        if k == 1:
            poch = s
            dpoch = 1.0 + 0.0j
        else:
            f1 = s + (2 * k - 3)
            f2 = s + (2 * k - 2)
            dpoch = dpoch * f1 * f2 + poch * (f1 + f2)
            poch = poch * f1 * f2
        npow *= inv_n2
        coeff = _B2K[k - 1] / fact
        z += coeff * npow * poch
        zp += coeff * npow * (dpoch - ln_n * poch)
    return z, zp


def zeta_pair_arr(s):
    """Vectorized (zeta, zeta') over an array of complex points."""
    s = np.asarray(s, dtype=complex)
    n_terms = _em_terms(float(np.max(np.abs(s.imag))) if s.size else 0.0)
    ns = np.arange(1, n_terms)
    lns = np.log(ns)
    mat = np.exp(-np.multiply.outer(lns, s))          # (N-1, m)
    z = mat.sum(axis=0)
    zp = -(lns[:, None] * mat).sum(axis=0)

    ln_n = math.log(n_terms)
    n_1s = np.exp((1.0 - s) * ln_n)
    n_ms = np.exp(-s * ln_n)
    sm1 = s - 1.0
    z = z + n_1s / sm1 + 0.5 * n_ms
    zp = zp - n_1s * (ln_n / sm1 + 1.0 / (sm1 * sm1)) - 0.5 * ln_n * n_ms

    fact = 1.0
    poch = np.ones_like(s)
    dpoch = np.zeros_like(s)
    npow = n_1s.copy()
    inv_n2 = 1.0 / (n_terms * n_terms)
    for k in range(1, 13):
        fact *= (2 * k - 1) * (2 * k)
        if k == 1:
            poch = s.copy()
            dpoch = np.ones_like(s)
        else:
            f1 = s + (2 * k - 3)
            f2 = s + (2 * k - 2)
            dpoch = dpoch * f1 * f2 + poch * (f1 + f2)
            poch = poch * f1 * f2
        npow = npow * inv_n2
        coeff = _B2K[k - 1] / fact
        z = z + coeff * npow * poch
        zp = zp + coeff * npow * (dpoch - ln_n * poch)
    return z, zp
