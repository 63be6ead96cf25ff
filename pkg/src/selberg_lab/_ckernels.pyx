# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the special-function kernels.

Same surface as ``_pykernels``; scalar kernels are C loops, the *_arr
variants loop the scalar kernels over contiguous buffers.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, sqrt, copysign, fabs, M_PI

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

BACKEND = "compiled"

cdef double SQRT_PI = sqrt(M_PI)

cdef double[13] B2K
B2K[0] = 0.16666666666666666667
B2K[1] = -0.033333333333333333333
B2K[2] = 0.023809523809523809524
B2K[3] = -0.033333333333333333333
B2K[4] = 0.075757575757575757576
B2K[5] = -0.25311355311355311355
B2K[6] = 1.1666666666666666667
B2K[7] = -7.0921568627450980392
B2K[8] = 54.971177944862155388
B2K[9] = -529.12424242424242424
B2K[10] = 6192.1231884057971014
B2K[11] = -86580.253113553113553
B2K[12] = 1425517.1666666666667


# ----------------------------------------------------------------------
# error function family
# ----------------------------------------------------------------------

cdef double _erf_series(double x) nogil:
    cdef double x2 = 2.0 * x * x
    cdef double term = 1.0
    cdef double total = 1.0
    cdef int n = 0
    while term > 1e-18 * total and n < 300:
        n += 1
        term *= x2 / (2 * n + 1)
        total += term
    return (2.0 * x / SQRT_PI) * exp(-x * x) * total


cdef double _erfcx_cf(double x) nogil:
    cdef double tiny = 1e-300
    cdef double f = x if x != 0.0 else tiny
    cdef double c = f
    cdef double d = 0.0
    cdef double a, delta
    cdef int n = 0
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
        if fabs(delta - 1.0) < 1e-17:
            break
    return 1.0 / (SQRT_PI * f)


cdef double c_erf(double x) nogil:
    if x < 0.0:
        return -c_erf(-x)
    if x <= 3.0:
        return _erf_series(x)
    return 1.0 - _erfcx_cf(x) * exp(-x * x)


cdef double c_erfc(double x) nogil:
    if x < 0.0:
        return 2.0 - c_erfc(-x)
    if x <= 3.0:
        return 1.0 - _erf_series(x)
    return _erfcx_cf(x) * exp(-x * x)


cdef double c_erfcx(double x) nogil:
    if x >= 3.0:
        return _erfcx_cf(x)
    if x >= 0.0:
        return exp(x * x) * (1.0 - _erf_series(x))
    return 2.0 * exp(x * x) - c_erfcx(-x)


def erf(double x):
    return c_erf(x)


def erfc(double x):
    return c_erfc(x)


def erfcx(double x):
    return c_erfcx(x)


def erf_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xv.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = c_erf(xv[i])
    return out.reshape(np.shape(x))


def erfc_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xv.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = c_erfc(xv[i])
    return out.reshape(np.shape(x))


def erfcx_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xv.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = c_erfcx(xv[i])
    return out.reshape(np.shape(x))


# ----------------------------------------------------------------------
# digamma / log-gamma
# ----------------------------------------------------------------------

cdef double complex c_digamma(double complex z) nogil:
    cdef double complex acc = 0.0
    cdef double complex w2, s, p
    cdef int k
    while creal(z) < 12.0:
        acc -= 1.0 / z
        z += 1.0
    w2 = 1.0 / (z * z)
    s = 0.0
    p = w2
    for k in range(8):
        s += B2K[k] / (2.0 * (k + 1)) * p
        p *= w2
    return acc + clog(z) - 0.5 / z - s


def digamma(z):
    return c_digamma(complex(z))


def digamma_arr(z):
    cdef cnp.ndarray[double complex, ndim=1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef cnp.ndarray[double complex, ndim=1] out = np.empty(zv.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i
    for i in range(zv.shape[0]):
        out[i] = c_digamma(zv[i])
    return out.reshape(np.shape(z))


def loggamma(z):
    cdef double complex zz = complex(z)
    cdef double complex shift = 0.0
    cdef double complex s, zp, z2
    cdef int k
    while creal(zz) < 12.0:
        shift += clog(zz)
        zz += 1.0
    s = 0.0
    zp = 1.0 / zz
    z2 = zp * zp
    for k in range(8):
        s += B2K[k] / ((2.0 * k + 2) * (2.0 * k + 1)) * zp
        zp *= z2
    return (zz - 0.5) * clog(zz) - zz + 0.5 * log(2.0 * M_PI) + s - shift


# ----------------------------------------------------------------------
# Riemann zeta by Euler-Maclaurin
# ----------------------------------------------------------------------

cdef int _em_terms(double im_abs) nogil:
    cdef int n = <int>(0.9 * im_abs) + 10
    return n if n > 50 else 50


cdef void c_zeta_pair(double complex s, double complex *zout, double complex *zpout) nogil:
    cdef int n_terms = _em_terms(fabs(cimag(s)))
    cdef double complex z = 0.0
    cdef double complex zp = 0.0
    cdef double complex term, n_1s, n_ms, sm1, poch, dpoch, npow, f1, f2
    cdef double ln, ln_n, fact, inv_n2, coeff
    cdef int n, k
    for n in range(1, n_terms):
        ln = log(n)
        term = cexp(-s * ln)
        z += term
        zp -= ln * term
    ln_n = log(n_terms)
    n_1s = cexp((1.0 - s) * ln_n)
    n_ms = cexp(-s * ln_n)
    sm1 = s - 1.0
    z += n_1s / sm1 + 0.5 * n_ms
    zp += -n_1s * (ln_n / sm1 + 1.0 / (sm1 * sm1)) - 0.5 * ln_n * n_ms

    fact = 1.0
    poch = 1.0
    dpoch = 0.0
    npow = n_1s
    inv_n2 = 1.0 / (<double>n_terms * <double>n_terms)
    for k in range(1, 13):
        fact *= (2 * k - 1) * (2 * k)
        if k == 1:
            poch = s
            dpoch = 1.0
        else:
            f1 = s + (2 * k - 3)
            f2 = s + (2 * k - 2)
            dpoch = dpoch * f1 * f2 + poch * (f1 + f2)
            poch = poch * f1 * f2
        npow *= inv_n2
        coeff = B2K[k - 1] / fact
        z += coeff * npow * poch
        zp += coeff * npow * (dpoch - ln_n * poch)
    zout[0] = z
    zpout[0] = zp


def zeta_pair(s):
    cdef double complex z, zp
    c_zeta_pair(complex(s), &z, &zp)
    return z, zp


def zeta_pair_arr(s):
    cdef cnp.ndarray[double complex, ndim=1] sv = np.ascontiguousarray(s, dtype=np.complex128).ravel()
    cdef cnp.ndarray[double complex, ndim=1] z = np.empty(sv.shape[0], dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] zp = np.empty(sv.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i
    cdef double complex a, b
    for i in range(sv.shape[0]):
        c_zeta_pair(sv[i], &a, &b)
        z[i] = a
        zp[i] = b
    return z.reshape(np.shape(s)), zp.reshape(np.shape(s))
