"""Special-function surface and adaptive quadrature used by every module.

All integrands are array-in/array-out callables so that panel rules can be
evaluated in one batch.  Quadrature is adaptive Gauss-Kronrod (7,15) with
interval bisection; semi-infinite integrals append doubling panels until a
decay-hint tail bound drops below tol/100; oscillatory integrals use fixed
panels of length pi/omega so that cancellation stays local.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NonConvergence, PoleError

_GK_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_GK_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
# embedded 7-point Gauss weights sit on the odd-index nodes
_GK_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


@dataclass(frozen=True)
class QuadratureResult:
    """Value, its error estimate, and the number of integrand evaluations."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0 or self.evaluations < 1:
            raise DomainError("malformed quadrature result")


def _panel(f, a: float, b: float):
    """One GK(7,15) panel: returns (kronrod, |kronrod - gauss|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = f(mid + half * _GK_NODES)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError(f"integrand returned non-finite values on [{a}, {b}]")
    k = half * float(np.dot(_GK_WK, y))
    g = half * float(np.dot(_GK_WG, y[1::2]))
    return k, abs(k - g)


def _adaptive(f, a: float, b: float, tol: float, max_panels: int = 4000):
    """Adaptive bisection on [a, b]; returns (value, error, evaluations)."""
    val, err = _panel(f, a, b)
    heap = [(-err, a, b, val, err)]
    total_val, total_err, evals, n_panels = val, err, 15, 1
    while total_err > tol and n_panels < max_panels:
        neg_err, pa, pb, pval, perr = heapq.heappop(heap)
        if perr <= 1e-3 * tol / max(1, n_panels) or pb - pa < 1e-14 * max(1.0, abs(pa)):
            heapq.heappush(heap, (0.0, pa, pb, pval, perr))
            break
        mid = 0.5 * (pa + pb)
        v1, e1 = _panel(f, pa, mid)
        v2, e2 = _panel(f, mid, pb)
        total_val += v1 + v2 - pval
        total_err += e1 + e2 - perr
        evals += 30
        n_panels += 1
        heapq.heappush(heap, (-e1, pa, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, pb, v2, e2))
    return total_val, total_err, evals


def integrate_finite(f, a: float, b: float, tol: float = 1e-10) -> QuadratureResult:
    """Adaptive integral of an array-callable over a finite interval."""
    if b < a:
        r = integrate_finite(f, b, a, tol)
        return QuadratureResult(-r.value, r.error_estimate, r.evaluations)
    if a == b:
        return QuadratureResult(0.0, 0.0, 1)
    val, err, evals = _adaptive(f, a, b, tol)
    if err > 50 * max(tol, 1e-15 * abs(val)):
        raise NonConvergence(
            f"finite-interval refinement stalled (error {err:.2e} > tol {tol:.2e})")
    return QuadratureResult(val, err, evals)


def integrate_semi_infinite(f, decay_hint: str = "exponential",
                            tol: float = 1e-10, start: float = 0.0) -> QuadratureResult:
    """Integral over [start, oo) with truncation governed by decay_hint.

    decay_hint is one of gaussian | exponential | algebraic; the doubling
    panels stop once the extrapolated tail bound falls below tol/100.  The
    algebraic case maps the tail onto a finite interval instead of relying
    on truncation.
    """
    if not (1e-14 < tol < 1e-2):
        raise DomainError(f"tol must lie in (1e-14, 1e-2), got {tol}")
    if decay_hint not in ("gaussian", "exponential", "algebraic"):
        raise DomainError(f"unknown decay hint {decay_hint!r}")

    edges = [start, start + 1.0]
    while edges[-1] < start + {"gaussian": 1024.0, "exponential": 1024.0,
                               "algebraic": 64.0}[decay_hint]:
        edges.append(start + 2.0 * (edges[-1] - start))

    total, err_total, evals = 0.0, 0.0, 0
    scale = 0.0
    prev_mag = None
    tail_bound = math.inf
    for a, b in zip(edges[:-1], edges[1:]):
        val, err, ev = _adaptive(f, a, b, tol / 4)
        total += val
        err_total += err
        evals += ev
        scale = max(scale, abs(total))
        mag = abs(val)
        if prev_mag is not None and prev_mag > 0 and mag > 0:
            ratio = min(mag / prev_mag, 0.9)
            tail_bound = mag * ratio / (1.0 - ratio)
        elif mag == 0.0:
            tail_bound = 0.0
        prev_mag = mag
        if tail_bound < tol / 100 * max(1.0, scale) and mag < tol / 100 * max(1.0, scale):
            break
    else:
        if decay_hint == "algebraic":
            # fold the remaining tail [X, oo) onto (0, 1/X]
            big_x = edges[-1]

            def folded(u, _f=f, _X=big_x):
                u = np.asarray(u, dtype=float)
                return _f(1.0 / u) / (u * u)

            val, err, ev = _adaptive(folded, 1e-300 ** 0.5, 1.0 / big_x, tol / 4)
            total += val
            err_total += err
            evals += ev
            tail_bound = 0.0
        else:
            raise NonConvergence(
                f"semi-infinite tail still {tail_bound:.2e} at x = {edges[-1]:.1f}; "
                "decay hint may be wrong")

    err_total += 0.0 if math.isinf(tail_bound) else tail_bound
    if err_total > 50 * max(tol, 1e-15 * abs(total)):
        raise NonConvergence(
            f"semi-infinite refinement stalled (error {err_total:.2e})")
    return QuadratureResult(total, err_total, evals)


def integrate_oscillatory(f, a: float, b: float, omega: float,
                          tol: float = 1e-10) -> QuadratureResult:
    """Integral of an integrand carrying a cos/sin(omega y) factor.

    Fixed panels of length pi/omega keep each oscillation half-period on
    its own panel; b = inf is allowed and handled by a geometric tail stop.
    """
    if omega <= 0:
        raise DomainError("omega must be positive")
    width = math.pi / omega
    total, err_total, evals = 0.0, 0.0, 0
    x = a
    run_mag = []
    max_panels = 200000
    n = 0
    while x < b and n < max_panels:
        nxt = min(x + width, b)
        v, e = _panel(f, x, nxt)
        if e > tol / 10:
            v1, e1 = _panel(f, x, 0.5 * (x + nxt))
            v2, e2 = _panel(f, 0.5 * (x + nxt), nxt)
            v, e = v1 + v2, e1 + e2
            evals += 30
        total += v
        err_total += e
        evals += 15
        n += 1
        x = nxt
        if math.isinf(b):
            run_mag.append(abs(v))
            if len(run_mag) >= 4 and max(run_mag[-4:]) < tol / 100 * max(1.0, abs(total)):
                break
    else:
        if math.isinf(b):
            raise NonConvergence("oscillatory tail did not decay")
    return QuadratureResult(total, err_total, evals)


# ----------------------------------------------------------------------
# special-function surface (delegates to the selected kernel backend)
# ----------------------------------------------------------------------

def erf(x: float) -> float:
    """Error function, |absolute error| < 1e-14."""
    return kernels.erf(float(x))


def erfc(x: float) -> float:
    """Complementary error function, |absolute error| < 1e-14."""
    return kernels.erfc(float(x))


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) erfc(x)."""
    return kernels.erfcx(float(x))


def _near_nonpositive_integer(z: complex) -> bool:
    return z.real <= 0.5 and abs(z.imag) < 1e-12 and abs(z.real - round(z.real)) < 1e-12 \
        and round(z.real) <= 0


def digamma(z: complex) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z); raises PoleError at nonpositive integers."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"digamma pole at {z}")
    return kernels.digamma(z)


def log_gamma(z: complex) -> complex:
    """log Gamma(z), continuous on vertical lines with Re z in [1/4, 2].

    For Re z <= 0 the imaginary part is only defined modulo 2 pi (the
    exponential is exact), which is what Gamma-ratio callers need.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at {z}")
    return kernels.loggamma(z)


def zeta(s: complex) -> complex:
    """Riemann zeta by Euler-Maclaurin continuation.

    Accurate to < 1e-10 absolute for Re s >= 0, |Im s| <= 200 and, more
    generally, to < 1e-10 relative to max(1, |zeta(s)|) on the box
    -2 <= Re s <= 3 (the value grows like |Im s|^{1/2 - Re s} left of the
    critical strip, where double precision caps the attainable absolute
    accuracy).
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-13:
        raise PoleError("zeta pole at s = 1")
    return kernels.zeta_pair(s)[0]


def zeta_log_deriv(s: complex) -> complex:
    """zeta'(s)/zeta(s); raises ZeroDivisionError within 1e-13 of a zero."""
    s = complex(s)
    if abs(s - 1.0) < 1e-13:
        raise PoleError("zeta pole at s = 1")
    z, zp = kernels.zeta_pair(s)
    if abs(z) < 1e-13:
        raise ZeroDivisionError(f"zeta(s) vanishes at {s} within working precision")
    return zp / z


# battery shared by the QuadratureResult self-test (value, exact reference)
SELF_TEST_CASES = (
    (lambda r: np.exp(-r * r), "gaussian", math.sqrt(math.pi) / 2),
    (lambda r: 1.0 / (1.0 + r * r), "algebraic", math.pi / 2),
    (lambda r: np.exp(-r), "exponential", 1.0),
    (lambda r: r * np.exp(-0.5 * r * r), "gaussian", 1.0),
)
