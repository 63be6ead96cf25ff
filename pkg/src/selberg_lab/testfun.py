"""Admissible test-function pairs (h, g) with derivatives of g.

Two closed-form families are provided: the heat-kernel pair
h(r) = exp(-t r^2) and the pole-weighted pair h(r) = exp(-t r^2)/(r^2+p^2)
with p > 1/2.  Both are even, strip-holomorphic and decay fast enough for
every identity in the package; user-supplied pairs must pass
``check_admissibility`` before any trace-formula use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import AdmissibilityError, DomainError, NonConvergence
from .numerics import integrate_semi_infinite

Array = np.ndarray


@dataclass(frozen=True)
class TestFunctionPair:
    """An (h, g) Fourier pair with the first three derivatives of g.

    h must be even and decay like O(1+r^2)^{-1-eps}; g is its Fourier
    transform (2.pi normalization: g(y) = (1/2pi) int h(r) e^{-iry} dr).
    h_imag evaluates h at the imaginary argument r = -i sigma, needed for
    eigenvalues below 1/4.
    """

    kind: str
    t: float
    p: float | None
    h: Callable[[Array], Array]
    h_imag: Callable[[float], float]
    g: Callable[[Array], Array]
    g1: Callable[[Array], Array]
    g2: Callable[[Array], Array]
    g3: Callable[[Array], Array]
    meta: dict = field(default_factory=dict)


def make_gauss_heat(t: float) -> TestFunctionPair:
    """Heat-kernel pair h(r) = exp(-t r^2), g Gaussian of width 2 sqrt(t)."""
    if t <= 0:
        raise DomainError(f"heat parameter must be positive, got {t}")
    norm = 1.0 / math.sqrt(4.0 * math.pi * t)
    inv2t = 1.0 / (2.0 * t)

    def g(y):
        y = np.asarray(y, dtype=float)
        return norm * np.exp(-y * y * inv2t / 2.0)

    def g1(y):
        y = np.asarray(y, dtype=float)
        return -y * inv2t * g(y)

    def g2(y):
        y = np.asarray(y, dtype=float)
        return (y * y * inv2t * inv2t - inv2t) * g(y)

    def g3(y):
        y = np.asarray(y, dtype=float)
        return (3.0 * y * inv2t * inv2t - y ** 3 * inv2t ** 3) * g(y)

    return TestFunctionPair(
        kind="gauss_heat", t=t, p=None,
        h=lambda r: np.exp(-t * np.asarray(r, dtype=float) ** 2),
        h_imag=lambda sigma: math.exp(t * sigma * sigma),
        g=g, g1=g1, g2=g2, g3=g3,
    )


def make_cauchy_gauss(t: float, p: float) -> TestFunctionPair:
    """Pole-weighted pair h(r) = exp(-t r^2)/(r^2 + p^2), p > 1/2.

    g and its derivatives come from the erf closed forms; the erfc of the
    growing argument is evaluated through the scaled function so that the
    formulas stay stable for small t.
    """
    if t <= 0:
        raise DomainError(f"heat parameter must be positive, got {t}")
    if p <= 0.5:
        raise DomainError(
            f"pole parameter must exceed 1/2 for strip holomorphy, got {p}")
    sqt = math.sqrt(t)
    gauss_norm = 1.0 / math.sqrt(4.0 * math.pi * t)

    def _pieces(y):
        y = np.abs(np.asarray(y, dtype=float))
        a = y / (2.0 * sqt) - p * sqt
        b = y / (2.0 * sqt) + p * sqt
        gauss = np.exp(-y * y / (4.0 * t))
        # e^{t p^2 - y p} (2 - erfc(a)), rewritten through erfcx when the
        # direct exponential would lose the tail
        small = a > -4.0
        p1 = np.where(
            small,
            np.exp(t * p * p - y * p) * (2.0 - kernels.erfc_arr(np.where(small, a, 0.0))),
            kernels.erfcx_arr(np.where(small, 0.0, -a)) * gauss,
        )
        p2 = kernels.erfcx_arr(b) * gauss
        return p1, p2, gauss

    def g(y):
        p1, p2, _ = _pieces(y)
        return (p1 + p2) / (4.0 * p)

    def g1(y):
        yy = np.asarray(y, dtype=float)
        p1, p2, _ = _pieces(yy)
        return np.sign(yy) * (-p1 + p2) / 4.0

    def g2(y):
        p1, p2, gauss = _pieces(y)
        return p * p * (p1 + p2) / (4.0 * p) - gauss_norm * gauss

    def g3(y):
        yy = np.asarray(y, dtype=float)
        p1, p2, gauss = _pieces(yy)
        return np.sign(yy) * (p * p * (-p1 + p2) / 4.0
                              + np.abs(yy) / (2.0 * t) * gauss_norm * gauss)

    def h(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-t * r * r) / (r * r + p * p)

    def h_imag(sigma: float) -> float:
        if sigma >= p:
            raise DomainError("imaginary argument reaches the h pole")
        return math.exp(t * sigma * sigma) / (p * p - sigma * sigma)

    return TestFunctionPair(kind="cauchy_gauss", t=t, p=p,
                            h=h, h_imag=h_imag, g=g, g1=g1, g2=g2, g3=g3)


def make_custom(h, g, g1, g2, g3, h_imag=None, label: str = "custom") -> TestFunctionPair:
    """Wrap user callables; run check_admissibility before trace-formula use."""
    def _h_imag(sigma):
        if h_imag is not None:
            return h_imag(sigma)
        raise DomainError("custom pair does not define h at imaginary arguments")

    return TestFunctionPair(kind="custom", t=float("nan"), p=None,
                            h=h, h_imag=_h_imag, g=g, g1=g1, g2=g2, g3=g3,
                            meta={"label": label})


@dataclass(frozen=True)
class AdmissibilityReport:
    passes_hs: bool
    c_gamma_g: float
    g3_tail_l1: float
    decay_margin: float


def check_admissibility(pair: TestFunctionPair, b0: float,
                        tol: float = 1e-9) -> AdmissibilityReport:
    """Numerically test the decay conditions required by the y-integrals.

    Evaluates int_{b0}^inf e^{y/2} y (|g|+|g'|+|g''|) dy and the L1 norm of
    g''' on the same ray; both must converge.  Divergence is detected by
    growth of the integrand across three doublings of the evaluation point
    before any quadrature is attempted.
    """
    if b0 <= 0:
        raise DomainError("b0 must be positive")

    def weighted(y):
        y = np.asarray(y, dtype=float)
        return np.exp(0.5 * y) * y * (np.abs(pair.g(y)) + np.abs(pair.g1(y))
                                      + np.abs(pair.g2(y)))

    probes = np.array([b0 + 8.0, b0 + 16.0, b0 + 32.0, b0 + 64.0])
    vals = weighted(probes)
    if np.all(np.diff(vals) > 0) and vals[-1] > vals[0] * 2.0:
        raise NonConvergence(
            "e^{y/2}-weighted integrand grows across 3 doublings; "
            "the pair decays too slowly")

    c_gamma = integrate_semi_infinite(weighted, "exponential", tol, start=b0)
    g3_l1 = integrate_semi_infinite(
        lambda y: np.abs(pair.g3(np.asarray(y, dtype=float))),
        "exponential", tol, start=b0)

    # decay proxy for the h-side condition: |h(r)| (1+r^2)^{5/4} bounded
    rs = np.linspace(0.0, 60.0, 121)
    hv = np.abs(np.asarray(pair.h(rs), dtype=float)) * (1.0 + rs * rs) ** 1.25
    decay_margin = float(hv[:20].max() / max(hv[-20:].max(), 1e-300))
    passes = bool(np.isfinite(c_gamma.value) and np.isfinite(g3_l1.value)
                  and decay_margin > 1.0)
    return AdmissibilityReport(passes_hs=passes, c_gamma_g=float(c_gamma.value),
                               g3_tail_l1=float(g3_l1.value), decay_margin=decay_margin)


def require_admissible(pair: TestFunctionPair, b0: float) -> None:
    """Hard gate used by the trace-formula entry points for custom pairs."""
    if pair.kind != "custom":
        return
    report = check_admissibility(pair, b0)
    if not report.passes_hs:
        raise AdmissibilityError(
            f"custom pair fails the decay conditions: {report}")


def boundary_kernel(pair: TestFunctionPair):
    """The combination -g/2 + g' carried by every boundary term."""
    def f(y):
        y = np.asarray(y, dtype=float)
        return -0.5 * pair.g(y) + pair.g1(y)
    return f
