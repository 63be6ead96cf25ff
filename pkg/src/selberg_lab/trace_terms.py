"""Evaluators for every term of the trace identity, its parabolic
decomposition through the scattering function, and the rearranged
resonance form whose series run over eigenvalues and resonances only.

Sign conventions follow the classical identity

    sum_n h(r_n) = area + elliptic + hyperbolic + parabolic,

with the parabolic term carrying -(h(0)/4)(n - tr Phi(1/2)) - n g(0) ln 2;
the resonance form moves the scattering-line integral into series over the
resonance spectrum plus a pole sum over (1/2, 1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConvergenceWarning, DomainError, IncompleteData,
                     TruncationWarning, UnsupportedGroup)
from .explicit_formula import (_cos_sin_tail, geodesic_side_sum,
                               hyperbolic_decomposition)
from .group_data import (GroupDescriptor, SpectralDataset,
                         scattering_line_re)
from .kernels import digamma_arr
from .numerics import (QuadratureResult, integrate_finite,
                       integrate_oscillatory, integrate_semi_infinite)
from .testfun import TestFunctionPair, boundary_kernel, require_admissible


@dataclass
class TraceBreakdown:
    """Term values, error estimates, cutoffs, and the identity residual."""

    spectral_sum: float
    identity_H: float
    elliptic_SR: float
    hyperbolic_SP: float
    parabolic_P: float
    residual: float
    term_errors: dict = field(default_factory=dict)
    truncation_report: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = self.spectral_sum - (self.identity_H + self.elliptic_SR
                                        + self.hyperbolic_SP + self.parabolic_P)
        if abs(self.residual - expected) > 1e-15 * max(1.0, abs(expected)):
            raise DomainError("stored residual does not match the stored terms")
        if any(e < 0 for e in self.term_errors.values()):
            raise DomainError("negative term error estimate")


# ----------------------------------------------------------------------
# spectral side
# ----------------------------------------------------------------------

def spectral_side(pair: TestFunctionPair, data: SpectralDataset,
                  r_cut: float) -> float:
    """Sum of h over the discrete spectrum up to r_cut plus the exceptional
    eigenvalues evaluated at imaginary argument."""
    if r_cut > data.completeness_bound * (1.0 + 1e-12):
        raise IncompleteData(
            f"r_cut = {r_cut} exceeds the completeness bound "
            f"{data.completeness_bound}")
    mask = data.discrete_r <= r_cut
    total = float(np.dot(data.multiplicities[mask],
                         np.asarray(pair.h(data.discrete_r[mask]), dtype=float))) \
        if mask.any() else 0.0
    for lam in data.exceptional:
        total += pair.h_imag(math.sqrt(0.25 - lam))
    return total


def spectral_tail_bound(pair: TestFunctionPair, descriptor: GroupDescriptor,
                        r_cut: float) -> float:
    """Weyl-density bound on the spectral mass beyond r_cut."""
    dens = descriptor.area / (2.0 * math.pi)
    res = integrate_semi_infinite(
        lambda u: np.asarray(pair.h(u + r_cut), dtype=float) * dens * (u + r_cut + 1.0),
        "gaussian", 1e-6)
    return abs(res.value) + res.error_estimate


# ----------------------------------------------------------------------
# right-hand side terms
# ----------------------------------------------------------------------

def _area_term_q(pair, descriptor, tol=1e-11) -> QuadratureResult:
    scale = descriptor.area / (2.0 * math.pi)
    return integrate_semi_infinite(
        lambda r: scale * r * np.tanh(math.pi * r) * np.asarray(pair.h(r), dtype=float),
        "gaussian", tol)


def area_term(pair: TestFunctionPair, descriptor: GroupDescriptor,
              tol: float = 1e-11) -> float:
    """Area (identity-class) contribution."""
    return _area_term_q(pair, descriptor, tol).value


def _elliptic_term_q(pair, descriptor, tol=1e-11):
    total, err, evals = 0.0, 0.0, 0
    for order, count in descriptor.elliptic_classes:
        for k in range(1, order):
            coeff = count / (order * math.sin(math.pi * k / order))
            frac = k / order

            def sym(r, frac=frac):
                r = np.asarray(r, dtype=float)
                h = np.asarray(pair.h(r), dtype=float)
                den = 1.0 + np.exp(-2.0 * math.pi * r)
                return h * (np.exp(-2.0 * math.pi * frac * r)
                            + np.exp(2.0 * math.pi * r * (frac - 1.0))) / den

            res = integrate_semi_infinite(sym, "exponential", tol)
            total += coeff * res.value
            err += abs(coeff) * res.error_estimate
            evals += res.evaluations
    return QuadratureResult(total, err, max(evals, 1))


def elliptic_term(pair: TestFunctionPair, descriptor: GroupDescriptor,
                  tol: float = 1e-11) -> float:
    """Contribution of the elliptic conjugacy classes."""
    return _elliptic_term_q(pair, descriptor, tol).value


def hyperbolic_term(pair: TestFunctionPair, classes) -> float:
    """Direct geodesic sum; warns when the first omitted term is material."""
    total = geodesic_side_sum(pair.g, classes)
    n_max = max(c.norm for c in classes)
    omitted = abs(float(pair.g(math.log(n_max) + 0.02))) * math.log(n_max) * 4.0
    if omitted > 1e-12 * max(abs(total), 1e-30):
        warnings.warn(
            f"first omitted geodesic term ~{omitted:.2e} exceeds 1e-12 of the sum; "
            "raise norm_limit", TruncationWarning, stacklevel=2)
    return total


def choose_norm_limit(pair: TestFunctionPair, descriptor: GroupDescriptor,
                      cap: float = 2.0e6) -> float:
    """Smallest power-of-two-ish norm limit making the geodesic tail < 1e-16
    of the leading term."""
    lead = abs(float(pair.g(descriptor.b0))) + 1e-300
    limit = max(4.0 * descriptor.B0, 64.0)
    while limit < cap:
        if abs(float(pair.g(math.log(limit)))) * math.log(limit) ** 2 < 1e-16 * lead:
            return limit
        limit *= 2.0
    return cap


def digamma_integral(pair: TestFunctionPair, descriptor: GroupDescriptor,
                     tol: float = 1e-11) -> QuadratureResult:
    """-(n/pi) int_0^inf h(r) Re psi(1+ir) dr  (even part of the cusp term)."""
    scale = -descriptor.cusp_count / math.pi

    def integrand(r):
        r = np.asarray(r, dtype=float)
        return scale * np.asarray(pair.h(r), dtype=float) * digamma_arr(1.0 + 1j * r).real

    return integrate_semi_infinite(integrand, "gaussian", tol)


def _scattering_line_integral(pair, tol=1e-11) -> QuadratureResult:
    """(1/4pi) int_R h(r) (phi'/phi)(1/2+ir) dr via the even real part."""
    def integrand(r):
        r = np.asarray(r, dtype=float)
        return np.asarray(pair.h(r), dtype=float) * scattering_line_re(r) / (2.0 * math.pi)

    return integrate_semi_infinite(integrand, "gaussian", tol)


def parabolic_term(pair: TestFunctionPair, descriptor: GroupDescriptor,
                   tol: float = 1e-11) -> float:
    """Cusp (continuous-spectrum) contribution via the scattering line."""
    if not descriptor.has_scattering:
        raise UnsupportedGroup(
            "no scattering function available; use parabolic_term_resonant")
    n = descriptor.cusp_count
    line = _scattering_line_integral(pair, tol).value
    dig = digamma_integral(pair, descriptor, tol).value
    h0 = float(pair.h(0.0))
    g0 = float(pair.g(0.0))
    return (line + dig - 0.25 * h0 * (n - descriptor.tr_phi_half)
            - n * g0 * math.log(2.0))


def _pole_sum(pair, descriptor, tol=1e-11) -> float:
    """-(1/2pi) sum over scattering poles on (1/2,1] of (1-2s) int h/(r^2+a^2)."""
    total = 0.0
    for s_mu in descriptor.phi_poles:
        a = s_mu - 0.5
        res = integrate_semi_infinite(
            lambda r, a=a: np.asarray(pair.h(r), dtype=float) / (r * r + a * a),
            "gaussian", tol)
        total -= (1.0 - 2.0 * s_mu) / (2.0 * math.pi) * res.value
    return total


def parabolic_term_resonant(pair: TestFunctionPair, descriptor: GroupDescriptor,
                            data: SpectralDataset, tol: float = 1e-10) -> dict:
    """Cusp contribution assembled from resonances instead of the
    scattering line: pole sum + resonance series + digamma remainder."""
    n = descriptor.cusp_count
    g0 = float(pair.g(0.0))
    h0 = float(pair.h(0.0))

    pole_sum = _pole_sum(pair, descriptor, tol) - 2.0 * g0 * math.log(descriptor.b1)

    partial = {}
    resonance_sum = 0.0
    for beta, gamma in data.resonances:
        cval, _ = _cos_sin_tail(pair.g, 0.0, beta, gamma, tol)
        resonance_sum -= 2.0 * cval
        for cut in (50.0, 100.0, 200.0):
            if gamma < cut:
                partial[cut] = resonance_sum
    cuts = sorted(c for c in partial if partial.get(c) is not None)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if abs(partial[hi] - partial[lo]) > 1e-3:
            warnings.warn(
                f"resonance series moved by {abs(partial[hi] - partial[lo]):.2e} "
                f"between ordinate cutoffs {lo} and {hi}",
                ConvergenceWarning, stacklevel=2)
            break

    cusp_remainder = (digamma_integral(pair, descriptor, tol).value
                      - 0.25 * h0 * (n - descriptor.tr_phi_half)
                      - n * g0 * math.log(2.0))
    return {
        "pole_sum": pole_sum,
        "resonance_sum": resonance_sum,
        "cusp_remainder": cusp_remainder,
        "resonance_partial_sums": partial,
        "total": pole_sum + resonance_sum + cusp_remainder,
    }


# ----------------------------------------------------------------------
# the resonance form of the identity
# ----------------------------------------------------------------------

def resonance_identity_terms(pair: TestFunctionPair, descriptor: GroupDescriptor,
                             data: SpectralDataset, classes,
                             b: float | None = None, tol: float = 1e-10) -> dict:
    """All terms of the rearranged identity at truncation point b >= b0.

    Returns the area term, digamma integral, the three spectral/resonance
    series, the remainder term, both sides, and their residual.  The split
    depends on b; the total does not.
    """
    descriptor.require_explicit_formula_range()
    require_admissible(pair, descriptor.b0)
    b0 = descriptor.b0
    if b is None:
        b = b0
    if b < b0 - 1e-12:
        raise DomainError(f"b = {b} below b0 = {b0}")

    f = boundary_kernel(pair)
    f_b = float(f(b))
    g_b = float(pair.g(b))
    g2_b = float(pair.g2(b))
    g0 = float(pair.g(0.0))
    h0 = float(pair.h(0.0))
    n = descriptor.cusp_count

    # boundary series over eigenvalues and resonances
    w_discrete = 0.0
    quarter_mult = 0
    for r, m in zip(data.discrete_r, data.multiplicities):
        w_discrete += m * math.cos(r * b) / (r * r + 0.25)
        if r < 1e-12:
            quarter_mult += m
    w_resonance = sum(math.cos(gamma * b) / gamma ** 2
                      * math.exp((beta - 0.5) * b)
                      for beta, gamma in data.resonances)
    boundary_series = -2.0 * f_b * (w_discrete + w_resonance)

    # series over the discrete spectrum (sin kernels)
    spectrum_series = 0.0
    edge = -0.5 * g_b + 2.0 * g2_b
    for r, m in zip(data.discrete_r, data.multiplicities):
        if r < 1e-12:
            continue
        lam = r * r + 0.25
        tail = integrate_oscillatory(
            lambda y, r=r: np.sin(r * y) * (-0.5 * pair.g1(y) + 2.0 * pair.g3(y)),
            b, math.inf, max(r, 1.0), tol).value
        spectrum_series += m * (math.sin(r * b) * edge + tail) / (lam * r)

    correction = 0.0
    if quarter_mult:
        correction = -4.0 * quarter_mult * integrate_finite(f, 0.0, b, tol).value

    # closed-form resonance series
    resonance_series = 0.0
    for beta, gamma in data.resonances:
        damp = math.exp((beta - 0.5) * b)
        s2 = beta * beta + gamma * gamma
        resonance_series += 2.0 * (
            g_b * damp * math.sin(gamma * b) * (gamma / s2 - 1.0 / gamma)
            + (beta - 0.5) * g0 / gamma ** 2
            - g_b * beta ** 3 * math.cos(gamma * b) * damp / (gamma ** 2 * s2))

    # finite-window oscillatory integrals
    def window_kernel(y, beta):
        y = np.asarray(y, dtype=float)
        bh = beta - 0.5
        return np.exp(bh * y) * (bh * bh * pair.g(y) + 2.0 * bh * pair.g1(y)
                                 + pair.g2(y))

    resonance_window = 0.0
    for beta, gamma in data.resonances:
        val = integrate_oscillatory(
            lambda y, beta=beta, gamma=gamma: window_kernel(y, beta) * np.cos(gamma * y),
            0.0, b, gamma, tol).value
        resonance_window += 2.0 * val / gamma ** 2

    area = _area_term_q(pair, descriptor, tol).value
    dig = digamma_integral(pair, descriptor, tol).value
    elliptic = _elliptic_term_q(pair, descriptor, tol).value

    decomposition = hyperbolic_decomposition(pair, classes, data, descriptor,
                                             B=math.exp(b), tol=tol)
    mu_sum = _pole_sum(pair, descriptor, tol)
    consts = (-0.25 * h0 * (n - descriptor.tr_phi_half)
              - g0 * (n * math.log(2.0) + 2.0 * math.log(descriptor.b1)))
    remainder = (boundary_series + decomposition["s_ex"] + elliptic
                 + decomposition["s0"] + mu_sum + consts)

    lhs = spectral_side(pair, data, data.completeness_bound)
    rhs = (area + dig + spectrum_series + resonance_series + resonance_window
           + remainder + correction)
    return {
        "area_term": area,
        "digamma_integral": dig,
        "boundary_series": boundary_series,
        "spectrum_series": spectrum_series,
        "resonance_series": resonance_series,
        "resonance_window_series": resonance_window,
        "remainder_term": remainder,
        "quarter_eigenvalue_correction": correction,
        "hyperbolic_parts": decomposition,
        "pole_sum": mu_sum,
        "lhs": lhs,
        "rhs": rhs,
        "residual": lhs - rhs,
        "b": b,
    }


# ----------------------------------------------------------------------
# the full identity
# ----------------------------------------------------------------------

def verify_trace_identity(pair: TestFunctionPair, descriptor: GroupDescriptor,
                          data: SpectralDataset, classes,
                          tol: float = 1e-10) -> TraceBreakdown:
    """Evaluate both sides of the trace identity and their residual."""
    if descriptor.cusp_count < 1:
        raise UnsupportedGroup("cocompact groups are outside this laboratory")
    require_admissible(pair, descriptor.b0)

    r_cut = data.completeness_bound
    spectral = spectral_side(pair, data, r_cut)

    area_q = _area_term_q(pair, descriptor, tol)
    ell_q = _elliptic_term_q(pair, descriptor, tol)
    hyp = hyperbolic_term(pair, classes)

    errors = {
        "spectral_tail": spectral_tail_bound(pair, descriptor, r_cut),
        "area_term": area_q.error_estimate,
        "elliptic_term": ell_q.error_estimate,
    }
    if descriptor.has_scattering:
        line_q = _scattering_line_integral(pair, tol)
        dig_q = digamma_integral(pair, descriptor, tol)
        parabolic = (line_q.value + dig_q.value
                     - 0.25 * float(pair.h(0.0)) * (descriptor.cusp_count
                                                    - descriptor.tr_phi_half)
                     - descriptor.cusp_count * float(pair.g(0.0)) * math.log(2.0))
        errors["scattering_line"] = line_q.error_estimate
        errors["digamma_integral"] = dig_q.error_estimate
    else:
        pieces = parabolic_term_resonant(pair, descriptor, data, tol)
        parabolic = pieces["total"]
        errors["resonance_truncation"] = abs(
            pieces["resonance_partial_sums"].get(200.0, 0.0)
            - pieces["resonance_partial_sums"].get(100.0, 0.0))

    rhs = area_q.value + ell_q.value + hyp + parabolic
    breakdown = TraceBreakdown(
        spectral_sum=spectral,
        identity_H=area_q.value,
        elliptic_SR=ell_q.value,
        hyperbolic_SP=hyp,
        parabolic_P=parabolic,
        residual=spectral - rhs,
        term_errors=errors,
        truncation_report={
            "r_cut": r_cut,
            "gamma_cut": data.max_resonance,
            "norm_limit": max(c.norm for c in classes),
        },
    )
    return breakdown
