"""Prime-geodesic counting functions and the explicit formula over zeros
and resonances.

The integrated Chebyshev analog is compared against partial sums over the
discrete spectrum and the resonance spectrum; the smooth background term
(poles and trivial zeros of the zeta function of the group) is absorbed by
a fixed regression basis whose x^{3/2} coefficient is a known constant and
serves as a fit check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (DomainError, FitWarning, IncompleteData,
                     InsufficientEnumeration)
from .group_data import GroupDescriptor, SpectralDataset, mangoldt_weight
from .numerics import integrate_oscillatory, integrate_semi_infinite
from .testfun import TestFunctionPair, boundary_kernel, require_admissible


def _norm_weight_arrays(classes):
    norms = np.array([c.norm for c in classes], dtype=float)
    weights = np.array([mangoldt_weight(c) * c.multiplicity for c in classes])
    order = np.argsort(norms)
    return norms[order], weights[order]


def _check_enumeration(classes, x: float, enum_limit):
    limit = enum_limit if enum_limit is not None else max(c.norm for c in classes)
    if x > limit * (1.0 + 1e-12):
        raise InsufficientEnumeration(
            f"x = {x} beyond the enumerated range {limit:.6f}")


def psi_direct(classes, x: float, enum_limit: float | None = None) -> float:
    """Step sum of geodesic von Mangoldt weights over norms <= x."""
    _check_enumeration(classes, x, enum_limit)
    norms, weights = _norm_weight_arrays(classes)
    return float(weights[norms <= x].sum())


def psi1_direct(classes, x: float, enum_limit: float | None = None) -> float:
    """Exact integral of the step function from the minimal norm to x."""
    _check_enumeration(classes, x, enum_limit)
    norms, weights = _norm_weight_arrays(classes)
    cum = np.cumsum(weights)
    total = 0.0
    for i, n in enumerate(norms):
        if n >= x:
            break
        upper = norms[i + 1] if i + 1 < len(norms) else x
        total += cum[i] * (min(upper, x) - n)
    return float(total)


def _pair_term(x: float, s: complex) -> float:
    return 2.0 * (x ** (1.0 + s) / (s * (1.0 + s))).real


def spectral_partial_sums(data: SpectralDataset, x: float, R: float):
    """Partial sums over the discrete spectrum (r_j <= R, plus exceptional
    terms) and over the resonance window 0 < gamma < R."""
    if R > data.completeness_bound * (1.0 + 1e-12):
        raise IncompleteData(
            f"R = {R} exceeds the asserted completeness bound "
            f"{data.completeness_bound}")
    if data.resonances and R > data.max_resonance * (1.0 + 1e-12):
        raise IncompleteData(
            f"R = {R} exceeds the largest loaded resonance {data.max_resonance:.4f}")

    sigma_delta = 0.0
    for lam in data.exceptional:
        if lam == 0.0:
            sigma_delta += x * x / 2.0      # s = 1, single term
        else:
            s_m = 0.5 + math.sqrt(0.25 - lam)
            sigma_delta += (x ** (1.0 + s_m) / (s_m * (1.0 + s_m))
                            + x ** (2.0 - s_m) / ((1.0 - s_m) * (2.0 - s_m)))
    mask = data.discrete_r <= R
    for r, m in zip(data.discrete_r[mask], data.multiplicities[mask]):
        sigma_delta += m * _pair_term(x, complex(0.5, r))

    sigma_phi = 0.0
    for beta, gamma in data.resonances:
        if gamma >= R:
            break
        sigma_phi += _pair_term(x, complex(beta, gamma))
    return sigma_delta, sigma_phi


@dataclass
class ExplicitFormulaTable:
    rows: list = field(default_factory=list)
    fit_coefficients: dict = field(default_factory=dict)
    requested_R: tuple = ()
    computed_R: tuple = ()
    skipped: list = field(default_factory=list)

    def median_normalized(self, R: float, x_min: float = -math.inf,
                          x_max: float = math.inf) -> float:
        vals = [row["normalized_residual"] for row in self.rows
                if row["R"] == R and x_min <= row["x"] <= x_max]
        if not vals:
            raise IncompleteData(f"no residuals computed at R = {R}")
        return float(np.median(vals))


_FIT_BASIS = (
    ("x_log_x", lambda x: x * np.log(x)),
    ("x", lambda x: x),
    ("x_3_2", lambda x: x ** 1.5),
    ("const", lambda x: np.ones_like(x)),
)


def explicit_formula_residual(classes, data: SpectralDataset, x_grid, R_grid,
                              enum_limit: float | None = None) -> ExplicitFormulaTable:
    """Residual table of the integrated explicit formula.

    The smooth background is estimated once, by regression at the deepest
    attainable cutoff, and subtracted at every requested cutoff; rows carry
    the normalized residuals |Delta| R / (x^2 ln x).
    """
    x_grid = np.asarray(sorted(x_grid), dtype=float)
    b0_norm = min(c.norm for c in classes)
    if np.any(x_grid < b0_norm):
        raise DomainError(f"x below the minimal norm {b0_norm:.4f} is rejected")

    table = ExplicitFormulaTable(requested_R=tuple(R_grid))
    usable = []
    for R in R_grid:
        try:
            spectral_partial_sums(data, float(x_grid[0]), R)
            usable.append(float(R))
        except IncompleteData as exc:
            table.skipped.append((float(R), str(exc)))
    if not usable:
        raise IncompleteData(
            "no requested cutoff is attainable with this dataset: "
            + "; ".join(reason for _, reason in table.skipped))
    table.computed_R = tuple(usable)

    psi1_vals = np.array([psi1_direct(classes, float(x), enum_limit) for x in x_grid])
    psi_vals = np.array([psi_direct(classes, float(x), enum_limit) for x in x_grid])

    raw = {}
    for R in usable:
        sums = [spectral_partial_sums(data, float(x), R) for x in x_grid]
        raw[R] = psi1_vals - np.array([sd + sp for sd, sp in sums])

    # background regression at the deepest cutoff
    deep = max(usable)
    cols = np.column_stack([f(x_grid) for _, f in _FIT_BASIS])
    scale = np.linalg.norm(cols, axis=0)
    sol, _, rank, sv = np.linalg.lstsq(cols / scale, raw[deep], rcond=None)
    coeffs = sol / scale
    if rank < len(_FIT_BASIS) or sv[0] / max(sv[-1], 1e-300) > 1e12:
        warnings.warn("background regression is poorly conditioned",
                      FitWarning, stacklevel=2)
    table.fit_coefficients = {name: float(c)
                              for (name, _), c in zip(_FIT_BASIS, coeffs)}
    background = cols @ coeffs

    for R in usable:
        residual = raw[R] - background
        sums = [spectral_partial_sums(data, float(x), R) for x in x_grid]
        for i, x in enumerate(x_grid):
            table.rows.append({
                "x": float(x), "R": R,
                "psi": float(psi_vals[i]), "psi1": float(psi1_vals[i]),
                "sigma_delta": float(sums[i][0]), "sigma_phi": float(sums[i][1]),
                "residual": float(residual[i]),
                "normalized_residual": float(abs(residual[i]) * R
                                             / (x * x * math.log(x))),
            })
    return table


# ----------------------------------------------------------------------
# decomposition of the hyperbolic term
# ----------------------------------------------------------------------

def geodesic_side_sum(g_callable, classes) -> float:
    """Direct sum of ln N0 / (N^{1/2} - N^{-1/2}) g(k ln N0) over classes."""
    total = 0.0
    for c in classes:
        w = math.log(c.primitive_norm) / (math.sqrt(c.norm) - 1.0 / math.sqrt(c.norm))
        total += c.multiplicity * w * float(g_callable(c.power * math.log(c.primitive_norm)))
    return total


def _cos_sin_tail(f, b: float, beta: float, gamma: float, tol: float):
    """(int_b^inf e^{(beta-1/2)y} cos(gamma y) f, same with sin) sharing nodes."""
    from .numerics import _GK_NODES, _GK_WK  # shared panel rule

    width = math.pi / max(gamma, 1.0)
    c_total = s_total = 0.0
    x = b
    mags = []
    for _ in range(200000):
        half = 0.5 * width
        mid = x + half
        nodes = mid + half * _GK_NODES
        base = np.exp((beta - 0.5) * nodes) * f(nodes)
        cval = half * float(np.dot(_GK_WK, base * np.cos(gamma * nodes)))
        sval = half * float(np.dot(_GK_WK, base * np.sin(gamma * nodes)))
        c_total += cval
        s_total += sval
        x += width
        mags.append(max(abs(cval), abs(sval)))
        if len(mags) >= 4 and max(mags[-4:]) < tol / 10:
            break
    return c_total, s_total


def hyperbolic_decomposition(pair: TestFunctionPair, classes,
                             data: SpectralDataset, descriptor: GroupDescriptor,
                             B: float | None = None, tol: float = 1e-10) -> dict:
    """Split the hyperbolic term into spectral series, exceptional part, and
    the smooth remainder, at truncation point B >= B0.

    The remainder is computed as the difference of the direct geodesic sum
    and the two series (the identity holds for every admissible B); its
    B-stability is the real content and is exercised by the tests.
    """
    descriptor.require_explicit_formula_range()
    require_admissible(pair, descriptor.b0)
    if B is None:
        B = descriptor.B0
    if B < descriptor.B0 * (1.0 - 1e-12):
        raise DomainError(f"B = {B} below the minimal norm {descriptor.B0}")
    b = math.log(B)
    f = boundary_kernel(pair)

    sp_direct = geodesic_side_sum(pair.g, classes)

    # discrete-spectrum series
    sp_inf = 0.0
    for r, m in zip(data.discrete_r, data.multiplicities):
        lam = r * r + 0.25
        if r < 1e-12:
            val = integrate_semi_infinite(f, "exponential", tol, start=b).value
        else:
            val = integrate_oscillatory(
                lambda y, r=r: (np.cos(r * y) + 2.0 * r * np.sin(r * y)) * f(y),
                b, math.inf, max(r, 1.0), tol).value
        sp_inf -= m * val / lam

    # resonance series
    for beta, gamma in data.resonances:
        cval, sval = _cos_sin_tail(f, b, beta, gamma, tol)
        s2 = beta * beta + gamma * gamma
        sp_inf -= 2.0 * (beta * cval + gamma * sval) / s2

    # exceptional part: paired terms for eigenvalues in (0, 1/4), single
    # terms for the scattering poles on (1/2, 1]
    s_ex = 0.0
    for lam in data.exceptional:
        if lam == 0.0:
            continue
        s_m = 0.5 + math.sqrt(0.25 - lam)
        for s in (s_m, 1.0 - s_m):
            val = integrate_semi_infinite(
                lambda y, s=s: np.exp((s - 0.5) * y) * f(y),
                "exponential", tol, start=b).value
            s_ex -= val / s
    for s_nu in descriptor.phi_poles:
        val = integrate_semi_infinite(
            lambda y, s=s_nu: np.exp((s - 0.5) * y) * f(y),
            "exponential", tol, start=b).value
        s_ex -= val / s_nu

    return {
        "sp_direct": sp_direct,
        "sp_inf": sp_inf,
        "s_ex": s_ex,
        "s0": sp_direct - sp_inf - s_ex,
        "B": B,
    }
