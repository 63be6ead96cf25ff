"""Group descriptors, the modular class enumerator, the modular scattering
function, and spectral-dataset ingestion.

The modular group is fully built in; other cofinite groups enter through a
plain-text descriptor file that must carry its own hyperbolic class list
(there is no enumerator for them) and, when needed, an explicit resonance
file.
"""

from __future__ import annotations

import cmath
import math
import os
import warnings
from dataclasses import dataclass, field
from importlib import resources
from math import isqrt
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (IncompleteData, ParseError, PoleError, PrecisionWarning,
                     UnsupportedGroup, ValidationError)

_SQRT5 = math.sqrt(5.0)

# Stieltjes constants gamma_0..gamma_12 for the Laurent expansion of zeta
# about s = 1
_STIELTJES = (
    0.57721566490153286061, -0.072815845483676724861, -0.0096903631928723184845,
    0.0020538344203033458662, 0.0023253700654673000575, 0.00079332381730106270175,
    -0.00023876934543019960987, -0.00052728956705775104607, -0.0003521233538030395096,
    -0.000034394774418088048178, 0.00020533281490906479468, 0.00027018443954390352667,
    0.00016727291210514019335,
)


# ----------------------------------------------------------------------
# descriptors and class records
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicClass:
    """One hyperbolic conjugacy class: a primitive geodesic or a power."""

    primitive_norm: float
    power: int
    norm: float
    multiplicity: int
    trace: int | None = None

    def __post_init__(self):
        if self.primitive_norm <= 1.0 or self.power < 1 or self.multiplicity < 1:
            raise ValidationError(f"malformed hyperbolic class {self}")
        if abs(self.norm - self.primitive_norm ** self.power) > 1e-12 * self.norm:
            raise ValidationError("norm is not the stated power of the primitive norm")


@dataclass(frozen=True)
class GroupDescriptor:
    """Group constants plus the scattering interface.

    ``phi_poles`` lists the poles of the scattering determinant on (1/2, 1];
    the pole at s = 1 (constant eigenfunction) is always present.
    ``class_list`` is None for the modular group (enumerated on demand) and
    an explicit list for generic groups.
    """

    name: str
    area: float
    cusp_count: int
    elliptic_classes: tuple
    tr_phi_half: float
    b1: float
    B0: float
    x0: float = 2.0
    phi_poles: tuple = (1.0,)
    has_scattering: bool = False
    class_list: tuple | None = None

    def __post_init__(self):
        if self.B0 <= 1.0:
            raise ValidationError(f"minimal norm must exceed 1, got {self.B0}")
        for order, count in self.elliptic_classes:
            if order < 2 or count < 1:
                raise ValidationError(f"bad elliptic class ({order}, {count})")

    @property
    def b0(self) -> float:
        return math.log(self.B0)

    def require_explicit_formula_range(self) -> None:
        """Gate for the geodesic-side machinery: the minimal norm must lie
        at or beyond the remainder threshold x0."""
        if self.B0 < self.x0 - 1e-12:
            raise ValidationError(
                f"B0 = {self.B0:.6f} < x0 = {self.x0}; the explicit-formula "
                "remainder bound does not apply")


def modular_group(x0: float = 2.0) -> GroupDescriptor:
    """Descriptor of PSL(2, Z) acting on the upper half-plane."""
    return GroupDescriptor(
        name="modular",
        area=math.pi / 3.0,
        cusp_count=1,
        elliptic_classes=((2, 1), (3, 1)),
        tr_phi_half=-1.0,
        b1=1.0,
        B0=0.25 * (3.0 + _SQRT5) ** 2,
        x0=x0,
        phi_poles=(1.0,),
        has_scattering=True,
    )


# ----------------------------------------------------------------------
# the modular scattering determinant
# ----------------------------------------------------------------------

def _p_series(w):
    """w zeta(1+w) for |w| <= 0.3, analytic through the pole."""
    w = np.asarray(w, dtype=complex)
    out = np.ones_like(w)
    fact = 1.0
    wp = w.copy()
    for k, gk in enumerate(_STIELTJES):
        if k:
            fact *= k
        out = out + ((-1) ** k) * gk / fact * wp
        wp = wp * w
    return out


def _p_series_deriv(w):
    w = np.asarray(w, dtype=complex)
    out = np.zeros_like(w)
    fact = 1.0
    wp = np.ones_like(w)
    for k, gk in enumerate(_STIELTJES):
        if k:
            fact *= k
        out = out + ((-1) ** k) * gk * (k + 1) / fact * wp
        wp = wp * w
    return out


def _log_deriv_near_one(w):
    """zeta'/zeta(1+w) + 1/w, analytic at w = 0, valid for |w| <= 0.3."""
    return _p_series_deriv(w) / _p_series(w)


def modular_scattering_phi(s: complex) -> complex:
    """Scattering determinant sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s))."""
    s = complex(s)
    if abs(s - 1.0) < 1e-3:
        raise PoleError("scattering pole at s = 1")
    if abs(s.imag) < 1e-3:
        k = round(0.5 - s.real)
        if k >= 0 and abs(s - (0.5 - k)) < 1e-3 and abs(s - 0.5) > 0.05:
            raise PoleError(f"gamma-factor pole near s = {0.5 - k}")
    if abs(s - 0.5) < 0.05:
        # pole of Gamma(s-1/2) cancels the zeta(2s) pole; use
        # (2s-1) Gamma(s-1/2) = 2 Gamma(s+1/2) and w zeta(1+w)
        num = 2.0 * cmath.exp(kernels.loggamma(s + 0.5) - kernels.loggamma(s))
        z1, _ = kernels.zeta_pair(s + s - 1.0) if abs(s + s - 1.0) > 1e-13 else (complex(-0.5), 0)
        return math.sqrt(math.pi) * num * z1 / complex(_p_series(s + s - 1.0))
    z_num, _ = kernels.zeta_pair(2.0 * s - 1.0)
    z_den, _ = kernels.zeta_pair(2.0 * s)
    if abs(z_den) < 1e-10:
        warnings.warn(f"|zeta(2s)| = {abs(z_den):.2e} at s = {s}: precision loss",
                      PrecisionWarning, stacklevel=2)
    if abs(z_den) < 1e-13:
        raise PoleError(f"scattering pole (zeta zero in the denominator) at s = {s}")
    ratio = cmath.exp(kernels.loggamma(s - 0.5) - kernels.loggamma(s))
    return math.sqrt(math.pi) * ratio * z_num / z_den


def modular_scattering_log_deriv(s: complex) -> complex:
    """Logarithmic derivative of the modular scattering determinant."""
    s = complex(s)
    if abs(s - 1.0) < 1e-3:
        raise PoleError("scattering pole at s = 1")
    if abs(s - 0.5) < 0.05:
        # the digamma pole at s = 1/2 cancels against the zeta(2s) pole
        return (kernels.digamma(s + 0.5) - kernels.digamma(s)
                + 2.0 * _zeta_ld(2.0 * s - 1.0)
                - 2.0 * complex(_log_deriv_near_one(2.0 * s - 1.0)))
    if abs(s - 1.0) < 0.15:
        # stable through the neighborhood of the pole at s = 1
        return (kernels.digamma(s - 0.5) - kernels.digamma(s)
                - 1.0 / (s - 1.0) + 2.0 * complex(_log_deriv_near_one(2.0 * s - 2.0))
                - 2.0 * _zeta_ld(2.0 * s))
    return (kernels.digamma(s - 0.5) - kernels.digamma(s)
            + 2.0 * _zeta_ld(2.0 * s - 1.0) - 2.0 * _zeta_ld(2.0 * s))


def _zeta_ld(u: complex) -> complex:
    z, zp = kernels.zeta_pair(u)
    if abs(z) < 1e-13:
        raise ZeroDivisionError(f"zeta vanishes at {u} within working precision")
    return zp / z


def scattering_line_re(r):
    """Re of the scattering log-derivative at s = 1/2 + i r, vectorized.

    The two simple poles at r = 0 (digamma and zeta(1+2ir)) have purely
    imaginary residues on the line, so the real part is smooth; each piece
    is evaluated through its analytic combination.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    ir = 1j * r
    psi1 = kernels.digamma_arr(1.0 + ir)         # psi(ir) + 1/(ir), real part equal
    psih = kernels.digamma_arr(0.5 + ir)
    z0, zp0 = kernels.zeta_pair_arr(2.0 * ir)    # line Re = 0, no zeros there
    term0 = 2.0 * (zp0 / z0).real

    w = 2.0 * ir
    small = np.abs(w) < 0.25
    term1 = np.empty_like(r)
    if small.any():
        term1[small] = -2.0 * _log_deriv_near_one(w[small]).real
    if (~small).any():
        z1, zp1 = kernels.zeta_pair_arr(1.0 + w[~small])
        term1[~small] = -2.0 * (zp1 / z1).real
    return psi1.real - psih.real + term0 + term1


# ----------------------------------------------------------------------
# hyperbolic class enumeration (modular group)
# ----------------------------------------------------------------------

def _reduced_forms(d: int, primitive_only: bool):
    """All reduced indefinite forms (a, b, c) of nonsquare discriminant d > 0."""
    sq = math.sqrt(d)
    forms = []
    for b in range(1 if d % 2 else 2, isqrt(d) + 1, 2):
        num = b * b - d
        # 4a | b^2 - d and sqrt(d) - b < 2|a| < sqrt(d) + b
        lo = max(1, int(math.ceil((sq - b) / 2 - 1e-12)))
        hi = int(math.floor((sq + b) / 2 + 1e-12))
        for aa in range(lo, hi + 1):
            if num % (4 * aa):
                continue
            c = num // (4 * aa)
            for a in (aa, -aa):
                cc = num // (4 * a)
                if primitive_only and math.gcd(math.gcd(abs(a), b), abs(cc)) != 1:
                    continue
                forms.append((a, b, cc))
    return forms


def _reduce_step(form, d: int):
    """The classical reduction neighbor of a reduced indefinite form."""
    _, b, c = form
    sq = math.sqrt(d)
    m = 2 * abs(c)
    base = (-b) % m
    bp = base + m * math.floor((sq - base) / m)
    if not (sq - m < bp < sq):  # numerical guard; cannot fire for genuine input
        bp += m if bp <= sq - m else -m
    bp = int(round(bp))
    cp = (bp * bp - d) // (4 * c)
    return (c, bp, cp)


def count_form_cycles(d: int, primitive_only: bool = False) -> int:
    """Number of reduction cycles of (primitive) forms of discriminant d."""
    forms = set(_reduced_forms(d, primitive_only))
    cycles = 0
    while forms:
        start = next(iter(forms))
        cur = start
        while True:
            forms.discard(cur)
            cur = _reduce_step(cur, d)
            if cur == start:
                break
        cycles += 1
    return cycles


def _total_class_count(d: int) -> int:
    """Cycle count over all integral forms, via the content decomposition."""
    total = 0
    g = 1
    while g * g <= d:
        if d % (g * g) == 0:
            dd = d // (g * g)
            if dd % 4 in (0, 1):
                total += count_form_cycles(dd, primitive_only=True)
        g += 1
    return total


def _trace_to_norm(tau: int) -> float:
    lam = 0.5 * (tau + math.sqrt(tau * tau - 4.0))
    return lam * lam


def enumerate_hyperbolic(descriptor: GroupDescriptor, norm_limit: float):
    """All hyperbolic classes (primitives and powers) with norm <= norm_limit.

    For the modular group, candidates per integer trace tau >= 3 come from
    the reduction-cycle count of integral indefinite forms of discriminant
    tau^2 - 4; a class is recognized as a k-th power when its trace equals
    the k-th Chebyshev-style trace of an already-enumerated primitive.
    """
    if norm_limit < descriptor.B0:
        raise ValidationError(f"norm_limit {norm_limit} below the minimal norm")
    if descriptor.name != "modular":
        if descriptor.class_list is None:
            raise UnsupportedGroup(
                "only the modular group has an enumerator; generic groups "
                "must supply an explicit class list")
        return _expand_powers(descriptor.class_list, norm_limit)

    tau_max = int(math.floor(math.sqrt(norm_limit) + 1.0 / math.sqrt(norm_limit) + 1e-9))
    # trace of the k-th power of a primitive of trace tau0: the integer
    # recurrence tau_k = tau0 tau_{k-1} - tau_{k-2}
    power_of = {}   # trace -> list of (primitive trace, k)
    prim_mult = {}  # primitive trace -> multiplicity
    out = []
    for tau in range(3, tau_max + 1):
        norm = _trace_to_norm(tau)
        if norm > norm_limit * (1 + 1e-12):
            break
        total = _total_class_count(tau * tau - 4)
        for tau0, k in power_of.get(tau, ()):
            m = prim_mult[tau0]
            out.append(HyperbolicClass(
                primitive_norm=_trace_to_norm(tau0), power=k, norm=norm,
                multiplicity=m, trace=tau))
            total -= m
        if total < 0:
            raise ValidationError(
                f"power resolution produced negative multiplicity at trace {tau}")
        if total > 0:
            prim_mult[tau] = total
            out.append(HyperbolicClass(
                primitive_norm=norm, power=1, norm=norm,
                multiplicity=total, trace=tau))
            prev, cur = 2, tau
            k = 1
            while True:
                k += 1
                prev, cur = cur, tau * cur - prev
                if cur > tau_max:
                    break
                power_of.setdefault(cur, []).append((tau, k))
    out.sort(key=lambda c: (c.norm, c.power))
    return out


def _expand_powers(primitives, norm_limit: float):
    out = []
    for norm0, mult in primitives:
        if norm0 > norm_limit:
            continue
        k = 0
        while norm0 ** (k + 1) <= norm_limit * (1 + 1e-12):
            k += 1
            out.append(HyperbolicClass(primitive_norm=norm0, power=k,
                                       norm=norm0 ** k, multiplicity=mult))
    out.sort(key=lambda c: (c.norm, c.power))
    return out


def mangoldt_weight(cls: HyperbolicClass) -> float:
    """Geodesic von Mangoldt weight ln N0 / (1 - 1/N) for one class."""
    return math.log(cls.primitive_norm) / (1.0 - 1.0 / cls.norm)


# ----------------------------------------------------------------------
# spectral datasets
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralDataset:
    """Discrete ordinates, exceptional eigenvalues, and resonances."""

    discrete_r: np.ndarray
    multiplicities: np.ndarray
    exceptional: tuple
    resonances: tuple          # (beta, gamma) pairs, gamma > 0 ascending
    completeness_bound: float
    mu0: float = 1.0
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        lam0 = [x for x in self.exceptional if abs(x) < 1e-14]
        if len(lam0) != 1:
            raise ValidationError("lambda_0 = 0 must appear exactly once")
        for lam in self.exceptional:
            if not (0.0 <= lam < 0.25):
                raise ValidationError(f"exceptional eigenvalue {lam} outside [0, 1/4)")
        for beta, gamma in self.resonances:
            if not (1.0 - self.mu0 < beta < 0.5):
                raise ValidationError(
                    f"resonance beta = {beta} outside (1 - mu0, 1/2) with mu0 = {self.mu0}")
            if gamma <= 0:
                raise ValidationError("resonance ordinates must be positive")
        if np.any(np.diff(self.discrete_r) < -1e-12):
            raise ValidationError("discrete ordinates must ascend")

    @property
    def max_resonance(self) -> float:
        return self.resonances[-1][1] if self.resonances else 0.0

    def truncated(self, n_discrete: int | None = None, keep_resonances: bool = True):
        """A reduced copy used by the finite-spectrum demonstrations."""
        n = len(self.discrete_r) if n_discrete is None else n_discrete
        return SpectralDataset(
            discrete_r=self.discrete_r[:n].copy(),
            multiplicities=self.multiplicities[:n].copy(),
            exceptional=self.exceptional,
            resonances=self.resonances if keep_resonances else (),
            completeness_bound=self.completeness_bound,
            mu0=self.mu0,
            source=dict(self.source, truncated=True),
        )


def _parse_headers_and_values(path) -> tuple[dict, list, list]:
    headers = {}
    values, mults = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    key = key.strip()
                    val = val.strip()
                    if key == "multiplicity":
                        if not values:
                            raise ParseError("multiplicity before any value",
                                             path=str(path), line=lineno)
                        try:
                            mults[-1] = int(val)
                        except ValueError as exc:
                            raise ParseError(f"bad multiplicity {val!r}",
                                             path=str(path), line=lineno) from exc
                    else:
                        headers.setdefault(key, []).append(val)
                continue
            try:
                values.append(float(line))
                mults.append(1)
            except ValueError as exc:
                raise ParseError(f"unparseable ordinate {line!r}",
                                 path=str(path), line=lineno) from exc
    return headers, values, mults


def load_spectral_dataset(eigen_path, zeros_path=None,
                          resonance_mode: str = "riemann_half",
                          resonance_path=None, mu0: float = 1.0) -> SpectralDataset:
    """Ingest eigenvalue and resonance data files.

    riemann_half: each zeta-zero ordinate gamma from zeros_path becomes the
    resonance (1/4, gamma/2).  explicit: resonance_path supplies beta/gamma
    pairs directly.
    """
    eigen_path = Path(eigen_path)
    if not eigen_path.exists():
        raise ParseError("eigenvalue file not found", path=str(eigen_path), line=0)
    headers, values, mults = _parse_headers_and_values(eigen_path)
    if "complete_below" not in headers:
        raise ParseError("missing required header 'complete_below'",
                         path=str(eigen_path), line=0)
    completeness = float(headers["complete_below"][0])
    exceptional = [0.0] + [float(v) for v in headers.get("exceptional", [])]

    resonances = []
    if resonance_mode == "riemann_half":
        if zeros_path is not None:
            zeros_path = Path(zeros_path)
            if not zeros_path.exists():
                raise ParseError("zeros file not found", path=str(zeros_path), line=0)
            zh, zeros, _ = _parse_headers_and_values(zeros_path)
            resonances = [(0.25, 0.5 * g) for g in zeros]
    elif resonance_mode == "explicit":
        if resonance_path is not None:
            resonance_path = Path(resonance_path)
            if not resonance_path.exists():
                raise ParseError("resonance file not found", path=str(resonance_path), line=0)
            with open(resonance_path) as fh:
                for lineno, raw in enumerate(fh, start=1):
                    line = raw.strip()
                    if not line or line.startswith("#"):
                        continue
                    parts = line.split()
                    if len(parts) != 2:
                        raise ParseError("expected 'beta gamma'",
                                         path=str(resonance_path), line=lineno)
                    try:
                        resonances.append((float(parts[0]), float(parts[1])))
                    except ValueError as exc:
                        raise ParseError("unparseable resonance pair",
                                         path=str(resonance_path), line=lineno) from exc
    else:
        raise ValidationError(f"unknown resonance mode {resonance_mode!r}")

    resonances.sort(key=lambda bg: bg[1])
    return SpectralDataset(
        discrete_r=np.asarray(values, dtype=float),
        multiplicities=np.asarray(mults, dtype=int),
        exceptional=tuple(exceptional),
        resonances=tuple(resonances),
        completeness_bound=completeness,
        mu0=mu0,
        source={"eigen": str(eigen_path),
                "zeros": str(zeros_path) if zeros_path else None,
                "resonances": str(resonance_path) if resonance_path else None,
                "mode": resonance_mode},
    )


def data_dir() -> Path:
    env = os.environ.get("SELBERG_LAB_DATA")
    if env:
        return Path(env)
    return Path(str(resources.files("selberg_lab") / "data"))


def load_default_dataset(mu0: float = 1.0) -> SpectralDataset:
    """The bundled modular dataset (Maass ordinates + Riemann zeros)."""
    base = data_dir()
    return load_spectral_dataset(base / "maass_modular.txt",
                                 zeros_path=base / "riemann_zeros.txt",
                                 resonance_mode="riemann_half", mu0=mu0)


def resonance_counting_constant(data: SpectralDataset) -> float:
    """Smallest A with #{gamma_alpha <= x} <= A x^2 across the dataset."""
    if not data.resonances:
        return 0.0
    gammas = np.array([g for _, g in data.resonances])
    counts = np.arange(1, len(gammas) + 1)
    return float(np.max(counts / gammas ** 2))


# ----------------------------------------------------------------------
# generic group descriptor files
# ----------------------------------------------------------------------

def load_group_descriptor(path) -> GroupDescriptor:
    """Parse a generic-group descriptor file.

    Keys: area, cusps, elliptic (order count; repeatable), tr_phi_half, b1,
    B0, x0, optional phi_pole (repeatable), then a ``classes:`` section of
    ``primitive_norm multiplicity`` lines.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError("descriptor file not found", path=str(path), line=0)
    scalars = {}
    elliptic = []
    phi_poles = [1.0]
    classes = []
    in_classes = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.lower().startswith("classes:"):
                in_classes = True
                continue
            if in_classes:
                parts = line.split()
                if len(parts) != 2:
                    raise ParseError("expected 'primitive_norm multiplicity'",
                                     path=str(path), line=lineno)
                classes.append((float(parts[0]), int(parts[1])))
                continue
            key, _, val = line.partition(":")
            key = key.strip().lower()
            val = val.strip()
            try:
                if key == "elliptic":
                    order, count = val.split()
                    elliptic.append((int(order), int(count)))
                elif key == "phi_pole":
                    phi_poles.append(float(val))
                elif key in ("area", "tr_phi_half", "b1", "b0_norm", "x0", "b0"):
                    scalars[key] = float(val)
                elif key == "cusps":
                    scalars[key] = int(val)
                else:
                    raise ParseError(f"unknown key {key!r}", path=str(path), line=lineno)
            except ParseError:
                raise
            except ValueError as exc:
                raise ParseError(f"bad value for {key!r}", path=str(path),
                                 line=lineno) from exc
    try:
        return GroupDescriptor(
            name=path.stem,
            area=scalars["area"],
            cusp_count=scalars["cusps"],
            elliptic_classes=tuple(elliptic),
            tr_phi_half=scalars["tr_phi_half"],
            b1=scalars["b1"],
            B0=scalars["b0"],
            x0=scalars.get("x0", 2.0),
            phi_poles=tuple(sorted(set(phi_poles))),
            has_scattering=False,
            class_list=tuple(classes) if classes else None,
        )
    except KeyError as exc:
        raise ParseError(f"missing required key {exc}", path=str(path), line=0)
