"""Analytic-disc constructions in the tetrablock and the symmetrized bidisc:
the origin-geodesic family, general in-domain discs, boundary discs, product
discs, disc transport, transported extremals, and the closed-form / search
machinery for Lempert-function values.

The origin-geodesic family through 0 is

    f(lam) = (w1 (phi(lam) + C)/(1 + C),
              w2 lam (1 + C phi(lam))/(1 + C),
              w1 w2 lam phi(lam)),

with phi a self-map of the closed disc, phi(0) = -C, C in [0, 1] and w1, w2
unimodular.  Composing with Psi_{conj(w1)} and dividing by w2 recovers the
disc parameter exactly, which is the left-inverse certificate used
throughout: every such disc realizes equality of the Lempert function and
the Caratheodory pseudodistance against the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, least_squares

from .angle_search import golden_max
from .domains import (DEFAULT_BOUNDARY_TOL, G2Point, Location, TetraPoint,
                      g2_membership, is_interior, tetra_e_value)
from .errors import DomainError, PoleError
from .extremals import PsiOmegaMap, psi_eta, sigma
from .hyperbolic import (TOL_CLOSURE, BlaschkeMap, HyperbolicDistance,
                         mobius_m, require_disc_point, require_unimodular)

#: deterministic sampling pattern used for residual and membership sweeps
DEFAULT_RADII: Tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_N_ANGLES = 16


def sample_grid(radii: Sequence[float] = DEFAULT_RADII,
                n_angles: int = DEFAULT_N_ANGLES) -> List[complex]:
    """Roots of unity scaled by the given radii; deterministic order."""
    return [r * cmath.exp(2j * math.pi * k / n_angles)
            for r in radii for k in range(n_angles)]


def _require_phi_open(phi: BlaschkeMap, name: str = "phi") -> BlaschkeMap:
    if phi.is_constant and abs(phi.constant_offset) >= 1.0:
        raise DomainError(f"{name} must map into the open disc")
    return phi


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OriginGeodesicParams:
    """Parameters of the origin-geodesic family: C in [0, 1], unimodular
    w1, w2, and phi into the closed disc with phi(0) = -C."""

    C: float
    omega1: complex
    omega2: complex
    phi: BlaschkeMap

    def __post_init__(self):
        c = float(self.C)
        if not -TOL_CLOSURE <= c <= 1.0 + TOL_CLOSURE:
            raise DomainError(f"C must lie in [0, 1], got {c}")
        c = min(max(c, 0.0), 1.0)
        object.__setattr__(self, "C", c)
        object.__setattr__(self, "omega1", require_unimodular(self.omega1, name="omega1"))
        object.__setattr__(self, "omega2", require_unimodular(self.omega2, name="omega2"))
        phi0 = complex(self.phi(0.0))
        if abs(phi0 + c) > 1e-12:
            raise DomainError(f"phi(0) must equal -C; got phi(0) = {phi0}, C = {c}")
        if c > 1.0 - 1e-12 and not self.phi.is_constant:
            # the closed-disc constraint pins phi identically to -1 here
            raise DomainError("C = 1 forces a constant phi = -1")


@dataclass(frozen=True)
class GeneralDiscParams:
    """Parameters of the general in-domain disc family: C in [0, 1) and two
    self-maps of the open disc (no value constraint at 0)."""

    C: float
    omega1: complex
    omega2: complex
    phi: BlaschkeMap
    psi: BlaschkeMap

    def __post_init__(self):
        c = float(self.C)
        if not -TOL_CLOSURE <= c < 1.0:
            raise DomainError(f"C must lie in [0, 1), got {c}")
        object.__setattr__(self, "C", max(c, 0.0))
        object.__setattr__(self, "omega1", require_unimodular(self.omega1, name="omega1"))
        object.__setattr__(self, "omega2", require_unimodular(self.omega2, name="omega2"))
        _require_phi_open(self.phi, "phi")
        _require_phi_open(self.psi, "psi")


@dataclass(frozen=True)
class G2GeodesicParams:
    """Origin geodesics of the symmetrized bidisc: C in [1, 2], unimodular
    omega."""

    C: float
    omega: complex

    def __post_init__(self):
        c = float(self.C)
        if not 1.0 - TOL_CLOSURE <= c <= 2.0 + TOL_CLOSURE:
            raise DomainError(f"C must lie in [1, 2], got {c}")
        object.__setattr__(self, "C", min(max(c, 1.0), 2.0))
        object.__setattr__(self, "omega", require_unimodular(self.omega))


# ---------------------------------------------------------------------------
# disc evaluators
# ---------------------------------------------------------------------------


def _origin_coords(p: OriginGeodesicParams, lam):
    phival = p.phi(lam)
    f1 = p.omega1 * (phival + p.C) / (1.0 + p.C)
    f2 = p.omega2 * lam * (1.0 + p.C * phival) / (1.0 + p.C)
    f3 = p.omega1 * p.omega2 * lam * phival
    return f1, f2, f3


def eval_origin_geodesic(p: OriginGeodesicParams, lam: complex) -> TetraPoint:
    """Evaluate the origin geodesic at a point of the open disc; f(0) = 0."""
    lam = require_disc_point(lam, name="lam")
    return TetraPoint(*_origin_coords(p, lam))


def origin_geodesic_disc(p: OriginGeodesicParams) -> Callable[[complex], TetraPoint]:
    return lambda lam: TetraPoint(*_origin_coords(p, lam))


def certified_left_inverse(p: OriginGeodesicParams, *, swapped: bool = False) -> PsiOmegaMap:
    """The left inverse conj(w2) * Psi_{conj(w1)} certifying the geodesic.

    With ``swapped`` the inverse is precomposed with the coordinate swap,
    matching discs of the form sigma o f.
    """
    return PsiOmegaMap(p.omega1.conjugate(), swap_first=swapped,
                       factor=p.omega2.conjugate())


def _general_coords(p: GeneralDiscParams, lam):
    phival = p.phi(lam)
    psival = p.psi(lam)
    f1 = p.omega1 * (phival + p.C) / (1.0 + p.C)
    f2 = p.omega2 * psival * (1.0 + p.C * phival) / (1.0 + p.C)
    f3 = p.omega1 * p.omega2 * phival * psival
    return f1, f2, f3


def eval_general_disc(p: GeneralDiscParams, lam: complex) -> TetraPoint:
    """Evaluate the general disc; its image always stays inside the domain,
    and the disc is a geodesic whenever psi is a disc automorphism."""
    lam = require_disc_point(lam, name="lam")
    return TetraPoint(*_general_coords(p, lam))


def general_disc(p: GeneralDiscParams) -> Callable[[complex], TetraPoint]:
    return lambda lam: TetraPoint(*_general_coords(p, lam))


def _boundary_coords(C: float, omega1: complex, omega2: complex, phi: BlaschkeMap, lam):
    phival = phi(lam)
    f1 = omega1 * (phival + C) / (1.0 + C)
    f2 = omega2 * (1.0 + C * phival) / (1.0 + C)
    f3 = omega1 * omega2 * phival
    return f1, f2, f3


def eval_boundary_disc(C: float, omega1: complex, omega2: complex,
                       phi: BlaschkeMap, lam: complex) -> TetraPoint:
    """A non-constant analytic disc lying entirely on the boundary.

    The defining functional evaluates to (1 - |phi|^2) + |phi|^2 = 1
    identically, so the image sits on the boundary at every point.
    """
    if not -TOL_CLOSURE <= C <= 1.0 + TOL_CLOSURE:
        raise DomainError(f"C must lie in [0, 1], got {C}")
    omega1 = require_unimodular(omega1, name="omega1")
    omega2 = require_unimodular(omega2, name="omega2")
    _require_phi_open(phi)
    lam = require_disc_point(lam, name="lam")
    return TetraPoint(*_boundary_coords(min(max(float(C), 0.0), 1.0), omega1, omega2, phi, lam))


def boundary_disc(C: float, omega1: complex, omega2: complex,
                  phi: BlaschkeMap) -> Callable[[complex], TetraPoint]:
    return lambda lam: eval_boundary_disc(C, omega1, omega2, phi, lam)


def product_disc(a: BlaschkeMap, b: BlaschkeMap, lam: complex) -> TetraPoint:
    """The disc lam -> (a(lam), b(lam), a(lam) b(lam)).

    Its image lies in the slice {z1 z2 = z3}; the disc is a geodesic when
    one of the factors is a disc automorphism (see ``is_product_geodesic``).
    """
    _require_phi_open(a, "a")
    _require_phi_open(b, "b")
    lam = require_disc_point(lam, name="lam")
    av, bv = a(lam), b(lam)
    return TetraPoint(av, bv, av * bv)


def product_disc_map(a: BlaschkeMap, b: BlaschkeMap) -> Callable[[complex], TetraPoint]:
    return lambda lam: product_disc(a, b, lam)


def is_product_geodesic(a: BlaschkeMap, b: BlaschkeMap) -> bool:
    return a.is_automorphism or b.is_automorphism


# ---------------------------------------------------------------------------
# residuals and verification
# ---------------------------------------------------------------------------


def left_inverse_residual(f: Callable, F: Callable, *,
                          radii: Sequence[float] = DEFAULT_RADII,
                          n_angles: int = DEFAULT_N_ANGLES) -> float:
    """max over the sampling grid of |F(f(lam)) - lam|."""
    worst = 0.0
    for lam in sample_grid(radii, n_angles):
        worst = max(worst, abs(complex(F(f(lam))) - lam))
    return worst


class DiscVerdict(Enum):
    GEODESIC_VERIFIED = "geodesic-verified"
    IN_DOMAIN_ONLY = "in-domain-only"
    FAILED = "failed"


@dataclass(frozen=True)
class DiscVerificationReport:
    """Outcome of a disc sweep: worst in-domain functional value, left
    inverse residual (inf when no left inverse was supplied), and verdict."""

    max_e_value: float
    left_inverse_residual: float
    samples: int
    verdict: DiscVerdict


def verify_disc(f: Callable, F: Optional[Callable] = None, *,
                domain: str = "tetrablock",
                residual_tol: float = 1e-10,
                radii: Sequence[float] = DEFAULT_RADII,
                n_angles: int = DEFAULT_N_ANGLES) -> DiscVerificationReport:
    """Sweep a disc for membership and (optionally) a left-inverse identity.

    Verdict: GEODESIC_VERIFIED needs the image inside the open domain and
    residual below tolerance; without a left inverse the best verdict is
    IN_DOMAIN_ONLY.
    """
    grid = sample_grid(radii, n_angles)
    worst_e = 0.0
    for lam in grid:
        point = f(lam)
        if domain == "tetrablock":
            worst_e = max(worst_e, tetra_e_value(point))
        elif domain == "g2":
            worst_e = max(worst_e, g2_membership(point).max_root_modulus)
        else:
            raise DomainError(f"unknown domain {domain!r}")
    in_domain = worst_e < 1.0
    if F is None:
        verdict = DiscVerdict.IN_DOMAIN_ONLY if in_domain else DiscVerdict.FAILED
        return DiscVerificationReport(worst_e, math.inf, len(grid), verdict)
    residual = left_inverse_residual(f, F, radii=radii, n_angles=n_angles)
    if in_domain and residual < residual_tol:
        verdict = DiscVerdict.GEODESIC_VERIFIED
    else:
        verdict = DiscVerdict.FAILED
    return DiscVerificationReport(worst_e, residual, len(grid), verdict)


# ---------------------------------------------------------------------------
# disc transport
# ---------------------------------------------------------------------------


class TransportClass(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    MIXED = "mixed"


class TransportedDisc:
    """The transported disc (f1(lam)/lam, f2(lam), f3(lam)/lam).

    Requires f1(0) = f3(0) = 0; the removable singularity at 0 is filled by
    derivative values computed as the discrete circle mean of f_j(z)/z
    (radius 1e-5, 64 points), which annihilates every Taylor mode below
    order 64 and is therefore exact to machine precision for analytic input.
    The image lies either entirely inside the domain or entirely on its
    boundary; ``classify`` reports which.
    """

    def __init__(self, f: Callable[[complex], TetraPoint], *,
                 deriv_radius: float = 1e-5, deriv_points: int = 64):
        self._f = f
        origin = TetraPoint.of(f(0.0))
        if abs(origin.z1) > 1e-12 or abs(origin.z3) > 1e-12:
            raise DomainError("transport needs f1(0) = f3(0) = 0")
        nodes = [deriv_radius * cmath.exp(2j * math.pi * k / deriv_points)
                 for k in range(deriv_points)]
        acc1 = 0.0j
        acc3 = 0.0j
        for node in nodes:
            value = TetraPoint.of(f(node))
            acc1 += value.z1 / node
            acc3 += value.z3 / node
        self._at_zero = TetraPoint(acc1 / deriv_points, origin.z2, acc3 / deriv_points)

    @property
    def value_at_zero(self) -> TetraPoint:
        return self._at_zero

    def __call__(self, lam: complex) -> TetraPoint:
        if abs(lam) < 1e-12:
            return self._at_zero
        value = TetraPoint.of(self._f(lam))
        return TetraPoint(value.z1 / lam, value.z2, value.z3 / lam)

    def classify(self, *, radii: Sequence[float] = DEFAULT_RADII,
                 n_angles: int = DEFAULT_N_ANGLES,
                 boundary_tol: float = 1e-8) -> TransportClass:
        values = [tetra_e_value(self(lam)) for lam in sample_grid(radii, n_angles)]
        values.append(tetra_e_value(self._at_zero))
        if max(abs(v - 1.0) for v in values) <= boundary_tol:
            return TransportClass.BOUNDARY
        if max(values) < 1.0 - boundary_tol:
            return TransportClass.INTERIOR
        return TransportClass.MIXED


def transport_disc(f: Callable[[complex], TetraPoint], *,
                   deriv_radius: float = 1e-5,
                   deriv_points: int = 64) -> TransportedDisc:
    """Transport a disc with f1(0) = f3(0) = 0 to (f1/lam, f2, f3/lam)."""
    return TransportedDisc(f, deriv_radius=deriv_radius, deriv_points=deriv_points)


def transported_extremal(C: float, omega1: complex, omega2: complex,
                         phi: BlaschkeMap, lam: complex) -> TetraPoint:
    """Transported origin geodesic: an extremal disc avoiding {z1 z2 = z3}.

    ``lam -> (w1 (phi(lam)+C)/(lam (1+C)), w2 lam (1+C phi(lam))/(1+C),
    w1 w2 phi(lam))`` for non-automorphism phi with phi(0) = -C, C in (0, 1).
    At 0 the value is (w1 phi'(0)/(1+C), 0, -w1 w2 C), interior because
    |phi'(0)| < 1 - C^2 strictly for non-automorphisms.
    """
    disc = transported_extremal_disc(C, omega1, omega2, phi)
    return disc(lam)


def transported_extremal_disc(C: float, omega1: complex, omega2: complex,
                              phi: BlaschkeMap) -> Callable[[complex], TetraPoint]:
    C = float(C)
    if not 0.0 < C < 1.0:
        raise DomainError(f"C must lie in (0, 1), got {C}")
    if phi.is_automorphism:
        raise DomainError("phi must not be an automorphism")
    omega1 = require_unimodular(omega1, name="omega1")
    omega2 = require_unimodular(omega2, name="omega2")
    if abs(complex(phi(0.0)) + C) > 1e-12:
        raise DomainError("phi(0) must equal -C")

    def evaluate(lam: complex) -> TetraPoint:
        if abs(lam) < 1e-12:
            return TetraPoint(omega1 * phi.derivative(0.0) / (1.0 + C), 0.0,
                              -omega1 * omega2 * C)
        phival = phi(lam)
        return TetraPoint(omega1 * (phival + C) / (lam * (1.0 + C)),
                          omega2 * lam * (1.0 + C * phival) / (1.0 + C),
                          omega1 * omega2 * phival)

    return evaluate


# ---------------------------------------------------------------------------
# closed-form Lempert values
# ---------------------------------------------------------------------------


def lempert_special(z: complex, w: complex) -> HyperbolicDistance:
    """Lempert-function value of the pair (0, 0, w), (0, z, w): m-scale
    |z| / (1 - |w|), for |z| + |w| < 1."""
    z = complex(z)
    w = complex(w)
    if abs(z) + abs(w) >= 1.0:
        raise DomainError(f"need |z| + |w| < 1, got {abs(z) + abs(w)}")
    return HyperbolicDistance.from_m(abs(z) / (1.0 - abs(w)))


# ---------------------------------------------------------------------------
# symmetrized bidisc discs
# ---------------------------------------------------------------------------


def g2_disc_raw(C: float, omega: complex, lam: complex) -> G2Point:
    """The two-coordinate disc formula without the parameter-window check.

    Out-of-window C is allowed here so violation witnesses can be hunted;
    inside [1, 2] the denominators are bounded away from zero on the disc.
    """
    omega = require_unimodular(omega)
    den1 = omega * lam * (1.0 - C) - 1.0
    den2 = 1.0 - lam * omega * (1.0 - C)
    if abs(den2) < 1e-15:
        raise PoleError("g2 disc pole inside the disc")
    s = 2.0 * (2.0 - C) * lam / den1
    p = lam * (lam - omega.conjugate() * (1.0 - C)) / den2
    return G2Point(s, p)


def g2_origin_geodesic(p: G2GeodesicParams, lam: complex) -> G2Point:
    """Evaluate the origin geodesic of the symmetrized bidisc; f(0) = (0, 0)."""
    lam = require_disc_point(lam, name="lam")
    return g2_disc_raw(p.C, p.omega, lam)


def g2_geodesic_disc(p: G2GeodesicParams) -> Callable[[complex], G2Point]:
    return lambda lam: g2_disc_raw(p.C, p.omega, lam)


def g2_violation_witness(C: float, omega: complex, *,
                         radii: Optional[Sequence[float]] = None,
                         n_angles: int = 64,
                         tol: float = DEFAULT_BOUNDARY_TOL) -> Optional[complex]:
    """Grid-search a lam with the out-of-window disc leaving the domain.

    Returns a witness lam, or None when every sample stays interior (the
    expected outcome for C in [1, 2]).
    """
    if radii is None:
        radii = tuple(np.linspace(0.05, 0.95, 19))
    for lam in sample_grid(radii, n_angles):
        try:
            point = g2_disc_raw(C, omega, lam)
        except PoleError:
            return lam
        if g2_membership(point, tol).location is not Location.INTERIOR:
            return lam
    return None


# ---------------------------------------------------------------------------
# two-point interpolation with origin constraint
# ---------------------------------------------------------------------------


def blaschke_interp_origin(C: float, lam0: complex, v: complex) -> BlaschkeMap:
    """A BlaschkeMap phi with phi(0) = -C and phi(lam0) = v.

    Feasible exactly when m(-C, v) <= |lam0| (Schwarz-Pick).  The
    construction is scaled degree <= 1: writing phi = s*zeta*(lam - b)/(1 -
    conj(b) lam) with b = (C/s) conj(zeta) enforces phi(0) = -C, and the
    value condition reduces to |x(s)| = |lam0| for x(s) = s(v + C)/(s^2 +
    vC), a one-dimensional root problem in the scale s on (C, 1].
    """
    C = float(C)
    if not -TOL_CLOSURE <= C <= 1.0 + TOL_CLOSURE:
        raise DomainError(f"C must lie in [0, 1], got {C}")
    C = min(max(C, 0.0), 1.0)
    lam0 = complex(lam0)
    v = complex(v)
    r = abs(lam0)
    if r <= 0.0 or r >= 1.0:
        raise DomainError("lam0 must lie in the punctured open disc")

    if C > 1.0 - 1e-12:
        if abs(v + 1.0) > 1e-8:
            raise DomainError("with C = 1 the only self-map is phi = -1")
        return BlaschkeMap.constant(-1.0)

    m_cv = abs(v + C) / abs(1.0 + C * v)
    if m_cv > r * (1.0 + 1e-9):
        raise DomainError(f"infeasible interpolation: m(-C, v) = {m_cv} > |lam0| = {r}")
    if m_cv < 1e-13:
        return BlaschkeMap.constant(-C)

    def x_of(s: float) -> complex:
        return s * (v + C) / (s * s + v * C)

    def gap(s: float) -> float:
        den = abs(s * s + v * C)
        if den < 1e-300:
            return 1e6
        return min(abs(x_of(s)), 1e6) - r

    lo = C + 1e-12 if C > 0 else 1e-12
    if gap(1.0) > 0.0:
        # only possible within root-finding noise of the automorphism case
        s_star = 1.0
    else:
        s_star = brentq(gap, lo, 1.0, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    x = x_of(s_star)
    zeta = x / lam0
    zeta /= abs(zeta)
    s_star = min(max(s_star, 0.0), 1.0)
    b = (C / s_star) * zeta.conjugate() if C > 0 else 0.0j
    if abs(b) >= 1.0:
        b *= (1.0 - 1e-15) / abs(b)
    return BlaschkeMap(unimodular_factor=zeta, zeros=(b,), scale=s_star)


# ---------------------------------------------------------------------------
# origin-geodesic solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OriginGeodesicSolution:
    """A solved origin geodesic hitting a target: f(lam0) = z with
    f = sigma o (family disc) when ``swapped``."""

    params: OriginGeodesicParams
    lam0: complex
    swapped: bool
    residual: float

    def disc(self) -> Callable[[complex], TetraPoint]:
        base = origin_geodesic_disc(self.params)
        if self.swapped:
            return lambda lam: sigma(base(lam))
        return base

    def left_inverse(self) -> PsiOmegaMap:
        return certified_left_inverse(self.params, swapped=self.swapped)

    @property
    def value(self) -> HyperbolicDistance:
        return HyperbolicDistance.from_m(abs(self.lam0))


def _candidate_at(zz: TetraPoint, theta: float) -> Optional[OriginGeodesicSolution]:
    """Assemble params for one circle angle; returns None when inconsistent."""
    eta = cmath.exp(1j * theta)
    try:
        mu = psi_eta(eta, zz)
    except PoleError:
        return None
    if abs(mu) < 1e-13 or abs(mu) >= 1.0:
        return None
    v = eta * zz.z3 / mu
    # one real scale C must satisfy two complex linear conditions;
    # solve in least squares and let the final residual arbitrate
    a1 = eta.conjugate() - zz.z1
    b1 = zz.z1 - eta.conjugate() * v
    a2 = mu * v - zz.z2
    b2 = zz.z2 - mu
    den = abs(a1) ** 2 + abs(a2) ** 2
    if den < 1e-20:
        return None
    C = ((a1.conjugate() * b1 + a2.conjugate() * b2).real) / den
    if C < -1e-9 or C > 1.0 + 1e-9:
        return None
    C = min(max(C, 0.0), 1.0)
    if C > 1.0 - 1e-9:
        if abs(v + 1.0) > 1e-7:
            return None
        phi = BlaschkeMap.constant(-1.0)
        C = 1.0
    else:
        if abs(1.0 + C * v) < 1e-14:
            return None
        m_cv = abs(v + C) / abs(1.0 + C * v)
        if m_cv > abs(mu) * (1.0 + 1e-9):
            return None
        try:
            phi = blaschke_interp_origin(C, mu, v)
        except (DomainError, ValueError):
            return None
    try:
        params = OriginGeodesicParams(C, eta.conjugate(), 1.0, phi)
    except DomainError:
        return None
    value = TetraPoint(*_origin_coords(params, mu))
    residual = max(abs(value.z1 - zz.z1), abs(value.z2 - zz.z2), abs(value.z3 - zz.z3))
    return OriginGeodesicSolution(params, mu, False, residual)


def _im_c_profile(zz: TetraPoint, thetas: np.ndarray) -> np.ndarray:
    eta = np.exp(1j * thetas)
    mu = (eta * zz.z3 - zz.z2) / (eta * zz.z1 - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(np.abs(mu) > 1e-13, eta * zz.z3 / mu, np.nan)
        c = (eta * zz.z1 - v) / (1.0 - eta * zz.z1)
    return np.imag(c)


def _candidate_angles(zz: TetraPoint, n_grid: int) -> List[float]:
    thetas = np.linspace(0.0, 2.0 * math.pi, n_grid, endpoint=False)
    im = _im_c_profile(zz, thetas)
    finite = np.isfinite(im)
    out: List[float] = []

    if finite.any() and np.nanmax(np.abs(im)) < 1e-9:
        # the condition holds identically; any angle works
        return [2.0 * math.pi * k / 8.0 for k in range(8)]

    def scalar(theta: float) -> float:
        val = _im_c_profile(zz, np.array([theta]))[0]
        return val if np.isfinite(val) else 1e9

    step = 2.0 * math.pi / n_grid
    for k in range(n_grid):
        k2 = (k + 1) % n_grid
        if not (finite[k] and finite[k2]):
            continue
        t1 = thetas[k]
        t2 = thetas[k] + step
        if im[k] == 0.0:
            out.append(float(t1))
        elif im[k] * im[k2] < 0.0 and abs(im[k]) < 1e3 and abs(im[k2]) < 1e3:
            try:
                out.append(float(brentq(scalar, t1, t2, xtol=1e-15, maxiter=200)))
            except ValueError:
                pass
    # tangential near-zeros without a sign change
    absim = np.where(finite, np.abs(im), np.inf)
    for k in range(n_grid):
        prev_i = (k - 1) % n_grid
        next_i = (k + 1) % n_grid
        if absim[k] < 1e-6 and absim[k] <= absim[prev_i] and absim[k] <= absim[next_i]:
            theta_ref, _ = golden_max(lambda t: -abs(scalar(t)),
                                      thetas[k] - step, thetas[k] + step, 60)
            out.append(float(theta_ref))
    deduped: List[float] = []
    for theta in sorted(t % (2.0 * math.pi) for t in out):
        if not deduped or abs(theta - deduped[-1]) > 1e-7:
            deduped.append(theta)
    return deduped


def _origin_solutions(z, n_grid: int = 2048,
                      residual_tol: float = 1e-8) -> List[OriginGeodesicSolution]:
    z = TetraPoint.of(z)
    if not is_interior(z):
        raise DomainError("target must be interior to the tetrablock")
    solutions: List[OriginGeodesicSolution] = []
    for swapped in (False, True):
        zz = sigma(z) if swapped else z
        for theta in _candidate_angles(zz, n_grid):
            sol = _candidate_at(zz, theta)
            if sol is not None and sol.residual < residual_tol:
                solutions.append(replace(sol, swapped=swapped))
    return solutions


def _solution_order(sol: OriginGeodesicSolution):
    return (abs(sol.lam0), sol.params.phi.degree, sol.params.C, sol.swapped)


def origin_lempert(z, *, n_grid: int = 2048) -> Optional[OriginGeodesicSolution]:
    """Solve for a geodesic through 0 and z; its |lam0| is the Lempert (and
    Caratheodory) m-scale value of the pair (0, z).  None if the closed-form
    scan fails, which does not prove non-existence."""
    z = TetraPoint.of(z)
    if max(abs(c) for c in z.as_tuple()) < 1e-13:
        params = OriginGeodesicParams(0.0, 1.0, 1.0, BlaschkeMap.constant(0.0))
        return OriginGeodesicSolution(params, 0.0, False, 0.0)
    solutions = _origin_solutions(z, n_grid)
    if not solutions:
        return None
    return min(solutions, key=_solution_order)


def solve_origin_geodesic_through(z, lam0: complex, phi_degree: int = 1,
                                  budget: int = 100000) -> Optional[OriginGeodesicSolution]:
    """Find origin-geodesic parameters with f(lam0) = z, trying the swap of
    the first two coordinates as well.

    Solvable only when |lam0| equals the Lempert value of (0, z); the budget
    scales the density of the circle scan.  ``phi_degree`` caps the Blaschke
    degree of the returned phi (the construction needs at most degree 1).
    Ties break toward the lowest degree, then the smallest C.
    """
    z = TetraPoint.of(z)
    lam0 = require_disc_point(lam0, name="lam0")
    n_grid = int(min(8192, max(256, budget // 32)))
    if abs(lam0) < 1e-13:
        if max(abs(c) for c in z.as_tuple()) < 1e-12:
            params = OriginGeodesicParams(0.0, 1.0, 1.0, BlaschkeMap.constant(0.0))
            return OriginGeodesicSolution(params, 0.0, False, 0.0)
        return None
    matches: List[OriginGeodesicSolution] = []
    for sol in _origin_solutions(z, n_grid):
        if abs(abs(sol.lam0) - abs(lam0)) > 1e-7 or sol.params.phi.degree > phi_degree:
            continue
        rho = sol.lam0 / lam0
        rho /= abs(rho)
        params = OriginGeodesicParams(sol.params.C, sol.params.omega1,
                                      sol.params.omega2 * rho,
                                      sol.params.phi.precompose_rotation(rho))
        zz = sigma(z) if sol.swapped else z
        value = TetraPoint(*_origin_coords(params, lam0))
        residual = max(abs(value.z1 - zz.z1), abs(value.z2 - zz.z2),
                       abs(value.z3 - zz.z3))
        if residual < 1e-8:
            matches.append(OriginGeodesicSolution(params, lam0, sol.swapped, residual))
    if not matches:
        return None
    return min(matches, key=lambda s: (s.params.phi.degree, s.params.C, s.swapped))


# ---------------------------------------------------------------------------
# upper-bound search for the Lempert function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscSearchResult:
    """Outcome of an interpolating-disc search.

    ``residual`` is |f(lam1) - w|^2 + |f(lam2) - z|^2 of the accepted disc;
    ``bound`` is a certified upper bound for the Lempert function once
    ``found`` is True.
    """

    found: bool
    bound: Optional[HyperbolicDistance]
    residual: float
    family: str
    lam1: Optional[complex] = None
    lam2: Optional[complex] = None


_SEARCH_ACCEPT = 1e-9


def _pair_residual(f: Callable, lam1: complex, w: TetraPoint,
                   lam2: complex, z: TetraPoint) -> float:
    p1 = TetraPoint.of(f(lam1))
    p2 = TetraPoint.of(f(lam2))
    return (sum(abs(a - b) ** 2 for a, b in zip(p1, w))
            + sum(abs(a - b) ** 2 for a, b in zip(p2, z)))


def _axis_pair_candidate(w: TetraPoint, z: TetraPoint) -> Optional[DiscSearchResult]:
    """Exact disc for pairs of the form (0, 0, c), (0, y, c), up to the
    coordinate swap and argument order."""
    for swapped in (False, True):
        a0 = sigma(w) if swapped else w
        b0 = sigma(z) if swapped else z
        for a, b, flipped in ((a0, b0, False), (b0, a0, True)):
            if (abs(a.z1) > 1e-13 or abs(a.z2) > 1e-13 or abs(b.z1) > 1e-13
                    or abs(b.z3 - a.z3) > 1e-12):
                continue
            c = a.z3
            y = b.z2
            C = abs(c)
            if C + abs(y) >= 1.0:
                continue
            omega1 = -c / C if C > 0 else 1.0
            lam2 = y / (1.0 - C)

            def disc(lam: complex, C=C, omega1=omega1) -> TetraPoint:
                return TetraPoint(0.0, lam * (1.0 - C), -omega1 * C)

            base = sigma if swapped else (lambda q: q)
            f = (lambda lam: base(disc(lam)))
            lam_w, lam_z = (lam2, 0.0) if flipped else (0.0, lam2)
            residual = _pair_residual(f, lam_w, w, lam_z, z)
            if residual < _SEARCH_ACCEPT:
                return DiscSearchResult(True, HyperbolicDistance.from_m(abs(lam2)),
                                        residual, "axis-pair", lam_w, lam_z)
    return None


def _product_pair_candidate(w: TetraPoint, z: TetraPoint) -> Optional[DiscSearchResult]:
    """Exact product disc for pairs in the slice {z1 z2 = z3}."""
    if abs(w.z1 * w.z2 - w.z3) > 1e-12 or abs(z.z1 * z.z2 - z.z3) > 1e-12:
        return None
    d1 = mobius_m(w.z1, z.z1)
    d2 = mobius_m(w.z2, z.z2)
    swap = d2 > d1
    if swap:
        w2, z2 = sigma(w), sigma(z)
    else:
        w2, z2 = w, z
    u2 = (z2.z1 - w2.z1) / (1.0 - w2.z1.conjugate() * z2.z1)
    if abs(u2) < 1e-15:
        target = max(d1, d2)
        if target > 1e-13:
            return None
        return DiscSearchResult(True, HyperbolicDistance.zero(), 0.0, "product", 0.0, 0.0)
    c = ((z2.z2 - w2.z2) / (1.0 - w2.z2.conjugate() * z2.z2)) / u2

    def f(t: complex) -> TetraPoint:
        av = (t + w2.z1) / (1.0 + w2.z1.conjugate() * t)
        bv = (c * t + w2.z2) / (1.0 + w2.z2.conjugate() * c * t)
        point = TetraPoint(av, bv, av * bv)
        return sigma(point) if swap else point

    residual = _pair_residual(f, 0.0, w, u2, z)
    if residual < _SEARCH_ACCEPT:
        return DiscSearchResult(True, HyperbolicDistance.from_m(abs(u2)),
                                residual, "product", 0.0, u2)
    return None


def _origin_pair_candidate(w: TetraPoint, z: TetraPoint) -> Optional[DiscSearchResult]:
    w_zero = max(abs(coord) for coord in w.as_tuple()) < 1e-13
    z_zero = max(abs(coord) for coord in z.as_tuple()) < 1e-13
    if not (w_zero or z_zero):
        return None
    target = z if w_zero else w
    sol = origin_lempert(target)
    if sol is None:
        return None
    f = sol.disc()
    lam_w, lam_z = (0.0, sol.lam0) if w_zero else (sol.lam0, 0.0)
    residual = _pair_residual(f, lam_w, w, lam_z, z)
    if residual < _SEARCH_ACCEPT:
        return DiscSearchResult(True, sol.value, residual, "origin-geodesic",
                                lam_w, lam_z)
    return None


def _squash(u: float, v: float, cap: float = 0.97) -> complex:
    r = math.hypot(u, v)
    if r < 1e-12:
        return 0.0j
    return complex(u, v) * (cap * math.tanh(r) / r)


def _decode_general(x: np.ndarray, degree: int) -> Tuple[GeneralDiscParams, complex, complex]:
    idx = 0

    def take(n: int):
        nonlocal idx
        vals = x[idx:idx + n]
        idx += n
        return vals

    C = 0.98 * 0.5 * (1.0 + math.tanh(take(1)[0]))
    omega1 = cmath.exp(1j * take(1)[0])
    omega2 = cmath.exp(1j * take(1)[0])

    def decode_map() -> BlaschkeMap:
        scale = 0.5 * (1.0 + math.tanh(take(1)[0]))
        rot = cmath.exp(1j * take(1)[0])
        zeros = tuple(_squash(*take(2)) for _ in range(degree))
        return BlaschkeMap(rot, zeros, scale)

    phi = decode_map()
    psi = decode_map()
    lam1 = _squash(*take(2), cap=0.995)
    lam2 = _squash(*take(2), cap=0.995)
    return GeneralDiscParams(C, omega1, omega2, phi, psi), lam1, lam2


def _generic_search(w: TetraPoint, z: TetraPoint, degree: int,
                    budget: int) -> Optional[DiscSearchResult]:
    """Multi-start interpolation search over the general disc family."""
    n_params = 3 + 2 * (2 + 2 * degree) + 4
    rng = np.random.default_rng(0)
    evals = 0
    best: Optional[DiscSearchResult] = None

    def residuals(x: np.ndarray) -> np.ndarray:
        nonlocal evals
        evals += 1
        params, lam1, lam2 = _decode_general(x, degree)
        f1 = _general_coords(params, lam1)
        f2 = _general_coords(params, lam2)
        out = []
        for got, want in zip(f1, w.as_tuple()):
            out.extend([(got - want).real, (got - want).imag])
        for got, want in zip(f2, z.as_tuple()):
            out.extend([(got - want).real, (got - want).imag])
        return np.asarray(out)

    def tension(x: np.ndarray, weight: float) -> np.ndarray:
        params, lam1, lam2 = _decode_general(x, degree)
        return np.concatenate([weight * residuals(x), [mobius_m(lam1, lam2)]])

    starts = 0
    while evals < budget and starts < 64:
        starts += 1
        x0 = rng.normal(scale=0.8, size=n_params)
        try:
            fit = least_squares(residuals, x0, method="trf", xtol=1e-15, ftol=1e-15,
                                gtol=1e-15, max_nfev=max(10, (budget - evals) // (n_params + 1)))
        except Exception:
            continue
        if fit.cost * 2.0 >= _SEARCH_ACCEPT:
            continue
        x_best = fit.x
        for weight in (3e4, 3e6):
            if evals >= budget:
                break
            try:
                polish = least_squares(tension, x_best, args=(weight,), method="trf",
                                       xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                       max_nfev=max(10, (budget - evals) // (n_params + 1)))
                x_try = polish.x
            except Exception:
                break
            if float(np.sum(residuals(x_try) ** 2)) < _SEARCH_ACCEPT:
                x_best = x_try
        params, lam1, lam2 = _decode_general(x_best, degree)
        res = float(np.sum(residuals(x_best) ** 2))
        if res < _SEARCH_ACCEPT:
            m = mobius_m(lam1, lam2)
            if best is None or m < best.bound.m_scale:
                best = DiscSearchResult(True, HyperbolicDistance.from_m(m), res,
                                        f"general-disc-deg{degree}", lam1, lam2)
    return best


def disc_search_upper_bound(w, z, family: str = "auto",
                            budget: int = 100000) -> DiscSearchResult:
    """Least Mobius distance of disc preimages found over interpolating
    families; a certified upper bound for the Lempert function.

    ``family`` is one of ``auto`` (closed-form routes, then a general-family
    search if none apply), ``axis-pair``, ``product``, ``origin-geodesic``,
    ``general-disc-deg1`` or ``general-disc-deg2``.  Interpolants are only
    accepted at quadratic residual below 1e-9; when nothing qualifies within
    budget the result carries ``found = False``.
    """
    known = {"auto", "axis-pair", "product", "origin-geodesic",
             "general-disc-deg1", "general-disc-deg2"}
    if family not in known:
        raise DomainError(f"unknown search family {family!r}; known: {sorted(known)}")
    w = TetraPoint.of(w)
    z = TetraPoint.of(z)
    for name, point in (("w", w), ("z", z)):
        if not is_interior(point):
            raise DomainError(f"{name} must be interior to the tetrablock")
    if max(abs(a - b) for a, b in zip(w, z)) < 1e-14:
        return DiscSearchResult(True, HyperbolicDistance.zero(), 0.0, "trivial", 0.0, 0.0)

    candidates: List[DiscSearchResult] = []
    if family in ("auto", "axis-pair"):
        cand = _axis_pair_candidate(w, z)
        if cand:
            candidates.append(cand)
    if family in ("auto", "product"):
        cand = _product_pair_candidate(w, z)
        if cand:
            candidates.append(cand)
    if family in ("auto", "origin-geodesic"):
        cand = _origin_pair_candidate(w, z)
        if cand:
            candidates.append(cand)
    if family.startswith("general-disc") or (family == "auto" and not candidates):
        degree = 2 if family.endswith("deg2") else 1
        cand = _generic_search(w, z, degree, budget)
        if cand:
            candidates.append(cand)
    if not candidates:
        return DiscSearchResult(False, None, math.inf, "none")
    return min(candidates, key=lambda c: c.bound.m_scale)
