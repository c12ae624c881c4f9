"""Membership and scaling functionals for the tetrablock and the symmetrized
bidisc.

The tetrablock is the domain of triples (z1, z2, z3) with

    |z1 - conj(z2) z3| + |z2 - conj(z1) z3| + |z3|^2 < 1,

and the symmetrized bidisc is the set of pairs (s, p) = (l + m, l * m) with
both l, m in the open unit disc.  Membership for the tetrablock is computed
two independent ways: directly through the defining functional above, and
through the supremum over unimodular eta of the rational family

    Psi_eta(z) = (eta z3 - z2) / (eta z1 - 1),

which stays below 1 in modulus exactly on the domain (for |z1| < 1, the
supremum over the closed disc in eta reduces to the circle by the maximum
principle).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .angle_search import AngleGrid, max_on_circle
from .errors import DomainError

#: default width of the boundary band in membership classification
DEFAULT_BOUNDARY_TOL = 1e-10

#: default circle resolution for the Psi supremum
PSI_GRID = AngleGrid(n_angles=1024, refine_iters=40)


class Location(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class TetraPoint:
    """A point of C^3, classified against the tetrablock."""

    z1: complex
    z2: complex
    z3: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        object.__setattr__(self, "z3", complex(self.z3))

    @staticmethod
    def of(value) -> "TetraPoint":
        if isinstance(value, TetraPoint):
            return value
        z1, z2, z3 = value
        return TetraPoint(z1, z2, z3)

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return (self.z1, self.z2, self.z3)

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True)
class G2Point:
    """A point (s, p) of C^2 classified against the symmetrized bidisc."""

    s: complex
    p: complex

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "p", complex(self.p))

    @staticmethod
    def of(value) -> "G2Point":
        if isinstance(value, G2Point):
            return value
        s, p = value
        return G2Point(s, p)

    @staticmethod
    def from_roots(lam: complex, mu: complex) -> "G2Point":
        return G2Point(lam + mu, lam * mu)

    def as_tuple(self) -> Tuple[complex, complex]:
        return (self.s, self.p)

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True)
class MembershipReport:
    location: Location
    e_value: float
    psi_sup: Optional[float]
    tolerance_used: float


@dataclass(frozen=True)
class G2MembershipReport:
    location: Location
    max_root_modulus: float
    roots: Tuple[complex, complex]
    tolerance_used: float


def e_value_raw(z1, z2, z3):
    """Defining functional of the tetrablock; accepts scalars or arrays."""
    return (abs(z1 - np.conjugate(z2) * z3)
            + abs(z2 - np.conjugate(z1) * z3)
            + abs(z3) ** 2)


def tetra_e_value(z) -> float:
    """|z1 - conj(z2) z3| + |z2 - conj(z1) z3| + |z3|^2, always >= 0."""
    z = TetraPoint.of(z)
    return float(e_value_raw(z.z1, z.z2, z.z3))


def _classify(value: float, tol: float) -> Location:
    if value < 1.0 - tol:
        return Location.INTERIOR
    if abs(value - 1.0) <= tol:
        return Location.BOUNDARY
    return Location.EXTERIOR


def tetra_membership(z, tol: float = DEFAULT_BOUNDARY_TOL, *,
                     with_psi_sup: bool = False,
                     grid: AngleGrid = PSI_GRID) -> MembershipReport:
    """Classify a point against the tetrablock by the defining functional.

    ``with_psi_sup`` additionally records the circle supremum of |Psi_eta|
    (requires |z1| < 1).
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    z = TetraPoint.of(z)
    e = tetra_e_value(z)
    sup = psi_sup(z, grid=grid) if with_psi_sup else None
    return MembershipReport(_classify(e, tol), e, sup, tol)


def is_interior(z, tol: float = DEFAULT_BOUNDARY_TOL) -> bool:
    return tetra_e_value(z) < 1.0 - tol


def psi_sup(z, grid: AngleGrid = PSI_GRID) -> float:
    """sup over |eta| = 1 of |Psi_eta(z)|; equals the closed-disc supremum.

    Dense angular grid plus golden-section refinement.  The value is < 1
    exactly when the defining functional is < 1 (membership cross-check),
    for any z with |z1| < 1.
    """
    z = TetraPoint.of(z)
    if abs(z.z1) >= 1.0:
        raise DomainError(f"psi_sup requires |z1| < 1, got {abs(z.z1)}")

    def values(thetas: np.ndarray) -> np.ndarray:
        eta = np.exp(1j * thetas)
        return np.abs((eta * z.z3 - z.z2) / (eta * z.z1 - 1.0))

    _, val = max_on_circle(values, grid)
    return val


def stable_quadratic_roots(s: complex, p: complex) -> Tuple[complex, complex]:
    """Roots of t^2 - s t + p = 0, sign-matched to avoid cancellation.

    Returns the roots ordered by decreasing modulus.
    """
    s = complex(s)
    p = complex(p)
    disc = s * s - 4.0 * p
    sq = cmath.sqrt(disc)
    # pick the branch that adds constructively to s
    if abs(s + sq) >= abs(s - sq):
        q = (s + sq) / 2.0
    else:
        q = (s - sq) / 2.0
    if q == 0.0:
        roots = (0.0 + 0.0j, s)
    else:
        try:
            other = p / q
        except (ZeroDivisionError, OverflowError):
            other = s - q
        if not (math.isfinite(other.real) and math.isfinite(other.imag)):
            # subnormal q: fall back on the root sum
            other = s - q
        roots = (complex(q), complex(other))
    return tuple(sorted(roots, key=lambda r: (-abs(r), r.real, r.imag)))


def g2_roots(w) -> Tuple[complex, complex]:
    w = G2Point.of(w)
    return stable_quadratic_roots(w.s, w.p)


def g2_membership(w, tol: float = DEFAULT_BOUNDARY_TOL) -> G2MembershipReport:
    """Classify (s, p) against the symmetrized bidisc via the root pair."""
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    w = G2Point.of(w)
    roots = g2_roots(w)
    worst = max(abs(r) for r in roots)
    return G2MembershipReport(_classify(worst, tol), worst, roots, tol)


def g2_is_interior(w, tol: float = DEFAULT_BOUNDARY_TOL) -> bool:
    return g2_membership(w, tol).location is Location.INTERIOR


def rho_functional(z, tol: float = 1e-12) -> float:
    """Quasi-homogeneous gauge of the tetrablock.

    rho(z) is the infimum of t > 0 such that (z1/t, z2/t, z3/t^2) stays in
    the closed domain, found by bisection; rho(0) = 0 by convention.  It
    scales as rho(l z1, l z2, l^2 z3) = |l| rho(z) and satisfies
    rho(z) < 1 iff z is interior.  Monotonicity of membership in t is a
    star-likeness assumption, exercised empirically by the test suite.
    """
    z = TetraPoint.of(z)
    if z.z1 == 0 and z.z2 == 0 and z.z3 == 0:
        return 0.0

    def scaled_e(t: float) -> float:
        return float(e_value_raw(z.z1 / t, z.z2 / t, z.z3 / t ** 2))

    hi = 2.0 * max(abs(z.z1), abs(z.z2), math.sqrt(abs(z.z3)), 1.0)
    for _ in range(60):
        if scaled_e(hi) < 1.0:
            break
        hi *= 2.0
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if scaled_e(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
