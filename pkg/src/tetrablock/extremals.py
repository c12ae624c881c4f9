"""Analytic function families on the tetrablock and the symmetrized bidisc,
and the distance-type quantities built from them.

The families shipped here map the domains holomorphically into the unit
disc, so any Mobius distance between their values at two points is a
certified lower bound for the Caratheodory pseudodistance of the pair.  The
supremum of the Psi-family bounds (with and without the coordinate swap) is
exposed separately as ``p_e``; it is always dominated by the full lower
bound, and on some pairs it is *strictly* smaller -- the separation that the
``magic_f`` map detects.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from .angle_search import AngleGrid, max_on_circle
from .domains import DEFAULT_BOUNDARY_TOL, G2Point, TetraPoint, is_interior
from .errors import BranchError, DomainError, PoleError
from .hyperbolic import HyperbolicDistance, mobius_m, require_unimodular

#: default circle resolution for distance-type suprema
OMEGA_GRID = AngleGrid(n_angles=1024, refine_iters=60)

_POLE_TOL = 1e-14


def psi_eta(eta: complex, z) -> complex:
    """The rational membership family (eta z3 - z2) / (eta z1 - 1).

    Requires eta in the closed disc and eta z1 != 1; on interior points the
    value has modulus < 1.
    """
    z = TetraPoint.of(z)
    eta = complex(eta)
    if abs(eta) > 1.0 + 1e-12:
        raise DomainError(f"eta must lie in the closed disc, got |eta| = {abs(eta)}")
    den = eta * z.z1 - 1.0
    if abs(den) < _POLE_TOL:
        raise PoleError(f"psi_eta pole: |eta*z1 - 1| = {abs(den)}")
    return (eta * z.z3 - z.z2) / den


def sigma(z) -> TetraPoint:
    """Swap of the first two coordinates; an involutive automorphism."""
    z = TetraPoint.of(z)
    return TetraPoint(z.z2, z.z1, z.z3)


def f_omega_automorphism(omega: complex, z) -> TetraPoint:
    """The rotation (z1, z2, z3) -> (omega z1, z2, omega z3), |omega| = 1."""
    omega = require_unimodular(omega)
    z = TetraPoint.of(z)
    return TetraPoint(omega * z.z1, z.z2, omega * z.z3)


def magic_f(z) -> complex:
    """z2 / sqrt(1 + z3 - z1 z2) with the principal branch.

    On interior points 1 + z3 - z1 z2 stays in the open right half-plane
    (|z1 z2 - z3| < 1 there), the branch is safe, and the value has
    modulus < 1.  A non-positive real part signals non-interior input.
    """
    z = TetraPoint.of(z)
    d = 1.0 + z.z3 - z.z1 * z.z2
    if d.real <= 0.0:
        raise BranchError(f"Re(1 + z3 - z1 z2) = {d.real} <= 0; input not interior")
    return z.z2 / cmath.sqrt(d)


def g2_f(omega: complex, w) -> complex:
    """The symmetrized-bidisc family (2 omega p - s) / (2 - omega s)."""
    omega = require_unimodular(omega)
    w = G2Point.of(w)
    den = 2.0 - omega * w.s
    if abs(den) < _POLE_TOL:
        raise PoleError(f"g2_f pole: |2 - omega*s| = {abs(den)}")
    return (2.0 * omega * w.p - w.s) / den


# ---------------------------------------------------------------------------
# gradient-equipped function objects (used by the necessary-condition checker)
# ---------------------------------------------------------------------------


class PsiOmegaMap:
    """Psi_eta as a map on C^3, optionally precomposed with the coordinate
    swap and postmultiplied by a unimodular factor.

    ``factor * Psi_eta(sigma^k z)`` with k in {0, 1}; carries closed-form
    partial derivatives.
    """

    def __init__(self, eta: complex, *, swap_first: bool = False, factor: complex = 1.0):
        self.eta = complex(eta)
        self.swap_first = bool(swap_first)
        self.factor = complex(factor)

    def __call__(self, point) -> complex:
        z = TetraPoint.of(point)
        if self.swap_first:
            z = sigma(z)
        return self.factor * psi_eta(self.eta, z)

    def gradient(self, point) -> Tuple[complex, complex, complex]:
        z = TetraPoint.of(point)
        if self.swap_first:
            z = sigma(z)
        eta = self.eta
        den = eta * z.z1 - 1.0
        if abs(den) < _POLE_TOL:
            raise PoleError("psi gradient pole")
        d1 = -eta * (eta * z.z3 - z.z2) / den ** 2
        d2 = -1.0 / den
        d3 = eta / den
        if self.swap_first:
            d1, d2 = d2, d1
        return (self.factor * d1, self.factor * d2, self.factor * d3)


class MagicFMap:
    """The square-root family z2 / sqrt(1 + z3 - z1 z2), with gradient."""

    def __call__(self, point) -> complex:
        return magic_f(point)

    def gradient(self, point) -> Tuple[complex, complex, complex]:
        z = TetraPoint.of(point)
        d = 1.0 + z.z3 - z.z1 * z.z2
        if d.real <= 0.0:
            raise BranchError("gradient branch: input not interior")
        root = cmath.sqrt(d)
        den = 2.0 * d * root
        return (z.z2 ** 2 / den, (2.0 * d + z.z1 * z.z2) / den, -z.z2 / den)


class G2FMap:
    """g2_f(omega, .) as a map on C^2, with gradient."""

    def __init__(self, omega: complex, *, factor: complex = 1.0):
        self.omega = require_unimodular(omega)
        self.factor = complex(factor)

    def __call__(self, point) -> complex:
        return self.factor * g2_f(self.omega, point)

    def gradient(self, point) -> Tuple[complex, complex]:
        w = G2Point.of(point)
        omega = self.omega
        den = 2.0 - omega * w.s
        if abs(den) < _POLE_TOL:
            raise PoleError("g2_f gradient pole")
        d_s = (-2.0 + 2.0 * omega ** 2 * w.p) / den ** 2
        d_p = 2.0 * omega / den
        return (self.factor * d_s, self.factor * d_p)


class CoordinateMap:
    """The j-th coordinate function on C^dim, with gradient."""

    def __init__(self, index: int, dim: int):
        if not 0 <= index < dim:
            raise DomainError(f"coordinate index {index} out of range for dim {dim}")
        self.index = index
        self.dim = dim

    def __call__(self, point) -> complex:
        coords = tuple(point)
        return complex(coords[self.index])

    def gradient(self, point) -> Tuple[complex, ...]:
        return tuple(1.0 + 0.0j if j == self.index else 0.0j for j in range(self.dim))


# ---------------------------------------------------------------------------
# distance-type suprema
# ---------------------------------------------------------------------------


class ExtremalFamily(Enum):
    PSI_OMEGA = "psi-omega"
    PSI_OMEGA_SIGMA = "psi-omega-sigma"
    MAGIC_F = "magic-f"
    G2_F_OMEGA = "g2-f-omega"


@dataclass(frozen=True)
class ExtremalFamilyId:
    """A family tag, optionally pinned to one member by a unimodular omega."""

    tag: ExtremalFamily
    parameter: Optional[complex] = None

    def __post_init__(self):
        if self.parameter is not None:
            object.__setattr__(self, "parameter", require_unimodular(self.parameter))


def _psi_values(z: TetraPoint, thetas: np.ndarray) -> np.ndarray:
    eta = np.exp(1j * thetas)
    return (eta * z.z3 - z.z2) / (eta * z.z1 - 1.0)


def _mobius_m_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs((a - b) / (1.0 - np.conjugate(a) * b))


def _psi_family_bound(w: TetraPoint, z: TetraPoint, grid: AngleGrid,
                      swap: bool, parameter: Optional[complex]) -> float:
    if swap:
        w, z = sigma(w), sigma(z)
    if parameter is not None:
        return mobius_m(psi_eta(parameter, w), psi_eta(parameter, z))

    def values(thetas: np.ndarray) -> np.ndarray:
        return _mobius_m_array(_psi_values(w, thetas), _psi_values(z, thetas))

    _, val = max_on_circle(values, grid)
    return val


def _magic_bound(w: TetraPoint, z: TetraPoint, grid: AngleGrid,
                 parameter: Optional[complex]) -> float:
    return mobius_m(magic_f(w), magic_f(z))


def _g2_family_bound(w: G2Point, z: G2Point, grid: AngleGrid,
                     parameter: Optional[complex]) -> float:
    if parameter is not None:
        return mobius_m(g2_f(parameter, w), g2_f(parameter, z))

    def values(thetas: np.ndarray) -> np.ndarray:
        omega = np.exp(1j * thetas)
        a = (2.0 * omega * w.p - w.s) / (2.0 - omega * w.s)
        b = (2.0 * omega * z.p - z.s) / (2.0 - omega * z.s)
        return _mobius_m_array(a, b)

    _, val = max_on_circle(values, grid)
    return val


#: registry of bound evaluators; extendable without touching the optimizer
FAMILY_REGISTRY: Dict[ExtremalFamily, dict] = {
    ExtremalFamily.PSI_OMEGA: {
        "domain": "tetrablock",
        "bound": lambda w, z, grid, par: _psi_family_bound(w, z, grid, False, par),
    },
    ExtremalFamily.PSI_OMEGA_SIGMA: {
        "domain": "tetrablock",
        "bound": lambda w, z, grid, par: _psi_family_bound(w, z, grid, True, par),
    },
    ExtremalFamily.MAGIC_F: {
        "domain": "tetrablock",
        "bound": _magic_bound,
    },
    ExtremalFamily.G2_F_OMEGA: {
        "domain": "g2",
        "bound": _g2_family_bound,
    },
}

TETRABLOCK_FAMILIES = (ExtremalFamily.PSI_OMEGA, ExtremalFamily.PSI_OMEGA_SIGMA,
                       ExtremalFamily.MAGIC_F)


def register_family(tag: ExtremalFamily, *, domain: str, bound: Callable) -> None:
    """Register an additional lower-bound family evaluator."""
    FAMILY_REGISTRY[tag] = {"domain": domain, "bound": bound}


def _resolve_family(entry) -> ExtremalFamilyId:
    if isinstance(entry, ExtremalFamilyId):
        return entry
    if isinstance(entry, ExtremalFamily):
        return ExtremalFamilyId(entry)
    if isinstance(entry, str):
        return ExtremalFamilyId(ExtremalFamily(entry))
    raise DomainError(f"unrecognized family spec: {entry!r}")


def _require_interior_pair(w, z) -> Tuple[TetraPoint, TetraPoint]:
    w = TetraPoint.of(w)
    z = TetraPoint.of(z)
    for name, point in (("w", w), ("z", z)):
        if not is_interior(point, DEFAULT_BOUNDARY_TOL):
            raise DomainError(f"{name} must be interior to the tetrablock")
    return w, z


def p_e(w, z, grid: AngleGrid = OMEGA_GRID) -> HyperbolicDistance:
    """sup over unimodular omega of the Psi-family distances, with and
    without the coordinate swap applied to both arguments.

    A lower bound for the Caratheodory pseudodistance of the pair; dominated
    by ``caratheodory_lower_bound`` whenever both Psi families are included
    there.
    """
    w, z = _require_interior_pair(w, z)
    plain = _psi_family_bound(w, z, grid, False, None)
    swapped = _psi_family_bound(w, z, grid, True, None)
    return HyperbolicDistance.from_m(max(plain, swapped))


def caratheodory_lower_bound(w, z, families: Iterable = TETRABLOCK_FAMILIES,
                             grid: AngleGrid = OMEGA_GRID) -> HyperbolicDistance:
    """Best certified Caratheodory lower bound over the registered families.

    Each family contributes the Mobius distance of its values (maximized
    over the unimodular parameter where one exists); the result is reported
    as a lower bound, never as the pseudodistance itself.
    """
    family_ids = [_resolve_family(f) for f in families]
    if not family_ids:
        raise DomainError("families must be nonempty")
    w, z = _require_interior_pair(w, z)
    best = 0.0
    for fid in family_ids:
        spec = FAMILY_REGISTRY.get(fid.tag)
        if spec is None:
            raise DomainError(f"family {fid.tag} is not registered")
        if spec["domain"] != "tetrablock":
            raise DomainError(f"family {fid.tag.value} does not apply to tetrablock points")
        best = max(best, float(spec["bound"](w, z, grid, fid.parameter)))
    return HyperbolicDistance.from_m(best)


def g2_lower_bound(w, z, grid: AngleGrid = OMEGA_GRID) -> HyperbolicDistance:
    """Caratheodory lower bound on the symmetrized bidisc from its family."""
    w = G2Point.of(w)
    z = G2Point.of(z)
    return HyperbolicDistance.from_m(_g2_family_bound(w, z, grid, None))
