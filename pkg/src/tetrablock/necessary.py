"""Numerical checker for the quadratic necessary condition on complex
geodesics in circular domains.

For holomorphic f into a domain and F back to the disc with F o f = id, and
a one-parameter rotation family with weights (a_1, ..., a_n), the function

    psi(lam) = sum_j dF/dz_j(f(lam)) * i * a_j * f_j(lam)

must have the constrained quadratic form

    psi(lam) = -conj(psi0) lam^2 + i C lam + psi0,   C real.

The checker samples psi on a fixed disc grid, fits that three-real-parameter
model by least squares, and passes when the worst deviation is below
tolerance.  Equivalently, dividing by i, the weighted sum itself equals
conj(a) lam^2 + C lam + a with a = -i psi0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, FitError
from .geodesics import left_inverse_residual

#: fit grid: 4 radii x 16 angles, 64 samples
FIT_RADII: Tuple[float, ...] = (0.15, 0.35, 0.55, 0.75)
FIT_N_ANGLES = 16

#: default verdict tolerances
ANALYTIC_TOL = 1e-7
NUMERIC_TOL = 1e-5

#: hypothesis gate: F o f must be the identity this well before checking
HYPOTHESIS_TOL = 1e-8


@dataclass(frozen=True)
class CircularAction:
    """Rotation weights (a_1, ..., a_n) of a circular symmetry."""

    alpha: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))

    @property
    def dim(self) -> int:
        return len(self.alpha)


TETRABLOCK_ACTIONS = (CircularAction((1.0, 0.0, 1.0)), CircularAction((0.0, 1.0, 1.0)))
G2_ACTION = CircularAction((1.0, 2.0))


def vector_field(action: CircularAction, point) -> Tuple[complex, ...]:
    """Infinitesimal generator of the rotation family: i * a_j * z_j."""
    coords = tuple(complex(c) for c in point)
    if len(coords) != action.dim:
        raise DomainError(f"point has {len(coords)} coordinates, action has {action.dim}")
    return tuple(1j * a * c for a, c in zip(action.alpha, coords))


def fit_grid(radii: Sequence[float] = FIT_RADII,
             n_angles: int = FIT_N_ANGLES) -> List[complex]:
    return [r * cmath.exp(2j * math.pi * k / n_angles)
            for r in radii for k in range(n_angles)]


def numeric_gradient(fn: Callable, coords: Sequence[complex],
                     step: float = 1e-5) -> Tuple[complex, ...]:
    """Complex partial derivatives by 4-point central differences.

    Two central stencils at h and h/2 along the real axis of each
    coordinate, combined by Richardson extrapolation; valid because the
    target functions are holomorphic.
    """
    coords = tuple(complex(c) for c in coords)
    out = []
    for j in range(len(coords)):
        def shifted(delta: float) -> complex:
            probe = list(coords)
            probe[j] = probe[j] + delta
            return complex(fn(tuple(probe)))

        d_h = (shifted(step) - shifted(-step)) / (2.0 * step)
        d_h2 = (shifted(step / 2.0) - shifted(-step / 2.0)) / step
        out.append((4.0 * d_h2 - d_h) / 3.0)
    return tuple(out)


def gradient_of(F: Callable, coords: Sequence[complex]) -> Tuple[complex, ...]:
    """Closed-form gradient when the map carries one, numeric fallback."""
    grad = getattr(F, "gradient", None)
    if grad is not None:
        return tuple(grad(tuple(coords)))
    return numeric_gradient(F, coords)


def psi_of_lambda(F: Callable, f: Callable, action: CircularAction,
                  lam: complex) -> complex:
    """sum_j dF/dz_j(f(lam)) * gamma_j(f(lam)) for the rotation field."""
    coords = tuple(complex(c) for c in f(lam))
    grads = gradient_of(F, coords)
    if len(grads) != action.dim:
        raise DomainError("gradient dimension does not match the action")
    field = vector_field(action, coords)
    return sum(g * gamma for g, gamma in zip(grads, field))


@dataclass(frozen=True)
class QuadraticFit:
    """Constrained quadratic model -conj(psi0) lam^2 + i C lam + psi0."""

    psi0: complex
    C: float
    residual: float

    @property
    def circular_a(self) -> complex:
        """The constant in the equivalent form conj(a) lam^2 + C lam + a."""
        return -1j * self.psi0

    def evaluate(self, lam: complex) -> complex:
        return -self.psi0.conjugate() * lam * lam + 1j * self.C * lam + self.psi0


def _distinct_enough(lams: Sequence[complex]) -> bool:
    seen = set()
    for lam in lams:
        seen.add((round(lam.real, 12), round(lam.imag, 12)))
    return len(seen) >= 8


def fit_quadratic_form(samples: Sequence[Tuple[complex, complex]]) -> QuadraticFit:
    """Least-squares fit of the conjugate-coupled quadratic model.

    Unknowns are Re psi0, Im psi0 and the real C; the coupling between the
    lam^2 and constant coefficients is built into the (real) design matrix.
    Needs at least 8 distinct sample points; raises FitError on rank
    deficiency.
    """
    if len(samples) < 8:
        raise FitError(f"need at least 8 samples, got {len(samples)}")
    lams = [complex(lam) for lam, _ in samples]
    if not _distinct_enough(lams):
        raise FitError("sample points are not distinct enough")
    rows = []
    rhs = []
    for lam, value in samples:
        lam = complex(lam)
        value = complex(value)
        a, b = (lam * lam).real, (lam * lam).imag
        c, d = lam.real, lam.imag
        rows.append([1.0 - a, -b, -d])
        rhs.append(value.real)
        rows.append([-b, 1.0 + a, c])
        rhs.append(value.imag)
    matrix = np.asarray(rows)
    target = np.asarray(rhs)
    solution, _, rank, _ = np.linalg.lstsq(matrix, target, rcond=None)
    if rank < 3:
        raise FitError("rank-deficient fit (degenerate sample geometry)")
    psi0 = complex(solution[0], solution[1])
    C = float(solution[2])
    fit = QuadraticFit(psi0, C, 0.0)
    residual = max(abs(fit.evaluate(lam) - complex(value)) for lam, value in samples)
    return QuadraticFit(psi0, C, residual)


def fit_general_quadratic(samples: Sequence[Tuple[complex, complex]]
                          ) -> Tuple[complex, complex, complex, float]:
    """Unconstrained complex quadratic fit c0 + c1 lam + c2 lam^2.

    Used as a cross-check that the constrained structure (c0 small / c1
    purely of the expected type / c2 = conj(c0)) emerges from the data
    rather than from the constraint.
    """
    if len(samples) < 3:
        raise FitError("need at least 3 samples")
    lams = np.asarray([complex(lam) for lam, _ in samples])
    vals = np.asarray([complex(v) for _, v in samples])
    design = np.vander(lams, 3, increasing=True)
    coeffs, _, rank, _ = np.linalg.lstsq(design, vals, rcond=None)
    if rank < 3:
        raise FitError("rank-deficient fit")
    model = design @ coeffs
    residual = float(np.max(np.abs(model - vals)))
    return complex(coeffs[0]), complex(coeffs[1]), complex(coeffs[2]), residual


class CheckVerdict(Enum):
    PASS = "pass"
    FIT_FAIL = "fit-fail"
    HYPOTHESIS_VIOLATION = "hypothesis-violation"


@dataclass(frozen=True)
class NecessaryCheckReport:
    verdict: CheckVerdict
    fit: Optional[QuadraticFit]
    hypothesis_residual: float
    tolerance_used: float


def _verdict_tol(F: Callable, tol: Optional[float]) -> float:
    if tol is not None:
        return float(tol)
    return ANALYTIC_TOL if hasattr(F, "gradient") else NUMERIC_TOL


def geodesic_necessary_check(F: Callable, f: Callable, action: CircularAction,
                             tol: Optional[float] = None) -> NecessaryCheckReport:
    """Check the quadratic necessary condition for a certified geodesic.

    First verifies the hypothesis F o f = id on the sampling grid (a
    violation is reported distinctly from a fit failure), then fits psi on
    the standard grid and passes iff the worst deviation stays below
    tolerance (1e-7 with closed-form gradients, 1e-5 with numeric ones).
    """
    tol = _verdict_tol(F, tol)
    hyp = left_inverse_residual(f, F)
    if hyp > HYPOTHESIS_TOL:
        return NecessaryCheckReport(CheckVerdict.HYPOTHESIS_VIOLATION, None, hyp, tol)
    samples = [(lam, psi_of_lambda(F, f, action, lam)) for lam in fit_grid()]
    fit = fit_quadratic_form(samples)
    verdict = CheckVerdict.PASS if fit.residual < tol else CheckVerdict.FIT_FAIL
    return NecessaryCheckReport(verdict, fit, hyp, tol)


def reinhardt_check(F: Callable, f: Callable, j: int, dim: Optional[int] = None,
                    tol: Optional[float] = None) -> NecessaryCheckReport:
    """Single-coordinate variant for fully rotation-invariant domains.

    Runs the check with the j-th unit weight vector (0-based index), so the
    fitted quantity is dF/dz_j(f(lam)) * i * f_j(lam).
    """
    if dim is None:
        dim = len(tuple(f(0.1)))
    if not 0 <= j < dim:
        raise DomainError(f"coordinate index {j} out of range for dim {dim}")
    weights = tuple(1.0 if k == j else 0.0 for k in range(dim))
    return geodesic_necessary_check(F, f, CircularAction(weights), tol)
