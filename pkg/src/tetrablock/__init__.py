"""Invariant distances, extremal maps and complex geodesics on the
tetrablock and the symmetrized bidisc."""

__version__ = "1.0.0"

from .errors import BranchError, DomainError, FitError, PoleError
from .hyperbolic import (BlaschkeMap, HyperbolicDistance, blaschke_eval,
                         disc_automorphism, mobius_distance, mobius_m,
                         schwarz_pick_check)
from .angle_search import AngleGrid
from .domains import (G2MembershipReport, G2Point, Location, MembershipReport,
                      TetraPoint, g2_membership, g2_roots, psi_sup,
                      rho_functional, tetra_e_value, tetra_membership)
from .extremals import (CoordinateMap, ExtremalFamily, ExtremalFamilyId,
                        G2FMap, MagicFMap, PsiOmegaMap,
                        caratheodory_lower_bound, f_omega_automorphism, g2_f,
                        g2_lower_bound, magic_f, p_e, psi_eta, register_family,
                        sigma)
from .geodesics import (DiscSearchResult, DiscVerdict, DiscVerificationReport,
                        G2GeodesicParams, GeneralDiscParams,
                        OriginGeodesicParams, OriginGeodesicSolution,
                        TransportClass, blaschke_interp_origin,
                        boundary_disc, certified_left_inverse,
                        disc_search_upper_bound, eval_boundary_disc,
                        eval_general_disc, eval_origin_geodesic,
                        g2_origin_geodesic, g2_geodesic_disc,
                        g2_violation_witness, general_disc,
                        is_product_geodesic, left_inverse_residual,
                        lempert_special, origin_geodesic_disc, origin_lempert,
                        product_disc, product_disc_map, sample_grid,
                        solve_origin_geodesic_through, transport_disc,
                        transported_extremal, transported_extremal_disc,
                        verify_disc)
from .necessary import (CheckVerdict, CircularAction, G2_ACTION,
                        NecessaryCheckReport, QuadraticFit,
                        TETRABLOCK_ACTIONS, fit_general_quadratic, fit_grid,
                        fit_quadratic_form, geodesic_necessary_check,
                        numeric_gradient, psi_of_lambda, reinhardt_check,
                        vector_field)
from .verify import ALL_SUITES, SuiteResult, run_suites
