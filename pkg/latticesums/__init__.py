from .lattice import Arrangement, Functional, GenericDirection, Basis, \
    enumerate_bases, indispensable_set, choose_phi, frac_part, \
    on_excluded_hyperplanes, on_walls, nudge_off_walls, coset_character_sum
from .scalar import ExactRing, NumericRing, cyclotomic_order, embed, \
    format_exact, parse_exact
from .series import TruncatedSeries, LinearForm, RationalForm, \
    divide_exact, dump_series, load_series
from .kernel import KernelParams, kernel_series, kernel_coefficient, \
    kernel_moment, moment_integral, bernoulli_numbers, bernoulli_polynomial
from .genfun import generating_function, basis_summands, evaluate, \
    coefficient, lattice_sum_value, coefficient_table, zeta_from_S, \
    EvaluationReport
from .oracle import TruncationWindow, constrained_points, truncated_sum, \
    convergence_scan
from .polytope import PolytopeSetup, HPolytope, VertexWitness, \
    enumerate_m, vertices, brute_force_vertices, is_simple, \
    exp_integral_simple, cramer_forms, vertex_exponent, \
    genfun_via_polytopes, polytope_report
from .hierarchy import HierarchyStep, apply_Dg_summand, apply_Dg, \
    check_hierarchy
from .lookup import lookup_arrangement, lookup_example, lookup_family
from .guts import get_fixture_path, get_fixture_arrangement, \
    get_examples_path, get_examples_table, list_fixtures
from .errors import LatticeSumError, ArrangementError, ExcludedPoint, \
    NonDivisible, NotSimple, DegenerateExponent, RankDrop, UnknownFamily, \
    VerificationFailure, LatticeSumWarning

import sys
import warnings

if not sys.warnoptions:
    warnings.simplefilter("ignore", FutureWarning)

__version__ = '0.1.0'
