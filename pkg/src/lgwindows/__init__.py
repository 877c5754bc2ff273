"""Exact computations with B-branes and window equivalences on C*-quotients."""
from .brane import (Brane, BraneError, Morphism, Summand, check_brane, cone, direct_sum, hom_complex,
                    identity, line_bundle, make_brane, twist_shift, zero_brane)
from .certificates import (CertificateError, ChartContraction, HomotopyCertificate, LocalEquivalence,
                           chart_contraction, find_equivalence)
from .cohom import PROJVX, CohomologyTable, hom_homology, line_cohomology
from .fixtures import load_fixture
from .homspace import BoundError, ConcentrationError
from .model import GaugedModel, ModelError, Space, decompose, validate
from .poly import Poly, VariableTable, graded_basis, parse_poly
from .spherical import (Splitting, Verdict, build_spherical, build_twist_cone, classify_spherical,
                        hom_to_spherical, split_W, splitting_iso, twist_compare)
from .windows import Window, euler_resolve, ext, in_window, monodromy, transport, window_project

__version__ = "0.1.0"
