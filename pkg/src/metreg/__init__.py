"""Exact finite-instance checks for metric regularity of set-valued mappings."""

from .criteria import (CriterionReport, SoundnessError, criterion_dist_graph, criterion_gamma_graph,
                       criterion_graph_restricted, criterion_semireg_dist, criterion_semireg_graph,
                       criterion_single, epigraphical)
from .evp import EvpInstance, evp_descend, evp_path, evp_verify
from .extnum import INF, ext
from .maps import SetValuedMap, SingleValuedMap, add_single, inverse, minkowski_sum, restrict
from .perturb import ConstantSet, ExperimentReport, PerturbInstance, derive_constants, find_violation, kappa_hat_lower, run_experiment
from .regularity import (GammaFunction, Window, ball_window, check_aubin, check_gamma_regular, check_milyutin,
                         check_regular, check_restricted_regular, check_semiregular, check_strong_regular,
                         check_sum_stable, coincidence_bound, hausdorff_lipschitz, lipschitz_check,
                         regularity_modulus)
from .spaces import Ball, ExplicitSpace, LinearSpace, ProductSpace, validate_metric
from .verdict import Verdict

__version__ = "0.1.0"
