"""Numerical calculus for degenerate evolution systems D_t(Mv) = Lv + f.

Builds the smoothing family of the pencil (M, L) by contour quadrature,
certifies resolvent decay empirically, computes intermediate-space norms,
assembles solution traces, and measures every regularity exponent the
construction promises.
"""

from .config import DEFAULT_CONFIG, RunConfig, load_config, save_config
from .errors import (
    ConsistencyMissing, DegenerateGrid, DegevError, Diverged, GateRejected,
    IllConditioned, InadmissibleExponents, InsufficientDecay, NoConvergence,
    NotInDomain, ParseError, SingularPencil, TruncationDominates, UnknownEntry,
    ValidationError,
)
from .operators import (
    DomainNormReport, OperatorPair, domain_norm, inv_a_apply, operator_norm,
    pencil_solve, resolvent_apply, vec_norm,
)
from .certify import (
    RegionProbePlan, SectorCertificate, certify_pair, fit_certificate,
    pencil_eigenvalues, probe_resolvent_norms, validate_certificate,
)
from .contour import (
    ContourSpec, PropagationResult, propagate, semigroup_apply, semigroup_matrix,
)
from .interp import (
    InterpEvaluator, InterpNormReport, InterpolationIndex, interp_norm,
    interp_operator_norm,
)
from .evolve import (
    ConstantLedger, Forcing, ProblemInstance, SolutionTrace, constants_ledger,
    q1_apply, q2_apply, q3_apply, solve,
)
from .regularity import (
    REGIMES, ExponentGate, HolderReport, RateFit, blowup_fit,
    estimate_interp_constant, estimate_tilde_c, gate, holder_of_semigroup_gap,
    holder_seminorm, pick_gate_params, smallest_resolvable_time,
    theorem_harness,
)
from .gallery import GALLERY, GalleryEntry, build_gallery, gallery_names
from .problem_io import (
    load_problem, load_vector, save_problem, save_report, save_vector,
    write_csv,
)

__version__ = "0.1.0"
