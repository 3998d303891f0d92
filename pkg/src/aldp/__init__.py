"""Exact decision procedures and catalog for (strongly) asymptotically
log del Pezzo surface pairs."""

from .lattice import (
    BetaDivisor,
    BetaPolynomial,
    DivisorClass,
    PicardBasis,
    SmallBetaVerdict,
    arithmetic_genus,
    canonical_class,
    euler_characteristic,
    exceptional,
    intersect,
    pullback,
    small_beta_sign,
)
from .surface import (
    IncidencePoint,
    SurfacePair,
    blow_up,
    make_fn,
    make_p2,
    test_curves,
    validate_configuration,
)
from .verifier import Verdict, is_minimal, log_anticanonical, minimal_model, verify
from .classify import (
    CatalogEntry,
    ConicBundle,
    boundary_component_bound,
    catalog,
    conic_bundle,
    instantiate,
    match_minimal_family,
    positivity_class,
)
from .thresholds import (
    AlphaValue,
    Branch,
    LocalSingularityConfig,
    RationalFunction,
    adjunction_nef_counterexample,
    alpha_beth_bounds,
    alpha_limit,
    alpha_lower_bound,
    alpha_on_curve,
    alpha_toric_three_lines,
    alpha_upper_bound_big,
    lct_local,
)

__all__ = [name for name in dir() if not name.startswith("_")]
