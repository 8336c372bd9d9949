"""Repeated-election polarization dynamics: rules, bounds, and experiments."""

from .geometry import (
    CenterResult,
    GeometryError,
    PolicyBox,
    chebyshev_center,
    coordinatewise_median,
    pairwise_variance,
    pairwise_variance_pairs,
    supporter_radius,
    winner_radius,
)
from .electorate import (
    BalanceTag,
    CampBalance,
    Electorate,
    ElectorateProfile,
    ProfileTag,
    SlateSpec,
    SlateTag,
    camp_asymmetry,
    generate_electorate,
    generate_slate,
    signed_camp_asymmetry,
)
from .rules import (
    ElectionOutcome,
    RuleSpec,
    RuleTag,
    assignment_weights,
    elect,
    fractional_weights,
    fractional_winner,
    supporter_centroids,
)
from .dynamics import (
    CandidateMechanism,
    DynamicsParams,
    RateFunction,
    RateShape,
    VoterMechanism,
    candidate_step,
    preset_params,
    repulsion_vector,
    voter_step,
)
from .bounds import (
    BoundsError,
    ContractionReport,
    EnvelopeParams,
    candidate_factor,
    check_candidate_bound,
    check_voter_bound,
    envelope,
    estimate_Ls,
    noise_floor,
    voter_factor,
)
from .oracles import (
    OracleSpec,
    centrality_oracle,
    depolarization_oracle,
    run_oracle_comparison,
)
from .runner import (
    GridSpec,
    RoundRecord,
    RunConfig,
    run_grid,
    run_simulation,
    summarize,
)

__version__ = "0.1.0"
