"""Phase-space propagators for a wave equation whose dissipation jumps at t = 1.

The package regularizes the jump with a mollifier, builds the fundamental
solution zone by zone (hyperbolic diagonalization, singular-zone power series,
bounded frequencies), glues the pieces across the singularity, and measures
the resulting partial reflection of wave packets against an independent
adaptive integrator.
"""

from .coefficients import (
    Branch,
    JumpCoefficient,
    MollifierPair,
    RegularizedEval,
    beta_zero,
    constant_coefficient,
    curved_jump,
    default_eval,
    default_jump,
    eval_branch,
    uniform_bound_report,
    scenario_from_config,
    smoothed_heaviside,
    window_refined_grid,
)
from .zones import (
    SingularPoint,
    ZoneConstant,
    ZoneLabel,
    ZonePoint,
    choose_zone_constant,
    classify,
    hyp_boundary_times,
    sing_boundary_taus,
    to_singular,
    to_zone,
)
from .hyperbolic import (
    HypPropagator,
    e0,
    e_hyp,
    e_hyp_limit,
    f0_diag,
    n1_matrix,
    q_matrix,
    r1_matrix,
)
from .singular import (
    SingPropagator,
    e_sing,
    f_diag,
    f_diag_limit,
    f_tilde,
    g_series,
    transfer_limit,
)
from .assembly import (
    FullPropagator,
    delta_model_transfer,
    full_propagator,
    limit_propagator,
    micro_energy_convert,
    reflection_matrix,
)
from .oracle import (
    IntegratorConfig,
    RateFit,
    direct_propagator,
    direct_singular_propagator,
    fit_rate,
    integrate_matrix_ode,
)
from .wavepacket import (
    PacketField,
    PacketSpec,
    ReflectionReport,
    build_packet,
    evolve_packet,
    measure_reflection,
)

__version__ = "0.1.0"
