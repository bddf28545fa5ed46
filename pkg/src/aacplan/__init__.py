"""Planning, personalization and risk simulation for biometric-enabled AAC channels."""

__version__ = "0.1.0"

from .adapt import AdaptiveEstimate, AdaptMode, estimate, half_width, observe, perception_action_step
from .channel import (
    ChannelPlan,
    Corrupted,
    Delivered,
    Objective,
    UserProfile,
    channel_accuracy,
    plan_channel,
    reverse_channel,
    simulate_message,
)
from .checkpoint import (
    PointName,
    SecurityPoint,
    SimulationReport,
    analytic_clear_prob,
    monte_carlo,
    run_point,
    run_traveller,
    semantic_attack_margin,
)
from .elicit import JudgmentGrid, cover_exact, cover_greedy, make_cluster, marginal_x, marginal_y
from .hub import Team, reachability_matrix, route
from .register import (
    Category,
    Modality,
    Register,
    TraitDescriptor,
    TraitKind,
    canonical_register,
    descriptor_of,
    extend_register,
)
from .rng import CounterStream
from .scenario import Scenario, build_world, bundled_scenario, dump_scenario, parse_scenario
from .transform import (
    Catalog,
    Mode,
    TopkRow,
    Transformation,
    accuracy_from_topk,
    add_transformation,
    builtin_topk_table,
    classify_mode,
    miscommunication,
)
