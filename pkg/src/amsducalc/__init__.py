"""802.11 AMSDU aggregation modeling toolkit.

Computes packet error rate and airtime for aggregated MSDU transmissions
over configurable PHY/MAC profiles, and compares target-PER policies
(rate control at a static aggregation depth versus adaptive depth at a
fixed rate). Served over HTTP by ``amsducalc.service`` and driven from the
``amsducalc`` command-line client.
"""

from .airtime import (
    BACKOFF_MODES,
    AirtimeBreakdown,
    BackoffModel,
    FrameSpec,
    InfeasibleFrameError,
    data_onair_time,
    overhead_contention,
    overhead_fixed,
    payload_airtime,
    total_airtime,
)
from .error_model import (
    CHANNEL_KINDS,
    ChannelModel,
    effective_length,
    per_for_transmission,
    per_from_length,
)
from .montecarlo import simulate_failures, simulate_per, standard_error
from .policy import (
    DEFAULT_EQUIVALENCE_FACTOR,
    PolicyComparison,
    PolicyOutcome,
    PolicyRequest,
    adaptive_depth_select,
    compare_policies,
    expected_retry_airtime,
    rate_control_select,
)
from .profile import (
    McsEntry,
    PhyProfile,
    ProfileError,
    ProfileParseError,
    ProfileValidationError,
    default_profile,
    default_vht_table,
    dump_profile,
    load_profile,
    profile_fingerprint,
)
from .queueing import (
    Mg1Params,
    UnstableQueueError,
    mean_queue_textbook,
    mg1_term,
    retry_penalty,
    retry_penalty_textbook,
)
from .sweeps import (
    GridResult,
    SweepSpec,
    run_airtime_sweep,
    run_basic_rate_sweep,
    run_per_sweep,
    run_policy_sweep,
)

__version__ = "0.1.0"
