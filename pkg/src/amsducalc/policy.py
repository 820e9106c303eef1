"""Target-PER selection policies over (MCS, aggregation depth).

Two strategies are compared:

* rate control with a static depth: hold the aggregation depth, scan the
  rate table downward from the operating MCS and keep the fastest MCS that
  meets the PER target;
* adaptive depth at a fixed MCS: hold the operating MCS and shrink the
  aggregation depth until the target is met.

Efficiency is judged per MSDU delivered (total airtime divided by the
carried depth), so shrinking the aggregate does not look cheaper merely
because each transmission carries less.
"""

from __future__ import annotations

from dataclasses import dataclass

from .airtime import AirtimeBreakdown, BackoffModel, FrameSpec, InfeasibleFrameError, total_airtime
from .error_model import ChannelModel, effective_length, per_from_length
from .profile import PhyProfile

__all__ = [
    "DEFAULT_EQUIVALENCE_FACTOR",
    "PolicyRequest",
    "PolicyOutcome",
    "PolicyComparison",
    "rate_control_select",
    "adaptive_depth_select",
    "compare_policies",
    "expected_retry_airtime",
]

# Reporting threshold, not a modeled quantity: per-MSDU airtime ratios within
# [1/factor, factor] count as equivalent.
DEFAULT_EQUIVALENCE_FACTOR = 1.25


@dataclass(frozen=True)
class PolicyRequest:
    """What the caller wants met: a PER ceiling for a given MSDU size,
    starting from ``start_mcs``. ``static_depth`` is the depth the
    rate-control policy holds; ``frame_template.agg_depth`` is where the
    adaptive policy starts shrinking from."""

    target_per: float
    channel: ChannelModel
    frame_template: FrameSpec
    start_mcs: int
    static_depth: int

    def __post_init__(self):
        if not 0.0 < self.target_per < 1.0:
            raise ValueError(f"target_per must be in (0, 1) (got {self.target_per!r})")
        if self.static_depth < 1:
            raise ValueError(f"static_depth must be >= 1 (got {self.static_depth!r})")
        if self.start_mcs < 0:
            raise ValueError(f"start_mcs must be >= 0 (got {self.start_mcs!r})")


@dataclass(frozen=True)
class PolicyOutcome:
    policy: str
    chosen_mcs: int
    chosen_depth: int
    effective_depth: int
    achieved_per: float
    airtime: float
    airtime_per_msdu: float
    feasible: bool


@dataclass(frozen=True)
class PolicyComparison:
    """Both outcomes plus the per-MSDU airtime ratio (rate-control over
    adaptive) and a verdict: ``equivalent``/``better``/``worse`` when both
    policies meet the target, ``infeasible`` otherwise (the ratio is then
    undefined and left as None)."""

    rate_control: PolicyOutcome
    adaptive: PolicyOutcome
    per_msdu_ratio: float | None
    verdict: str
    factor: float


def _evaluate(
    profile: PhyProfile,
    frame: FrameSpec,
    mcs_index: int,
    channel: ChannelModel,
    backoff: BackoffModel,
) -> tuple[float, AirtimeBreakdown]:
    mcs = profile.mcs(mcs_index)
    breakdown = total_airtime(profile, frame, mcs, backoff)
    per = per_from_length(channel, effective_length(profile, frame, mcs, channel, breakdown))
    return per, breakdown


def _outcome(policy: str, mcs_index: int, frame: FrameSpec, per: float,
             breakdown: AirtimeBreakdown, feasible: bool) -> PolicyOutcome:
    return PolicyOutcome(
        policy=policy,
        chosen_mcs=mcs_index,
        chosen_depth=frame.agg_depth,
        effective_depth=breakdown.effective_depth,
        achieved_per=per,
        airtime=breakdown.total,
        airtime_per_msdu=breakdown.total / breakdown.effective_depth,
        feasible=feasible,
    )


def rate_control_select(
    req: PolicyRequest, profile: PhyProfile, backoff: BackoffModel
) -> PolicyOutcome:
    """Hold depth at ``static_depth``; return the highest MCS at or below
    ``start_mcs`` whose PER meets the target.

    When no candidate qualifies the outcome reports ``feasible=False`` at the
    lowest MCS whose frame still fits the PPDU cap. Raises
    InfeasibleFrameError only if no candidate fits the cap at all.
    """
    profile.mcs(req.start_mcs)  # range check
    frame = FrameSpec(req.frame_template.msdu_size, req.static_depth,
                      req.frame_template.subframe_overhead)
    fallback: tuple[int, float, AirtimeBreakdown] | None = None
    for index in range(req.start_mcs, -1, -1):
        try:
            per, breakdown = _evaluate(profile, frame, index, req.channel, backoff)
        except InfeasibleFrameError:
            continue
        if per <= req.target_per:
            return _outcome("rate-control", index, frame, per, breakdown, True)
        fallback = (index, per, breakdown)
    if fallback is None:
        raise InfeasibleFrameError(
            f"no MCS at or below index {req.start_mcs} fits a "
            f"{frame.unit_bytes} B MSDU under the PPDU cap"
        )
    index, per, breakdown = fallback
    return _outcome("rate-control", index, frame, per, breakdown, False)


def adaptive_depth_select(
    req: PolicyRequest, profile: PhyProfile, backoff: BackoffModel
) -> PolicyOutcome:
    """Hold MCS at ``start_mcs``; return the largest depth (scanning down
    from the template depth to 1) whose PER meets the target, or the depth-1
    outcome with ``feasible=False`` when even that misses."""
    profile.mcs(req.start_mcs)
    last: tuple[FrameSpec, float, AirtimeBreakdown] | None = None
    for depth in range(req.frame_template.agg_depth, 0, -1):
        frame = FrameSpec(req.frame_template.msdu_size, depth,
                          req.frame_template.subframe_overhead)
        per, breakdown = _evaluate(profile, frame, req.start_mcs, req.channel, backoff)
        if per <= req.target_per:
            return _outcome("adaptive-depth", req.start_mcs, frame, per, breakdown, True)
        last = (frame, per, breakdown)
    assert last is not None
    frame, per, breakdown = last
    return _outcome("adaptive-depth", req.start_mcs, frame, per, breakdown, False)


def compare_policies(
    req: PolicyRequest,
    profile: PhyProfile,
    backoff: BackoffModel,
    factor: float = DEFAULT_EQUIVALENCE_FACTOR,
) -> PolicyComparison:
    """Run both selectors on the same request and classify the outcome."""
    if factor < 1.0:
        raise ValueError(f"factor must be >= 1 (got {factor!r})")
    rc = rate_control_select(req, profile, backoff)
    ad = adaptive_depth_select(req, profile, backoff)
    if rc.feasible and ad.feasible:
        ratio = rc.airtime_per_msdu / ad.airtime_per_msdu
        if ratio > factor:
            verdict = "worse"
        elif ratio < 1.0 / factor:
            verdict = "better"
        else:
            verdict = "equivalent"
    else:
        ratio = None
        verdict = "infeasible"
    return PolicyComparison(rate_control=rc, adaptive=ad, per_msdu_ratio=ratio,
                            verdict=verdict, factor=factor)


def expected_retry_airtime(outcome: PolicyOutcome) -> float:
    """Per-MSDU airtime inflated by expected retransmissions,
    ``airtime_per_msdu / (1 - per)``. Infinite at PER 1."""
    if outcome.achieved_per >= 1.0:
        return float("inf")
    return outcome.airtime_per_msdu / (1.0 - outcome.achieved_per)
