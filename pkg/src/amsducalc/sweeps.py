"""Grid evaluation of PER, airtime and policy comparisons.

Cells are emitted in a fixed axis order (outer to inner: error rate, MSDU
size, MCS, depth) regardless of how they are evaluated, so identical inputs
serialize byte-identically. Frames that cannot fit the PPDU cap at all are
emitted as ``status="infeasible"`` sentinel cells rather than dropped,
keeping every grid rectangular.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .airtime import BackoffModel, FrameSpec, InfeasibleFrameError, overhead_fixed, total_airtime
from .error_model import ChannelModel, effective_length, per_from_length
from .montecarlo import simulate_per, standard_error
from .policy import (
    DEFAULT_EQUIVALENCE_FACTOR,
    PolicyComparison,
    PolicyRequest,
    compare_policies,
    expected_retry_airtime,
)
from .profile import PhyProfile, profile_fingerprint

__all__ = [
    "DEFAULT_ERROR_RATES",
    "DEFAULT_DEPTHS",
    "DEFAULT_PER_MSDU_SIZES",
    "DEFAULT_AIRTIME_MSDU_SIZES",
    "DEFAULT_POLICY_MSDU_SIZES",
    "DEFAULT_TARGETS",
    "DEFAULT_POLICY_DEPTH",
    "SweepSpec",
    "default_spec",
    "GridResult",
    "run_per_sweep",
    "run_airtime_sweep",
    "run_policy_sweep",
    "run_basic_rate_sweep",
    "per_monotonicity_summary",
    "policy_verdict_summary",
]

DEFAULT_ERROR_RATES = (1e-3, 1e-4, 1e-5)
DEFAULT_DEPTHS = tuple(range(1, 33))
# Small enough that the deepest default aggregate stays under the PPDU cap at
# the lowest default rate; the cap region is still reachable via overrides.
DEFAULT_PER_MSDU_SIZES = (100,)
DEFAULT_AIRTIME_MSDU_SIZES = (100, 1000, 10000)
DEFAULT_POLICY_MSDU_SIZES = (100, 200, 1000)
DEFAULT_TARGETS = (0.5, 0.1, 0.01)
DEFAULT_POLICY_DEPTH = 8


@dataclass(frozen=True)
class SweepSpec:
    """Axes of a sweep. Lists are kept in caller order and echoed verbatim
    into the result."""

    mcs_indices: tuple[int, ...]
    depths: tuple[int, ...]
    msdu_sizes: tuple[int, ...]
    error_rates: tuple[float, ...] = DEFAULT_ERROR_RATES
    channel_kind: str = "interference"
    subframe_overhead: int = 0
    include_ack_airtime: bool = False

    def __post_init__(self):
        for name, values in (("mcs_indices", self.mcs_indices), ("depths", self.depths),
                             ("msdu_sizes", self.msdu_sizes), ("error_rates", self.error_rates)):
            if not values:
                raise ValueError(f"{name} must not be empty")
        if any(d < 1 for d in self.depths):
            raise ValueError("depths must be >= 1")
        if any(m <= 0 for m in self.msdu_sizes):
            raise ValueError("msdu_sizes must be > 0")
        if any(not 0.0 <= r <= 1.0 for r in self.error_rates):
            raise ValueError("error_rates must be in [0, 1]")
        if self.channel_kind not in ("noise", "interference"):
            raise ValueError(f"unknown channel_kind {self.channel_kind!r}")

    def channel(self, error_rate: float) -> ChannelModel:
        if self.channel_kind == "noise":
            return ChannelModel.noise(error_rate)
        return ChannelModel.interference(error_rate, self.include_ack_airtime)


def default_spec(profile: PhyProfile, msdu_sizes, error_rates=DEFAULT_ERROR_RATES,
                 **kwargs) -> SweepSpec:
    return SweepSpec(
        mcs_indices=tuple(range(len(profile.mcs_table))),
        depths=DEFAULT_DEPTHS,
        msdu_sizes=tuple(msdu_sizes),
        error_rates=tuple(error_rates),
        **kwargs,
    )


@dataclass
class GridResult:
    """Echoed axes, one record per cell (fixed key order), and the digest of
    the profile that produced them."""

    axes: dict
    cells: list[dict]
    profile_fingerprint: str
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "axes": self.axes,
            "profile_fingerprint": self.profile_fingerprint,
            "summary": self.summary,
            "cells": self.cells,
        }


_PER_NUMERIC_FIELDS = ("per", "effective_length", "ovh1_us", "ovh2_us", "payload_us",
                       "total_us", "capped", "effective_depth")
_AIRTIME_NUMERIC_FIELDS = ("ovh1_us", "ovh2_us", "payload_us", "total_us", "capped",
                           "effective_depth")


def run_per_sweep(
    spec: SweepSpec,
    profile: PhyProfile,
    backoff: BackoffModel,
    mc_frames: int = 0,
    seed: int = 42,
) -> GridResult:
    """PER per (error rate, MSDU size, MCS, depth) cell.

    ``mc_frames > 0`` adds a seeded Monte-Carlo estimate (``mc_per``) and its
    deviation from the closed form in standard errors (``mc_z``) to every
    feasible cell; sub-seeds derive from ``seed`` and the cell position.
    """
    cells = []
    for rate_pos, error_rate in enumerate(spec.error_rates):
        channel = spec.channel(error_rate)
        for msdu in spec.msdu_sizes:
            for mcs_index in spec.mcs_indices:
                mcs = profile.mcs(mcs_index)
                for depth in spec.depths:
                    frame = FrameSpec(msdu, depth, spec.subframe_overhead)
                    cell = {
                        "error_rate": error_rate,
                        "msdu_size": msdu,
                        "mcs_index": mcs_index,
                        "depth": depth,
                        "status": "ok",
                    }
                    try:
                        breakdown = total_airtime(profile, frame, mcs, backoff)
                    except InfeasibleFrameError:
                        cell["status"] = "infeasible"
                        for name in _PER_NUMERIC_FIELDS:
                            cell[name] = None
                        if mc_frames > 0:
                            cell["mc_per"] = None
                            cell["mc_z"] = None
                        cells.append(cell)
                        continue
                    length = effective_length(profile, frame, mcs, channel, breakdown)
                    per = per_from_length(channel, length)
                    cell.update(
                        per=per,
                        effective_length=length,
                        ovh1_us=breakdown.ovh1,
                        ovh2_us=breakdown.ovh2,
                        payload_us=breakdown.payload,
                        total_us=breakdown.total,
                        capped=breakdown.capped,
                        effective_depth=breakdown.effective_depth,
                    )
                    if mc_frames > 0:
                        mc = simulate_per(error_rate, length, mc_frames,
                                          seed=(seed, rate_pos, len(cells)))
                        se = standard_error(per, mc_frames)
                        if se > 0:
                            z = (mc - per) / se
                        else:
                            z = 0.0 if mc == per else float("inf")
                        cell["mc_per"] = mc
                        cell["mc_z"] = z
                    cells.append(cell)
    axes = {
        "error_rates": list(spec.error_rates),
        "msdu_sizes": list(spec.msdu_sizes),
        "mcs_indices": list(spec.mcs_indices),
        "depths": list(spec.depths),
        "channel_kind": spec.channel_kind,
    }
    result = GridResult(axes=axes, cells=cells, profile_fingerprint=profile_fingerprint(profile))
    result.summary = per_monotonicity_summary(result)
    return result


def run_airtime_sweep(spec: SweepSpec, profile: PhyProfile, backoff: BackoffModel) -> GridResult:
    """Airtime breakdown per (MSDU size, MCS, depth) cell; error rates do not
    enter airtime and are ignored."""
    cells = []
    capped = infeasible = 0
    for msdu in spec.msdu_sizes:
        for mcs_index in spec.mcs_indices:
            mcs = profile.mcs(mcs_index)
            for depth in spec.depths:
                frame = FrameSpec(msdu, depth, spec.subframe_overhead)
                cell = {
                    "msdu_size": msdu,
                    "mcs_index": mcs_index,
                    "depth": depth,
                    "status": "ok",
                }
                try:
                    breakdown = total_airtime(profile, frame, mcs, backoff)
                except InfeasibleFrameError:
                    infeasible += 1
                    cell["status"] = "infeasible"
                    for name in _AIRTIME_NUMERIC_FIELDS:
                        cell[name] = None
                    cells.append(cell)
                    continue
                capped += breakdown.capped
                cell.update(
                    ovh1_us=breakdown.ovh1,
                    ovh2_us=breakdown.ovh2,
                    payload_us=breakdown.payload,
                    total_us=breakdown.total,
                    capped=breakdown.capped,
                    effective_depth=breakdown.effective_depth,
                )
                cells.append(cell)
    axes = {
        "msdu_sizes": list(spec.msdu_sizes),
        "mcs_indices": list(spec.mcs_indices),
        "depths": list(spec.depths),
    }
    summary = {"cells": len(cells), "capped_cells": capped, "infeasible_cells": infeasible}
    return GridResult(axes=axes, cells=cells,
                      profile_fingerprint=profile_fingerprint(profile), summary=summary)


_POLICY_SIDE_FIELDS = ("feasible", "mcs", "depth", "effective_depth", "per",
                       "airtime_us", "airtime_per_msdu_us")


def _policy_side(prefix: str, outcome) -> dict:
    return {
        f"{prefix}_feasible": outcome.feasible,
        f"{prefix}_mcs": outcome.chosen_mcs,
        f"{prefix}_depth": outcome.chosen_depth,
        f"{prefix}_effective_depth": outcome.effective_depth,
        f"{prefix}_per": outcome.achieved_per,
        f"{prefix}_airtime_us": outcome.airtime,
        f"{prefix}_airtime_per_msdu_us": outcome.airtime_per_msdu,
    }


def run_policy_sweep(
    spec: SweepSpec,
    targets: tuple[float, ...],
    profile: PhyProfile,
    backoff: BackoffModel,
    start_mcs: int | None = None,
    depth: int = DEFAULT_POLICY_DEPTH,
    factor: float = DEFAULT_EQUIVALENCE_FACTOR,
    include_expected_retry: bool = False,
) -> GridResult:
    """Both policy outcomes and a verdict per (error rate, target, MSDU size)
    cell. ``start_mcs`` defaults to the top of the rate table; ``depth`` is
    both the static depth and the adaptive starting depth."""
    if not targets:
        raise ValueError("targets must not be empty")
    if start_mcs is None:
        start_mcs = len(profile.mcs_table) - 1
    cells = []
    for error_rate in spec.error_rates:
        channel = spec.channel(error_rate)
        for target in targets:
            for msdu in spec.msdu_sizes:
                cell = {
                    "error_rate": error_rate,
                    "target_per": target,
                    "msdu_size": msdu,
                    "status": "ok",
                }
                req = PolicyRequest(
                    target_per=target,
                    channel=channel,
                    frame_template=FrameSpec(msdu, depth, spec.subframe_overhead),
                    start_mcs=start_mcs,
                    static_depth=depth,
                )
                try:
                    cmp: PolicyComparison = compare_policies(req, profile, backoff, factor)
                except InfeasibleFrameError:
                    cell["status"] = "infeasible"
                    for prefix in ("rc", "ad"):
                        for name in _POLICY_SIDE_FIELDS:
                            cell[f"{prefix}_{name}"] = None
                    cell["per_msdu_ratio"] = None
                    cell["verdict"] = "infeasible"
                    if include_expected_retry:
                        cell["rc_expected_airtime_per_msdu_us"] = None
                        cell["ad_expected_airtime_per_msdu_us"] = None
                    cells.append(cell)
                    continue
                cell.update(_policy_side("rc", cmp.rate_control))
                cell.update(_policy_side("ad", cmp.adaptive))
                cell["per_msdu_ratio"] = cmp.per_msdu_ratio
                cell["verdict"] = cmp.verdict
                if include_expected_retry:
                    cell["rc_expected_airtime_per_msdu_us"] = expected_retry_airtime(cmp.rate_control)
                    cell["ad_expected_airtime_per_msdu_us"] = expected_retry_airtime(cmp.adaptive)
                cells.append(cell)
    axes = {
        "error_rates": list(spec.error_rates),
        "targets": list(targets),
        "msdu_sizes": list(spec.msdu_sizes),
        "channel_kind": spec.channel_kind,
        "start_mcs": start_mcs,
        "depth": depth,
        "factor": factor,
    }
    result = GridResult(axes=axes, cells=cells, profile_fingerprint=profile_fingerprint(profile))
    result.summary = policy_verdict_summary(result)
    return result


def run_basic_rate_sweep(
    basic_rates: tuple[float, ...],
    profile: PhyProfile,
    mcs_indices: tuple[int, ...] | None = None,
) -> GridResult:
    """Fixed overhead (ovh2) per (basic rate, MCS) cell: quantifies how a
    higher negotiated basic rate shrinks the PHY-header and ACK cost."""
    if not basic_rates:
        raise ValueError("basic_rates must not be empty")
    if any(r <= 0 for r in basic_rates):
        raise ValueError("basic_rates must be > 0")
    if mcs_indices is None:
        mcs_indices = tuple(range(len(profile.mcs_table)))
    cells = []
    for basic in basic_rates:
        varied = profile.with_basic_rate(basic)
        for mcs_index in mcs_indices:
            cells.append({
                "basic_rate": basic,
                "mcs_index": mcs_index,
                "ovh2_us": overhead_fixed(varied, varied.mcs(mcs_index)),
            })
    axes = {"basic_rates": list(basic_rates), "mcs_indices": list(mcs_indices)}
    return GridResult(axes=axes, cells=cells, profile_fingerprint=profile_fingerprint(profile))


def per_monotonicity_summary(result: GridResult) -> dict:
    """Count adjacent-cell orderings that violate the expected trends:
    PER non-increasing along MCS (at fixed depth) and non-decreasing along
    depth (at fixed MCS). Pairs with an infeasible side are skipped."""
    by_key = {}
    for cell in result.cells:
        key = (cell["error_rate"], cell["msdu_size"], cell["mcs_index"], cell["depth"])
        by_key[key] = cell
    mcs_axis = result.axes["mcs_indices"]
    depth_axis = result.axes["depths"]
    pairs = violations = 0
    for error_rate in result.axes["error_rates"]:
        for msdu in result.axes["msdu_sizes"]:
            for depth in depth_axis:
                for a, b in zip(mcs_axis, mcs_axis[1:]):
                    ca = by_key[(error_rate, msdu, a, depth)]
                    cb = by_key[(error_rate, msdu, b, depth)]
                    if ca["status"] != "ok" or cb["status"] != "ok":
                        continue
                    pairs += 1
                    if cb["per"] > ca["per"]:
                        violations += 1
            for mcs_index in mcs_axis:
                for a, b in zip(depth_axis, depth_axis[1:]):
                    ca = by_key[(error_rate, msdu, mcs_index, a)]
                    cb = by_key[(error_rate, msdu, mcs_index, b)]
                    if ca["status"] != "ok" or cb["status"] != "ok":
                        continue
                    pairs += 1
                    if cb["per"] < ca["per"]:
                        violations += 1
    return {"ordered_pairs": pairs, "violations": violations}


def policy_verdict_summary(result: GridResult) -> dict:
    """Verdict counts plus the share of 'worse' cells and how often adaptive
    depth succeeded where rate control could not."""
    counts = {"equivalent": 0, "better": 0, "worse": 0, "infeasible": 0}
    rc_only = 0
    for cell in result.cells:
        counts[cell["verdict"]] += 1
        if cell["status"] == "ok" and cell["ad_feasible"] and not cell["rc_feasible"]:
            rc_only += 1
    total = len(result.cells)
    return {
        "cells": total,
        "verdicts": counts,
        "worse_share": counts["worse"] / total if total else 0.0,
        "rc_infeasible_adaptive_feasible": rc_only,
    }
