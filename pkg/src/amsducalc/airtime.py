"""Airtime decomposition for aggregated MSDU transmissions.

Total airtime splits into a contention component (backoff), a fixed
header/ACK/SIFS component, and the payload serialization time. The on-air
PPDU duration (PHY header + MAC/LLC headers + payload) is limited by the
profile's ``ppdu_cap``; the cap is enforced by reducing the number of whole
MSDUs carried, never by truncating one mid-frame.

All times are microseconds. Rates in Mbps equal bits per microsecond, so a
byte count converts to time as ``bytes * 8 / rate``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .profile import McsEntry, PhyProfile

__all__ = [
    "TIME_TOLERANCE_US",
    "BACKOFF_MODES",
    "InfeasibleFrameError",
    "FrameSpec",
    "BackoffModel",
    "AirtimeBreakdown",
    "overhead_contention",
    "overhead_fixed",
    "payload_airtime",
    "data_onair_time",
    "total_airtime",
]

# Absolute tolerance for time comparisons, in microseconds.
TIME_TOLERANCE_US = 1e-9

# "difs-scaled": contention = backoff_slots * t_difs (each pending slot costs
# a full DIFS). "slotted": contention = t_difs + backoff_slots * slot_time
# (one DIFS then standard 802.11 slot countdown).
BACKOFF_MODES = ("difs-scaled", "slotted")


class InfeasibleFrameError(ValueError):
    """A single MSDU already exceeds the PPDU duration cap."""


@dataclass(frozen=True)
class FrameSpec:
    """Aggregate payload description: MSDU size, aggregation depth, and an
    optional per-MSDU subframe header/padding overhead (bytes)."""

    msdu_size: int
    agg_depth: int = 1
    subframe_overhead: int = 0

    def __post_init__(self):
        if self.msdu_size <= 0:
            raise ValueError(f"msdu_size must be > 0 (got {self.msdu_size!r})")
        if self.agg_depth < 1:
            raise ValueError(f"agg_depth must be >= 1 (got {self.agg_depth!r})")
        if self.subframe_overhead < 0:
            raise ValueError(f"subframe_overhead must be >= 0 (got {self.subframe_overhead!r})")

    @property
    def unit_bytes(self) -> int:
        return self.msdu_size + self.subframe_overhead


@dataclass(frozen=True)
class BackoffModel:
    mode: str = "difs-scaled"
    backoff_slots: float = 7.5

    def __post_init__(self):
        if self.mode not in BACKOFF_MODES:
            raise ValueError(f"mode must be one of {BACKOFF_MODES} (got {self.mode!r})")
        if self.backoff_slots < 0:
            raise ValueError(f"backoff_slots must be >= 0 (got {self.backoff_slots!r})")


@dataclass(frozen=True)
class AirtimeBreakdown:
    """Airtime components of one transmission, microseconds.

    ``total == ovh1 + ovh2 + payload`` always holds; ``capped`` marks that the
    PPDU cap reduced the carried depth to ``effective_depth``.
    """

    ovh1: float
    ovh2: float
    payload: float
    total: float
    capped: bool
    effective_depth: int


def overhead_contention(profile: PhyProfile, backoff: BackoffModel) -> float:
    """Contention time before transmission, per the configured backoff mode."""
    if backoff.mode == "difs-scaled":
        return backoff.backoff_slots * profile.t_difs
    return profile.t_difs + backoff.backoff_slots * profile.slot_time


def _phy_header_time(profile: PhyProfile) -> float:
    return profile.phy_header * 8 / profile.basic_rate


def _ack_time(profile: PhyProfile) -> float:
    return profile.ack_size * 8 / profile.basic_rate


def _mac_llc_time(profile: PhyProfile, mcs: McsEntry) -> float:
    rate = profile.basic_rate if profile.headers_at_basic_rate else mcs.rate
    return (profile.mac_header + profile.llc_header) * 8 / rate


def overhead_fixed(profile: PhyProfile, mcs: McsEntry) -> float:
    """Header/ACK/SIFS overhead: PHY header and ACK bytes at the basic rate,
    MAC+LLC header bytes at the data rate, plus one SIFS."""
    return _phy_header_time(profile) + _ack_time(profile) + _mac_llc_time(profile, mcs) + profile.t_sifs


def payload_airtime(frame: FrameSpec, mcs: McsEntry) -> float:
    """Payload serialization time: aggregate payload bits over the data rate."""
    return frame.agg_depth * frame.unit_bytes * 8 / mcs.rate


def data_onair_time(profile: PhyProfile, frame: FrameSpec, mcs: McsEntry) -> float:
    """On-air PPDU duration: PHY header, MAC/LLC headers and payload. This is
    the quantity the PPDU cap constrains; contention, SIFS and ACK are not
    part of the transmitted frame."""
    return _phy_header_time(profile) + _mac_llc_time(profile, mcs) + payload_airtime(frame, mcs)


def _fit_depth(profile: PhyProfile, frame: FrameSpec, mcs: McsEntry) -> int:
    """Largest whole-MSDU depth whose PPDU fits the cap (0 when none fits)."""
    room = profile.ppdu_cap - _phy_header_time(profile) - _mac_llc_time(profile, mcs)
    unit_time = frame.unit_bytes * 8 / mcs.rate
    if room + TIME_TOLERANCE_US < unit_time:
        return 0
    return int((room + TIME_TOLERANCE_US) // unit_time)


def total_airtime(
    profile: PhyProfile,
    frame: FrameSpec,
    mcs: McsEntry,
    backoff: BackoffModel,
) -> AirtimeBreakdown:
    """Full airtime breakdown for one transmission of ``frame`` at ``mcs``.

    When the requested depth would push the PPDU past ``profile.ppdu_cap``,
    the depth is reduced to the largest number of whole MSDUs that fits and
    the breakdown is marked ``capped``. Raises :class:`InfeasibleFrameError`
    when even a single MSDU exceeds the cap.
    """
    fit = _fit_depth(profile, frame, mcs)
    if fit < 1:
        single = FrameSpec(frame.msdu_size, 1, frame.subframe_overhead)
        raise InfeasibleFrameError(
            f"one {frame.unit_bytes} B MSDU needs "
            f"{data_onair_time(profile, single, mcs):.1f} us on air at "
            f"{mcs.rate} Mbps, over the {profile.ppdu_cap} us PPDU cap"
        )
    effective = min(frame.agg_depth, fit)
    carried = FrameSpec(frame.msdu_size, effective, frame.subframe_overhead)
    ovh1 = overhead_contention(profile, backoff)
    ovh2 = overhead_fixed(profile, mcs)
    payload = payload_airtime(carried, mcs)
    return AirtimeBreakdown(
        ovh1=ovh1,
        ovh2=ovh2,
        payload=payload,
        total=ovh1 + ovh2 + payload,
        capped=effective < frame.agg_depth,
        effective_depth=effective,
    )
