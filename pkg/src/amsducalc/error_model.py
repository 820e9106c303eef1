"""Packet error rate as a function of frame length.

A frame survives only if every independent error trial succeeds, so

    per = 1 - (1 - rate) ** trials

evaluated in the log domain for numerical stability. What counts as a trial
depends on the channel kind:

* ``noise``   - one trial per transmitted payload/header bit, at the
  per-bit error rate. Length is rate-independent.
* ``interference`` - one trial per whole microsecond the frame is on air,
  at the per-microsecond error rate. Faster rates shorten the frame and so
  reduce the error exposure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .airtime import (
    AirtimeBreakdown,
    BackoffModel,
    FrameSpec,
    _ack_time,
    _mac_llc_time,
    _phy_header_time,
    total_airtime,
)
from .profile import McsEntry, PhyProfile

__all__ = [
    "CHANNEL_KINDS",
    "ChannelModel",
    "per_from_length",
    "effective_length",
    "per_for_transmission",
]

CHANNEL_KINDS = ("noise", "interference")


@dataclass(frozen=True)
class ChannelModel:
    """Error process definition: kind plus exactly one active rate.

    ``include_ack_airtime`` additionally exposes the ACK serialization time
    to interference (an ACK-loss reading); off by default, matching a single
    CRC failure event on the data frame.
    """

    kind: str
    bit_error_rate: float | None = None
    airtime_error_rate: float | None = None
    include_ack_airtime: bool = False

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"kind must be one of {CHANNEL_KINDS} (got {self.kind!r})")
        if self.kind == "noise":
            active, inactive, name = self.bit_error_rate, self.airtime_error_rate, "bit_error_rate"
        else:
            active, inactive, name = self.airtime_error_rate, self.bit_error_rate, "airtime_error_rate"
        if active is None:
            raise ValueError(f"{name} must be set for kind={self.kind!r}")
        if inactive is not None:
            raise ValueError(f"exactly one error rate may be set (kind={self.kind!r})")
        if not 0.0 <= active <= 1.0:
            raise ValueError(f"{name} must be in [0, 1] (got {active!r})")

    @classmethod
    def noise(cls, bit_error_rate: float) -> "ChannelModel":
        return cls(kind="noise", bit_error_rate=bit_error_rate)

    @classmethod
    def interference(cls, airtime_error_rate: float, include_ack_airtime: bool = False) -> "ChannelModel":
        return cls(
            kind="interference",
            airtime_error_rate=airtime_error_rate,
            include_ack_airtime=include_ack_airtime,
        )

    @property
    def active_rate(self) -> float:
        return self.bit_error_rate if self.kind == "noise" else self.airtime_error_rate  # type: ignore[return-value]


def per_from_length(channel: ChannelModel, length: int) -> float:
    """Probability that at least one of ``length`` trials fails.

    Exact anchors: zero trials or a zero rate give 0.0, one trial gives the
    trial rate itself. Large-length/small-rate cases evaluate as
    ``-expm1(length * log1p(-rate))`` to avoid catastrophic cancellation.
    """
    if length < 0:
        raise ValueError(f"length must be >= 0 (got {length!r})")
    rate = channel.active_rate
    if length == 0 or rate == 0.0:
        return 0.0
    if length == 1:
        return rate
    if rate >= 1.0:
        return 1.0
    per = -math.expm1(length * math.log1p(-rate))
    return min(max(per, 0.0), 1.0)


def effective_length(
    profile: PhyProfile,
    frame: FrameSpec,
    mcs: McsEntry,
    channel: ChannelModel,
    breakdown: AirtimeBreakdown,
) -> int:
    """Number of independent error trials for a transmission.

    ``breakdown`` must come from ``total_airtime`` for the same profile,
    frame and MCS, so that the cap-reduced depth is respected.

    noise: payload bits of the carried MSDUs plus MAC and LLC header bits.
    interference: whole microseconds of on-air PPDU time (PHY header,
    MAC/LLC headers, payload), rounded up; contention time is excluded
    because the station is not transmitting during backoff.
    """
    if channel.kind == "noise":
        payload_bytes = breakdown.effective_depth * frame.unit_bytes
        return (payload_bytes + profile.mac_header + profile.llc_header) * 8
    onair = _phy_header_time(profile) + _mac_llc_time(profile, mcs) + breakdown.payload
    if channel.include_ack_airtime:
        onair += _ack_time(profile)
    return math.ceil(onair)


def per_for_transmission(
    profile: PhyProfile,
    frame: FrameSpec,
    mcs: McsEntry,
    channel: ChannelModel,
    backoff: BackoffModel,
) -> float:
    """Packet error rate of one transmission: airtime breakdown, then trial
    count, then the closed form. Propagates InfeasibleFrameError."""
    breakdown = total_airtime(profile, frame, mcs, backoff)
    length = effective_length(profile, frame, mcs, channel, breakdown)
    return per_from_length(channel, length)
