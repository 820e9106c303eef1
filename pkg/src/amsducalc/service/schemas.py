"""Pydantic request/response models for the HTTP service.

Requests optionally carry ``profile_text`` in the flat key-value profile
format; omitted or None means the built-in defaults. List-valued fields keep
caller order, which fixes the cell order of sweep responses.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field


class BackoffFields(BaseModel):
    backoff_mode: Literal["difs-scaled", "slotted"] = "difs-scaled"
    backoff_slots: float = Field(default=7.5, ge=0)


class ProfileRenderRequest(BaseModel):
    profile_text: Optional[str] = None


class McsEntryModel(BaseModel):
    index: int
    rate: float
    label: str


class ProfileModel(BaseModel):
    t_sifs: float
    t_difs: float
    slot_time: float
    ack_size: int
    phy_header_short: int
    phy_header_long: int
    mac_header: int
    llc_header: int
    basic_rate: float
    ppdu_cap: float
    use_long_preamble: bool
    headers_at_basic_rate: bool
    mcs_table: list[McsEntryModel]


class ProfileRenderResponse(BaseModel):
    profile: ProfileModel
    canonical_text: str
    fingerprint: str


class AirtimeRequest(BackoffFields):
    profile_text: Optional[str] = None
    msdu_size: int = Field(gt=0)
    agg_depth: int = Field(default=1, ge=1)
    subframe_overhead: int = Field(default=0, ge=0)
    mcs_index: int = Field(ge=0)


class AirtimeResponse(BaseModel):
    ovh1_us: float
    ovh2_us: float
    payload_us: float
    total_us: float
    capped: bool
    effective_depth: int
    airtime_per_msdu_us: float


class PerPointRequest(AirtimeRequest):
    channel_kind: Literal["noise", "interference"] = "interference"
    error_rate: float = Field(ge=0, le=1)
    include_ack_airtime: bool = False


class PerPointResponse(BaseModel):
    per: float
    effective_length: int
    airtime: AirtimeResponse


class PerSweepRequest(BackoffFields):
    profile_text: Optional[str] = None
    error_rates: list[float] = Field(default=[1e-3, 1e-4, 1e-5], min_length=1)
    msdu_sizes: list[int] = Field(default=[100], min_length=1)
    mcs_indices: Optional[list[int]] = None
    depths: Optional[list[int]] = None
    channel_kind: Literal["noise", "interference"] = "interference"
    subframe_overhead: int = Field(default=0, ge=0)
    include_ack_airtime: bool = False
    mc_frames: int = Field(default=0, ge=0)
    seed: int = 42


class AirtimeSweepRequest(BackoffFields):
    profile_text: Optional[str] = None
    msdu_sizes: list[int] = Field(default=[100, 1000, 10000], min_length=1)
    mcs_indices: Optional[list[int]] = None
    depths: Optional[list[int]] = None
    subframe_overhead: int = Field(default=0, ge=0)


class PolicySweepRequest(BackoffFields):
    profile_text: Optional[str] = None
    error_rates: list[float] = Field(default=[1e-3, 1e-4, 1e-5], min_length=1)
    targets: list[float] = Field(default=[0.5, 0.1, 0.01], min_length=1)
    msdu_sizes: list[int] = Field(default=[100, 200, 1000], min_length=1)
    channel_kind: Literal["noise", "interference"] = "interference"
    include_ack_airtime: bool = False
    start_mcs: Optional[int] = None
    depth: int = Field(default=8, ge=1)
    subframe_overhead: int = Field(default=0, ge=0)
    factor: float = Field(default=1.25, ge=1)
    include_expected_retry: bool = False


class BasicRateSweepRequest(BaseModel):
    profile_text: Optional[str] = None
    basic_rates: list[float] = Field(min_length=1)
    mcs_indices: Optional[list[int]] = None


class GridResponse(BaseModel):
    axes: dict
    profile_fingerprint: str
    summary: dict
    cells: list[dict]


class Mg1Request(BaseModel):
    lambda_base: float = Field(ge=0)
    lambda_retry: float = Field(ge=0)
    mu: float = Field(gt=0)
    sigma: float = Field(ge=0)


class Mg1Variant(BaseModel):
    term_base: float
    term_retry: float
    penalty: float


class Mg1Response(BaseModel):
    as_written: Mg1Variant
    textbook: Mg1Variant
    sigma_note: str


class HealthResponse(BaseModel):
    status: str
    version: str
