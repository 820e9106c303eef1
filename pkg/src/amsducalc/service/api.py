"""FastAPI service over the modeling core.

Run with ``uvicorn amsducalc.service.api:app``. Model-level input problems
(bad profile text, unstable queue parameters, frames that can never fit the
PPDU cap) map to HTTP 400 with the underlying message; sweep cells that are
individually infeasible stay in-band as ``status="infeasible"`` records.

The route handlers are plain functions over pydantic models, so the CLI can
call them in-process with identical semantics to the HTTP surface.
"""

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..airtime import BackoffModel, FrameSpec, InfeasibleFrameError, total_airtime
from ..error_model import ChannelModel, effective_length, per_from_length
from ..profile import ProfileError, PhyProfile, dump_profile, load_profile, profile_fingerprint
from ..queueing import (
    UnstableQueueError,
    mean_queue_textbook,
    mg1_term,
    retry_penalty,
    retry_penalty_textbook,
    Mg1Params,
    SIGMA_NOTE,
)
from ..sweeps import (
    DEFAULT_DEPTHS,
    GridResult,
    SweepSpec,
    run_airtime_sweep,
    run_basic_rate_sweep,
    run_per_sweep,
    run_policy_sweep,
)
from . import schemas

app = FastAPI(
    title="amsducalc",
    description="802.11 AMSDU aggregation airtime/PER model service",
    version=__version__,
)


def _load(profile_text: str | None) -> PhyProfile:
    try:
        return load_profile(profile_text or "")
    except ProfileError as exc:
        raise HTTPException(status_code=400, detail=f"profile: {exc}") from exc


def _spec(profile: PhyProfile, req, msdu_sizes, error_rates=None, **extra) -> SweepSpec:
    mcs_indices = req.mcs_indices if getattr(req, "mcs_indices", None) else range(len(profile.mcs_table))
    depths = req.depths if getattr(req, "depths", None) else DEFAULT_DEPTHS
    kwargs = dict(
        mcs_indices=tuple(mcs_indices),
        depths=tuple(depths),
        msdu_sizes=tuple(msdu_sizes),
        subframe_overhead=req.subframe_overhead,
        **extra,
    )
    if error_rates is not None:
        kwargs["error_rates"] = tuple(error_rates)
    try:
        return SweepSpec(**kwargs)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _backoff(req: schemas.BackoffFields) -> BackoffModel:
    return BackoffModel(mode=req.backoff_mode, backoff_slots=req.backoff_slots)


def _grid_response(result: GridResult) -> schemas.GridResponse:
    return schemas.GridResponse(
        axes=result.axes,
        profile_fingerprint=result.profile_fingerprint,
        summary=result.summary,
        cells=result.cells,
    )


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/profile/render", response_model=schemas.ProfileRenderResponse)
def render_profile(req: schemas.ProfileRenderRequest) -> schemas.ProfileRenderResponse:
    profile = _load(req.profile_text)
    return schemas.ProfileRenderResponse(
        profile=schemas.ProfileModel(
            t_sifs=profile.t_sifs,
            t_difs=profile.t_difs,
            slot_time=profile.slot_time,
            ack_size=profile.ack_size,
            phy_header_short=profile.phy_header_short,
            phy_header_long=profile.phy_header_long,
            mac_header=profile.mac_header,
            llc_header=profile.llc_header,
            basic_rate=profile.basic_rate,
            ppdu_cap=profile.ppdu_cap,
            use_long_preamble=profile.use_long_preamble,
            headers_at_basic_rate=profile.headers_at_basic_rate,
            mcs_table=[
                schemas.McsEntryModel(index=e.index, rate=e.rate, label=e.label)
                for e in profile.mcs_table
            ],
        ),
        canonical_text=dump_profile(profile),
        fingerprint=profile_fingerprint(profile),
    )


def _airtime(profile: PhyProfile, req: schemas.AirtimeRequest):
    frame = FrameSpec(req.msdu_size, req.agg_depth, req.subframe_overhead)
    try:
        mcs = profile.mcs(req.mcs_index)
    except IndexError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    try:
        breakdown = total_airtime(profile, frame, mcs, _backoff(req))
    except InfeasibleFrameError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return frame, mcs, breakdown


def _airtime_response(breakdown) -> schemas.AirtimeResponse:
    return schemas.AirtimeResponse(
        ovh1_us=breakdown.ovh1,
        ovh2_us=breakdown.ovh2,
        payload_us=breakdown.payload,
        total_us=breakdown.total,
        capped=breakdown.capped,
        effective_depth=breakdown.effective_depth,
        airtime_per_msdu_us=breakdown.total / breakdown.effective_depth,
    )


@app.post("/airtime/total", response_model=schemas.AirtimeResponse)
def airtime_total(req: schemas.AirtimeRequest) -> schemas.AirtimeResponse:
    profile = _load(req.profile_text)
    _, _, breakdown = _airtime(profile, req)
    return _airtime_response(breakdown)


@app.post("/per/point", response_model=schemas.PerPointResponse)
def per_point(req: schemas.PerPointRequest) -> schemas.PerPointResponse:
    profile = _load(req.profile_text)
    frame, mcs, breakdown = _airtime(profile, req)
    if req.channel_kind == "noise":
        channel = ChannelModel.noise(req.error_rate)
    else:
        channel = ChannelModel.interference(req.error_rate, req.include_ack_airtime)
    length = effective_length(profile, frame, mcs, channel, breakdown)
    return schemas.PerPointResponse(
        per=per_from_length(channel, length),
        effective_length=length,
        airtime=_airtime_response(breakdown),
    )


@app.post("/sweep/per", response_model=schemas.GridResponse)
def sweep_per(req: schemas.PerSweepRequest) -> schemas.GridResponse:
    profile = _load(req.profile_text)
    spec = _spec(
        profile, req, req.msdu_sizes, error_rates=req.error_rates,
        channel_kind=req.channel_kind, include_ack_airtime=req.include_ack_airtime,
    )
    result = run_per_sweep(spec, profile, _backoff(req), mc_frames=req.mc_frames, seed=req.seed)
    return _grid_response(result)


@app.post("/sweep/airtime", response_model=schemas.GridResponse)
def sweep_airtime(req: schemas.AirtimeSweepRequest) -> schemas.GridResponse:
    profile = _load(req.profile_text)
    spec = _spec(profile, req, req.msdu_sizes)
    return _grid_response(run_airtime_sweep(spec, profile, _backoff(req)))


@app.post("/sweep/policy", response_model=schemas.GridResponse)
def sweep_policy(req: schemas.PolicySweepRequest) -> schemas.GridResponse:
    profile = _load(req.profile_text)
    spec = _spec(
        profile, req, req.msdu_sizes, error_rates=req.error_rates,
        channel_kind=req.channel_kind, include_ack_airtime=req.include_ack_airtime,
    )
    start = req.start_mcs
    if start is not None and not 0 <= start < len(profile.mcs_table):
        raise HTTPException(status_code=400, detail=f"start_mcs {start} outside rate table")
    try:
        result = run_policy_sweep(
            spec, tuple(req.targets), profile, _backoff(req),
            start_mcs=start, depth=req.depth, factor=req.factor,
            include_expected_retry=req.include_expected_retry,
        )
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return _grid_response(result)


@app.post("/sweep/basic-rate", response_model=schemas.GridResponse)
def sweep_basic_rate(req: schemas.BasicRateSweepRequest) -> schemas.GridResponse:
    profile = _load(req.profile_text)
    try:
        result = run_basic_rate_sweep(
            tuple(req.basic_rates), profile,
            tuple(req.mcs_indices) if req.mcs_indices else None,
        )
    except (ValueError, IndexError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return _grid_response(result)


@app.post("/queue/mg1", response_model=schemas.Mg1Response)
def queue_mg1(req: schemas.Mg1Request) -> schemas.Mg1Response:
    try:
        params = Mg1Params(req.lambda_base, req.lambda_retry, req.mu, req.sigma)
        as_written = schemas.Mg1Variant(
            term_base=mg1_term(params.lambda_base, params.mu, params.sigma),
            term_retry=mg1_term(params.lambda_retry, params.mu, params.sigma),
            penalty=retry_penalty(params),
        )
        textbook = schemas.Mg1Variant(
            term_base=mean_queue_textbook(params.lambda_base, params.mu, params.sigma),
            term_retry=mean_queue_textbook(params.lambda_retry, params.mu, params.sigma),
            penalty=retry_penalty_textbook(params),
        )
    except (UnstableQueueError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return schemas.Mg1Response(as_written=as_written, textbook=textbook, sigma_note=SIGMA_NOTE)
