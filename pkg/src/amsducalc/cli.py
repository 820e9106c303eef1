"""Command-line client for the modeling service.

All commands go through the service layer: by default the route handlers run
in-process, and ``--server URL`` redirects the same request/response traffic
to a running instance instead. File writing stays on the client side, so a
run against a remote service produces the same artifacts as a local one.

Exit codes: 0 success (sweeps may contain flagged infeasible cells),
1 I/O or service-transport failure, 2 bad flags or invalid model input.
"""

from __future__ import annotations

from pathlib import Path

import click
import httpx
from fastapi import HTTPException
from pydantic import ValidationError

from . import __version__, reporting
from .service import api, schemas

_LOCAL_ROUTES = {
    "/profile/render": (api.render_profile, schemas.ProfileRenderRequest),
    "/sweep/per": (api.sweep_per, schemas.PerSweepRequest),
    "/sweep/airtime": (api.sweep_airtime, schemas.AirtimeSweepRequest),
    "/sweep/policy": (api.sweep_policy, schemas.PolicySweepRequest),
    "/sweep/basic-rate": (api.sweep_basic_rate, schemas.BasicRateSweepRequest),
    "/queue/mg1": (api.queue_mg1, schemas.Mg1Request),
}


def _call(server: str | None, path: str, payload: dict) -> dict:
    """POST to the service (remote when ``server`` is set, in-process
    otherwise) and return the response body as a dict."""
    if server:
        try:
            response = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        except httpx.HTTPError as exc:
            raise click.ClickException(f"service request failed: {exc}") from exc
        if response.status_code in (400, 422):
            raise click.UsageError(f"{path}: {response.json().get('detail')}")
        if response.status_code != 200:
            raise click.ClickException(f"{path}: HTTP {response.status_code}")
        return response.json()
    handler, model = _LOCAL_ROUTES[path]
    try:
        request = model(**payload)
    except ValidationError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        return handler(request).model_dump(mode="json")
    except HTTPException as exc:
        raise click.UsageError(f"{path}: {exc.detail}") from exc


def _floats(_ctx, param, value):
    if value is None:
        return None
    try:
        return [float(tok) for tok in value.split(",") if tok.strip()]
    except ValueError:
        raise click.BadParameter(f"{param.name} expects comma-separated numbers (got {value!r})")


def _ints(_ctx, param, value):
    """Comma-separated integers; 'a-b' tokens expand to inclusive ranges."""
    if value is None:
        return None
    out: list[int] = []
    try:
        for tok in value.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if "-" in tok[1:]:  # range like 1-32 (leading char may be a sign)
                lo, _, hi = tok.partition("-")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(tok))
    except ValueError:
        raise click.BadParameter(f"{param.name} expects integers or a-b ranges (got {value!r})")
    return out


def _read_profile(path: str | None) -> str | None:
    if path is None:
        return None
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot read profile {path}: {exc}") from exc


def _out_dir(path: str) -> Path:
    target = Path(path)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise click.ClickException(f"cannot create output directory {path}: {exc}") from exc
    return target


def _write(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except OSError as exc:
        raise click.ClickException(f"write failed: {exc}") from exc


def _profile_option(fn):
    return click.option("--profile", type=str, default=None,
                        help="Profile file (flat key = value text); defaults built in.")(fn)


def _backoff_options(fn):
    fn = click.option("--backoff-mode", type=click.Choice(["difs-scaled", "slotted"]),
                      default="difs-scaled", show_default=True)(fn)
    fn = click.option("--backoff-slots", type=float, default=7.5, show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
@click.option("--server", default=None, envvar="AMSDUCALC_SERVER",
              help="Base URL of a running amsducalc service; default is in-process.")
@click.pass_context
def main(ctx, server):
    """Airtime/PER modeling for 802.11 AMSDU aggregation."""
    ctx.obj = {"server": server}


@main.command("per-sweep")
@_profile_option
@click.option("--rates", callback=_floats, default="1e-3,1e-4,1e-5", show_default=True,
              help="Channel error rates (per bit or per microsecond, by --channel).")
@click.option("--msdu", callback=_ints, default="100", show_default=True,
              help="MSDU sizes in bytes; one CSV per (rate, size).")
@click.option("--mcs", callback=_ints, default=None, help="MCS indices (default: full table).")
@click.option("--depths", callback=_ints, default="1-32", show_default=True)
@click.option("--channel", type=click.Choice(["noise", "interference"]),
              default="interference", show_default=True)
@click.option("--include-ack-airtime", is_flag=True,
              help="Expose the ACK serialization time to interference as well.")
@click.option("--subframe-overhead", type=int, default=0, show_default=True)
@_backoff_options
@click.option("--mc-frames", type=int, default=0, show_default=True,
              help="Frames per cell for the Monte-Carlo cross-check columns (0 = off).")
@click.option("--seed", type=int, default=42, show_default=True,
              help="Seed for Monte-Carlo oracle runs.")
@click.option("--out-dir", type=str, default="out", show_default=True)
@click.pass_context
def per_sweep(ctx, profile, rates, msdu, mcs, depths, channel, include_ack_airtime,
              subframe_overhead, backoff_mode, backoff_slots, mc_frames, seed, out_dir):
    """PER over (MCS x depth) grids, one CSV per error rate and MSDU size."""
    payload = {
        "profile_text": _read_profile(profile),
        "error_rates": rates,
        "msdu_sizes": msdu,
        "mcs_indices": mcs,
        "depths": depths,
        "channel_kind": channel,
        "include_ack_airtime": include_ack_airtime,
        "subframe_overhead": subframe_overhead,
        "backoff_mode": backoff_mode,
        "backoff_slots": backoff_slots,
        "mc_frames": mc_frames,
        "seed": seed,
    }
    grid = _call(ctx.obj["server"], "/sweep/per", payload)
    target = _out_dir(out_dir)
    files = _write(reporting.per_csv, target, grid, with_mc=mc_frames > 0)
    bundle = target / "per_sweep.json"
    _write(reporting.write_json, bundle, grid)
    files.append(bundle)
    _write(reporting.write_manifest, target, "per-sweep", ctx.params,
           grid["profile_fingerprint"], __version__, files)
    summary = grid["summary"]
    click.echo(f"wrote {len(files)} files to {target}")
    click.echo(f"monotonicity: {summary['violations']} violations "
               f"across {summary['ordered_pairs']} ordered cell pairs")


@main.command("airtime-sweep")
@_profile_option
@click.option("--msdu", callback=_ints, default="100,1000,10000", show_default=True)
@click.option("--mcs", callback=_ints, default=None, help="MCS indices (default: full table).")
@click.option("--depths", callback=_ints, default="1-32", show_default=True)
@click.option("--subframe-overhead", type=int, default=0, show_default=True)
@_backoff_options
@click.option("--basic-rate", "basic_rates", callback=_floats, default=None,
              help="Also sweep ovh2 over these basic rates (Mbps) into a separate CSV.")
@click.option("--out-dir", type=str, default="out", show_default=True)
@click.pass_context
def airtime_sweep(ctx, profile, msdu, mcs, depths, subframe_overhead,
                  backoff_mode, backoff_slots, basic_rates, out_dir):
    """Airtime breakdowns over (MCS x depth) grids, one CSV per MSDU size."""
    profile_text = _read_profile(profile)
    payload = {
        "profile_text": profile_text,
        "msdu_sizes": msdu,
        "mcs_indices": mcs,
        "depths": depths,
        "subframe_overhead": subframe_overhead,
        "backoff_mode": backoff_mode,
        "backoff_slots": backoff_slots,
    }
    grid = _call(ctx.obj["server"], "/sweep/airtime", payload)
    target = _out_dir(out_dir)
    files = _write(reporting.airtime_csv, target, grid)
    bundle = target / "airtime_sweep.json"
    _write(reporting.write_json, bundle, grid)
    files.append(bundle)
    if basic_rates:
        rate_grid = _call(ctx.obj["server"], "/sweep/basic-rate",
                          {"profile_text": profile_text, "basic_rates": basic_rates,
                           "mcs_indices": mcs})
        files.append(_write(reporting.basic_rate_csv, target, rate_grid))
    _write(reporting.write_manifest, target, "airtime-sweep", ctx.params,
           grid["profile_fingerprint"], __version__, files)
    summary = grid["summary"]
    click.echo(f"wrote {len(files)} files to {target}")
    click.echo(f"cells: {summary['cells']} ok+flagged, {summary['capped_cells']} capped, "
               f"{summary['infeasible_cells']} infeasible")


@main.command("policy-compare")
@_profile_option
@click.option("--rates", callback=_floats, default="1e-3,1e-4,1e-5", show_default=True)
@click.option("--target", "targets", callback=_floats, default="0.5,0.1,0.01",
              show_default=True, help="Target PER ceilings.")
@click.option("--msdu", callback=_ints, default="100,200,1000", show_default=True)
@click.option("--channel", type=click.Choice(["noise", "interference"]),
              default="interference", show_default=True)
@click.option("--include-ack-airtime", is_flag=True)
@click.option("--start-mcs", type=int, default=None,
              help="Operating MCS index both policies start from (default: table top).")
@click.option("--depth", type=int, default=8, show_default=True,
              help="Static depth for rate control; adaptive shrinks from here.")
@click.option("--subframe-overhead", type=int, default=0, show_default=True)
@click.option("--factor", type=float, default=1.25, show_default=True,
              help="Per-MSDU airtime ratio bound for the 'equivalent' verdict.")
@click.option("--expected-retry", is_flag=True,
              help="Add expected-retry airtime columns (airtime / (1 - PER)).")
@_backoff_options
@click.option("--mg1", default=None,
              help="lambda,lambda2,mu,sigma: append the retry queue penalty to the summary.")
@click.option("--out-dir", type=str, default="out", show_default=True)
@click.pass_context
def policy_compare(ctx, profile, rates, targets, msdu, channel, include_ack_airtime,
                   start_mcs, depth, subframe_overhead, factor, expected_retry,
                   backoff_mode, backoff_slots, mg1, out_dir):
    """Rate control at static depth versus adaptive depth, per target PER."""
    payload = {
        "profile_text": _read_profile(profile),
        "error_rates": rates,
        "targets": targets,
        "msdu_sizes": msdu,
        "channel_kind": channel,
        "include_ack_airtime": include_ack_airtime,
        "start_mcs": start_mcs,
        "depth": depth,
        "subframe_overhead": subframe_overhead,
        "factor": factor,
        "include_expected_retry": expected_retry,
        "backoff_mode": backoff_mode,
        "backoff_slots": backoff_slots,
    }
    grid = _call(ctx.obj["server"], "/sweep/policy", payload)
    target_dir = _out_dir(out_dir)
    files = [_write(reporting.policy_csv, target_dir, grid, with_retry=expected_retry)]
    bundle = target_dir / "policy_compare.json"
    _write(reporting.write_json, bundle, grid)
    files.append(bundle)
    _write(reporting.write_manifest, target_dir, "policy-compare", ctx.params,
           grid["profile_fingerprint"], __version__, files)
    summary = grid["summary"]
    verdicts = summary["verdicts"]
    cells = summary["cells"]
    click.echo(f"wrote {len(files)} files to {target_dir}")
    click.echo(
        "verdicts: "
        f"equivalent {verdicts['equivalent']}/{cells}, better {verdicts['better']}/{cells}, "
        f"worse {verdicts['worse']}/{cells} (share {summary['worse_share']:.4f}), "
        f"infeasible {verdicts['infeasible']}/{cells}"
    )
    click.echo(f"rate-control infeasible where adaptive feasible: "
               f"{summary['rc_infeasible_adaptive_feasible']}")
    if mg1:
        try:
            parts = [float(tok) for tok in mg1.split(",")]
        except ValueError:
            parts = []
        if len(parts) != 4:
            raise click.BadParameter("--mg1 expects lambda,lambda2,mu,sigma")
        _echo_mg1(_call(ctx.obj["server"], "/queue/mg1", {
            "lambda_base": parts[0], "lambda_retry": parts[1],
            "mu": parts[2], "sigma": parts[3],
        }))


def _echo_mg1(result: dict) -> None:
    aw, tb = result["as_written"], result["textbook"]
    click.echo(f"m/g/1 as-written: term(base)={aw['term_base']!r} "
               f"term(retry)={aw['term_retry']!r} penalty={aw['penalty']!r}")
    click.echo(f"m/g/1 textbook:   term(base)={tb['term_base']!r} "
               f"term(retry)={tb['term_retry']!r} penalty={tb['penalty']!r}")
    click.echo(f"note: {result['sigma_note']}")


@main.command("profile-dump")
@_profile_option
@click.option("--out", type=str, default=None, help="Write the profile here instead of stdout.")
@click.pass_context
def profile_dump(ctx, profile, out):
    """Emit the effective profile in the loadable key = value format."""
    result = _call(ctx.obj["server"], "/profile/render", {"profile_text": _read_profile(profile)})
    if out:
        out_path = Path(out)
        try:
            out_path.parent.mkdir(parents=True, exist_ok=True)
            out_path.write_text(result["canonical_text"], encoding="utf-8")
        except OSError as exc:
            raise click.ClickException(f"cannot write {out}: {exc}") from exc
        _write(reporting.write_manifest, out_path.parent, "profile-dump", ctx.params,
               result["fingerprint"], __version__, [out_path])
        click.echo(f"wrote {out_path}")
    else:
        click.echo(result["canonical_text"], nl=False)
    click.echo(f"fingerprint: {result['fingerprint']}", err=True)


@main.command("mg1")
@click.option("--lam", type=float, required=True, help="Base arrival rate (packets/s).")
@click.option("--lam2", type=float, required=True, help="Retry-inflated arrival rate.")
@click.option("--mu", type=float, required=True, help="Service rate (packets/s).")
@click.option("--sigma", type=float, required=True, help="Service-time parameter, as written.")
@click.pass_context
def mg1(ctx, lam, lam2, mu, sigma):
    """Queue-occupancy penalty of retry-inflated arrivals (both variants)."""
    _echo_mg1(_call(ctx.obj["server"], "/queue/mg1", {
        "lambda_base": lam, "lambda_retry": lam2, "mu": mu, "sigma": sigma,
    }))


if __name__ == "__main__":
    main(prog_name="amsducalc")
