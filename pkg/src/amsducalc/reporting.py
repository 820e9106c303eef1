"""File output for CLI runs: CSV grids, JSON bundles, run manifests.

Values serialize canonically (floats via ``repr``, booleans as
``true``/``false``, missing values as empty fields), so identical inputs
always produce byte-identical data files. The manifest carries the run
timestamp and is therefore the one file excluded from that guarantee.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

__all__ = [
    "axis_tag",
    "write_csv",
    "write_json",
    "write_manifest",
    "per_csv",
    "airtime_csv",
    "policy_csv",
    "basic_rate_csv",
]

PER_COLUMNS = ("mcs_index", "depth", "per", "status")
PER_MC_COLUMNS = PER_COLUMNS + ("mc_per", "mc_z")
AIRTIME_COLUMNS = ("mcs_index", "depth", "ovh1_us", "ovh2_us", "payload_us", "total_us",
                   "capped", "effective_depth", "status")
POLICY_COLUMNS = (
    "error_rate", "target_per", "msdu_size", "status",
    "rc_feasible", "rc_mcs", "rc_depth", "rc_effective_depth", "rc_per",
    "rc_airtime_us", "rc_airtime_per_msdu_us",
    "ad_feasible", "ad_mcs", "ad_depth", "ad_effective_depth", "ad_per",
    "ad_airtime_us", "ad_airtime_per_msdu_us",
    "per_msdu_ratio", "verdict",
)
POLICY_RETRY_COLUMNS = ("rc_expected_airtime_per_msdu_us", "ad_expected_airtime_per_msdu_us")
BASIC_RATE_COLUMNS = ("basic_rate", "mcs_index", "ovh2_us")


def axis_tag(value) -> str:
    """Filesystem-safe, deterministic tag for an axis value (e.g. 1e-05, 100)."""
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def _field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, columns: tuple[str, ...], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_field(row.get(col)) for col in columns])


def write_json(path: Path, payload: dict) -> None:
    with path.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def per_csv(out_dir: Path, grid: dict, with_mc: bool) -> list[Path]:
    """One CSV per (error rate, MSDU size) block of a PER sweep."""
    columns = PER_MC_COLUMNS if with_mc else PER_COLUMNS
    written = []
    for error_rate in grid["axes"]["error_rates"]:
        for msdu in grid["axes"]["msdu_sizes"]:
            rows = [c for c in grid["cells"]
                    if c["error_rate"] == error_rate and c["msdu_size"] == msdu]
            path = out_dir / f"per_r{axis_tag(error_rate)}_msdu{axis_tag(msdu)}.csv"
            write_csv(path, columns, rows)
            written.append(path)
    return written


def airtime_csv(out_dir: Path, grid: dict) -> list[Path]:
    """One CSV per MSDU size of an airtime sweep."""
    written = []
    for msdu in grid["axes"]["msdu_sizes"]:
        rows = [c for c in grid["cells"] if c["msdu_size"] == msdu]
        path = out_dir / f"airtime_msdu{axis_tag(msdu)}.csv"
        write_csv(path, AIRTIME_COLUMNS, rows)
        written.append(path)
    return written


def policy_csv(out_dir: Path, grid: dict, with_retry: bool) -> Path:
    columns = POLICY_COLUMNS + POLICY_RETRY_COLUMNS if with_retry else POLICY_COLUMNS
    path = out_dir / "policy_compare.csv"
    write_csv(path, columns, grid["cells"])
    return path


def basic_rate_csv(out_dir: Path, grid: dict) -> Path:
    path = out_dir / "ovh2_basic_rate.csv"
    write_csv(path, BASIC_RATE_COLUMNS, grid["cells"])
    return path


def write_manifest(
    out_dir: Path,
    command: str,
    params: dict,
    fingerprint: str,
    version: str,
    files: list[Path],
) -> Path:
    """Record what a run produced. The timestamp makes this the only
    non-reproducible output of a run."""
    path = out_dir / "manifest.json"
    payload = {
        "command": command,
        "params": {k: params[k] for k in sorted(params)},
        "profile_fingerprint": fingerprint,
        "tool_version": version,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "output_files": [f.name for f in files],
    }
    write_json(path, payload)
    return path
