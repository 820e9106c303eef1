"""PHY/MAC parameter profiles.

A profile bundles the timing constants, header sizes, rate table and PPDU
duration cap that every airtime and error-rate computation depends on. It is
immutable after construction, so a single profile can be shared freely across
sweep workers.

Profiles load from a flat key-value text format, one ``key = value`` per
line, with ``#`` starting a comment:

    # example override
    basic_rate = 24
    mcs_rates = 6.5, 13, 19.5, 26, 39, 52, 58.5, 65, 78

Keys not present fall back to the defaults below. ``dump_profile`` emits the
same format canonically; a dumped profile reloads field-for-field identical.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

__all__ = [
    "ProfileError",
    "ProfileParseError",
    "ProfileValidationError",
    "McsEntry",
    "PhyProfile",
    "default_vht_table",
    "default_profile",
    "load_profile",
    "dump_profile",
    "profile_fingerprint",
]


class ProfileError(ValueError):
    """Base class for profile configuration problems."""


class ProfileParseError(ProfileError):
    """Malformed configuration text; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ProfileValidationError(ProfileError):
    """A field value violates a profile invariant; carries the field name."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class McsEntry:
    """One modulation-and-coding-scheme step: 0-based index and PHY rate in Mbps."""

    index: int
    rate: float
    label: str = ""

    def __post_init__(self):
        if self.rate <= 0:
            raise ProfileValidationError("mcs_rates", f"rate must be > 0 (got {self.rate!r})")
        if any(c in self.label for c in ",#\n"):
            raise ProfileValidationError(
                "mcs_labels", f"label {self.label!r} may not contain ',', '#' or newlines"
            )
        # Normalize so every entry dumps to reloadable text: labels are
        # whitespace-trimmed and never empty.
        object.__setattr__(self, "label", self.label.strip() or f"MCS{self.index}")


# VHT single stream, 20 MHz, long guard interval. Frozen fixture; fully
# overridable through the mcs_rates / mcs_labels keys.
_VHT_NSS1_20MHZ_LGI_MBPS = (6.5, 13.0, 19.5, 26.0, 39.0, 52.0, 58.5, 65.0, 78.0)


def default_vht_table() -> tuple[McsEntry, ...]:
    """Default 9-entry VHT single-stream 20 MHz long-GI rate table."""
    return tuple(
        McsEntry(index=i, rate=r, label=f"VHT-MCS{i}")
        for i, r in enumerate(_VHT_NSS1_20MHZ_LGI_MBPS)
    )


@dataclass(frozen=True)
class PhyProfile:
    """Validated, immutable PHY/MAC parameter set.

    Durations are microseconds, sizes are bytes, rates are Mbps (= bits/us).
    ``basic_rate`` is the negotiated control rate: ACK and PHY-header bytes
    serialize at it. MAC and LLC header bytes ride at the selected data rate
    unless ``headers_at_basic_rate`` forces them onto the basic rate as well.
    """

    t_sifs: float = 10.0
    t_difs: float = 50.0
    slot_time: float = 9.0
    ack_size: int = 14
    phy_header_short: int = 120
    phy_header_long: int = 192
    mac_header: int = 34
    llc_header: int = 8
    basic_rate: float = 6.0
    ppdu_cap: float = 5000.0
    use_long_preamble: bool = True
    headers_at_basic_rate: bool = False
    mcs_table: tuple[McsEntry, ...] = field(default_factory=default_vht_table)

    def __post_init__(self):
        positive = {
            "t_sifs": self.t_sifs,
            "t_difs": self.t_difs,
            "slot_time": self.slot_time,
            "ack_size": self.ack_size,
            "phy_header_short": self.phy_header_short,
            "phy_header_long": self.phy_header_long,
            "mac_header": self.mac_header,
            "basic_rate": self.basic_rate,
            "ppdu_cap": self.ppdu_cap,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ProfileValidationError(name, f"must be > 0 (got {value!r})")
        if self.llc_header < 0:
            raise ProfileValidationError("llc_header", f"must be >= 0 (got {self.llc_header!r})")
        if not self.mcs_table:
            raise ProfileValidationError("mcs_rates", "rate table must not be empty")
        for pos, entry in enumerate(self.mcs_table):
            if entry.index != pos:
                raise ProfileValidationError(
                    "mcs_rates", f"entry {pos} carries index {entry.index}; indices must be 0..n-1 in order"
                )
        rates = [e.rate for e in self.mcs_table]
        for a, b in zip(rates, rates[1:]):
            if not b > a:
                raise ProfileValidationError(
                    "mcs_rates", f"rates must be strictly increasing (got {a!r} then {b!r})"
                )

    @property
    def phy_header(self) -> int:
        """Active PHY header size in bytes (long or short preamble)."""
        return self.phy_header_long if self.use_long_preamble else self.phy_header_short

    def mcs(self, index: int) -> McsEntry:
        """Rate-table entry by index; raises IndexError outside 0..n-1."""
        if not 0 <= index < len(self.mcs_table):
            raise IndexError(f"MCS index {index} outside table range 0..{len(self.mcs_table) - 1}")
        return self.mcs_table[index]

    def with_basic_rate(self, basic_rate: float) -> "PhyProfile":
        return replace(self, basic_rate=basic_rate)


def default_profile() -> PhyProfile:
    return PhyProfile()


_FLOAT_KEYS = ("t_sifs", "t_difs", "slot_time", "basic_rate", "ppdu_cap")
_INT_KEYS = ("ack_size", "phy_header_short", "phy_header_long", "mac_header", "llc_header")
_BOOL_KEYS = ("use_long_preamble", "headers_at_basic_rate")
_LIST_KEYS = ("mcs_rates", "mcs_labels")
_ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _BOOL_KEYS + _LIST_KEYS


def _parse_bool(raw: str, key: str, line_no: int) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1"):
        return True
    if low in ("false", "0"):
        return False
    raise ProfileParseError(line_no, f"{key} expects true/false (got {raw.strip()!r})")


def _parse_float(raw: str, key: str, line_no: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ProfileParseError(line_no, f"{key} expects a number (got {raw.strip()!r})") from None


def _parse_int(raw: str, key: str, line_no: int) -> int:
    value = _parse_float(raw, key, line_no)
    if value != int(value):
        raise ProfileParseError(line_no, f"{key} expects a whole byte count (got {raw.strip()!r})")
    return int(value)


def load_profile(source: str) -> PhyProfile:
    """Parse configuration text into a validated profile.

    Empty input yields the default profile. Unknown or duplicated keys and
    malformed values raise :class:`ProfileParseError` with the line number;
    invariant violations raise :class:`ProfileValidationError` naming the
    field.
    """
    seen: dict[str, object] = {}
    for line_no, raw_line in enumerate(source.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProfileParseError(line_no, f"expected 'key = value' (got {line!r})")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _ALL_KEYS:
            raise ProfileParseError(line_no, f"unknown key {key!r}")
        if key in seen:
            raise ProfileParseError(line_no, f"duplicate key {key!r}")
        if not raw_value:
            raise ProfileParseError(line_no, f"{key} has no value")
        if key in _FLOAT_KEYS:
            seen[key] = _parse_float(raw_value, key, line_no)
        elif key in _INT_KEYS:
            seen[key] = _parse_int(raw_value, key, line_no)
        elif key in _BOOL_KEYS:
            seen[key] = _parse_bool(raw_value, key, line_no)
        elif key == "mcs_rates":
            seen[key] = [_parse_float(tok, key, line_no) for tok in raw_value.split(",")]
        elif key == "mcs_labels":
            seen[key] = [tok.strip() for tok in raw_value.split(",")]

    rates = seen.pop("mcs_rates", None)
    labels = seen.pop("mcs_labels", None)
    if rates is None and labels is None:
        table = default_vht_table()
    else:
        if rates is None:
            rates = list(_VHT_NSS1_20MHZ_LGI_MBPS)
        if labels is None:
            labels = [f"MCS{i}" for i in range(len(rates))]
        if len(labels) != len(rates):
            raise ProfileValidationError(
                "mcs_labels", f"{len(labels)} labels for {len(rates)} rates"
            )
        table = tuple(
            McsEntry(index=i, rate=r, label=lbl) for i, (r, lbl) in enumerate(zip(rates, labels))
        )
    return PhyProfile(mcs_table=table, **seen)  # type: ignore[arg-type]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def dump_profile(profile: PhyProfile) -> str:
    """Render a profile as canonical configuration text (see module docstring)."""
    lines = ["# amsducalc PHY/MAC profile"]
    for key in _FLOAT_KEYS + _INT_KEYS + _BOOL_KEYS:
        lines.append(f"{key} = {_fmt(getattr(profile, key))}")
    lines.append("mcs_rates = " + ", ".join(_fmt(e.rate) for e in profile.mcs_table))
    lines.append("mcs_labels = " + ", ".join(e.label for e in profile.mcs_table))
    return "\n".join(lines) + "\n"


def profile_fingerprint(profile: PhyProfile) -> str:
    """Content digest of the canonical dump; identifies a profile in outputs."""
    return hashlib.sha256(dump_profile(profile).encode("utf-8")).hexdigest()
