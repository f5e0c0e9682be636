"""Experiment runner: presets, validation, parallel execution, CSV/JSON output.

Three presets reproduce the headline experiments, and ``custom`` exposes the
estimators directly:

========  =====================  ===========================  ==========
preset    quantity               K list                       samples
========  =====================  ===========================  ==========
fig1      normalized throughput  1..100 (log-spaced subset)   100,000
fig2      ergodic throughput     10^3, 10^4, 10^5, 10^6       2,000
theorem   diversity-gain ratio   1,2,4,8,16,32,64,100         100,000
========  =====================  ===========================  ==========

The theorem-suite rows carry the analytic sandwich bounds, and the process
exits nonzero if any estimate escapes its sandwich by more than three
standard errors — a self-contained regression gate.

Output is one CSV (or JSON) row per (network, K) with floats printed at 17
significant digits, so parsing the file recovers every value exactly, and
identical (spec, seed) runs produce byte-identical files for any worker
count.  Settings come from flags, then an optional flat key=value config
file, then defaults, in that precedence order.
"""

from __future__ import annotations

import argparse
import enum
import json
import os
import sys
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import metrics
from .analysis import bound_constants, reference_mdg_exact
from .errors import ConfigurationError, UnsupportedConfigurationError
from .metrics import CurvePoint, Estimate, Quantity, canonical_network_order
from .model import NetworkConfig, NetworkKind, NetworkVariant, RngSpec

__all__ = ["ExperimentSpec", "Preset", "main", "run_experiment", "validate_spec"]


class Preset(enum.Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"
    THEOREM_SUITE = "theorem-suite"
    CUSTOM = "custom"


_FIG1_K = (1, 2, 3, 5, 7, 10, 16, 25, 40, 64, 100)
_FIG2_K = (10**3, 10**4, 10**5, 10**6)
_THEOREM_K = (1, 2, 4, 8, 16, 32, 64, 100)

_PRESET_QUANTITY = {
    Preset.FIG1: Quantity.NORMALIZED_THROUGHPUT,
    Preset.FIG2: Quantity.THROUGHPUT,
    Preset.THEOREM_SUITE: Quantity.MDG_RATIO,
}
_PRESET_K = {
    Preset.FIG1: _FIG1_K,
    Preset.FIG2: _FIG2_K,
    Preset.THEOREM_SUITE: _THEOREM_K,
}
_PRESET_SAMPLES = {
    Preset.FIG1: 100_000,
    Preset.FIG2: 2_000,
    Preset.THEOREM_SUITE: 100_000,
    Preset.CUSTOM: 100_000,
}

_NETWORK_TOKENS = {
    "mac": NetworkKind.c_mac(),
    "bc": NetworkKind.c_bc(),
    "pac": NetworkKind.c_pac(),
    "ref": NetworkKind.reference(),
}

_QUANTITY_TOKENS = {
    "throughput": Quantity.THROUGHPUT,
    "normalized-throughput": Quantity.NORMALIZED_THROUGHPUT,
    "mdg-ratio": Quantity.MDG_RATIO,
    "mdg-kappa": Quantity.MDG_KAPPA,
    "asymptotic-ratio": Quantity.ASYMPTOTIC_RATIO,
}

_CONFIG_KEYS = (
    "preset",
    "network",
    "users",
    "samples",
    "seed",
    "workers",
    "power",
    "bs_power",
    "pr_power",
    "interference_limit",
    "output",
    "format",
    "quantity",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """Validated, fully defaulted description of one experiment run."""

    preset: Preset
    networks: tuple[NetworkKind, ...]
    K_list: tuple[int, ...]
    n_samples: int
    seed: int
    workers: int
    quantity: Quantity
    per_user_power: float | tuple[float, ...] = 1.0
    bs_power: float = 1.0
    pr_power: float = 1.0
    interference_limit: float = 1.0
    output_path: str = ""
    output_format: str = "csv"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _parse_int(raw, flag: str) -> int:
    try:
        return int(str(raw).strip())
    except ValueError:
        raise ConfigurationError(f"{flag} expects an integer, got {raw!r}") from None


def _parse_float(raw, flag: str) -> float:
    try:
        return float(str(raw).strip())
    except ValueError:
        raise ConfigurationError(f"{flag} expects a number, got {raw!r}") from None


def _parse_users(raw) -> tuple[int, ...]:
    if isinstance(raw, (list, tuple)):
        values = [int(v) for v in raw]
    else:
        parts = [p for p in str(raw).replace(" ", "").split(",") if p]
        if not parts:
            raise ConfigurationError("--users expects a comma-separated list of integers")
        values = [_parse_int(p, "--users") for p in parts]
    if any(v < 1 for v in values):
        raise ConfigurationError(f"--users entries must be >= 1, got {values}")
    return tuple(sorted(set(values)))


def _parse_networks(raw) -> tuple[NetworkKind, ...]:
    if raw is None:
        tokens = list(_NETWORK_TOKENS)
    elif isinstance(raw, str):
        tokens = [t for t in raw.replace(" ", "").split(",") if t]
    else:
        tokens = list(raw)
    kinds = []
    for token in tokens:
        if token not in _NETWORK_TOKENS:
            raise ConfigurationError(
                f"--network expects one of {sorted(_NETWORK_TOKENS)}, got {token!r}"
            )
        kinds.append(_NETWORK_TOKENS[token])
    return tuple(canonical_network_order(kinds))


def _parse_power(raw) -> float | tuple[float, ...]:
    if isinstance(raw, (int, float)):
        return float(raw)
    parts = [p for p in str(raw).replace(" ", "").split(",") if p]
    if len(parts) == 1:
        return _parse_float(parts[0], "--power")
    return tuple(_parse_float(p, "--power") for p in parts)


def validate_spec(raw: Mapping[str, object]) -> ExperimentSpec:
    """Normalize raw flag/config values into a validated ExperimentSpec.

    Args:
        raw: mapping of canonical option names (see module docstring) to the
            user-provided values; missing or None entries take defaults.

    Returns:
        Fully populated spec with J=Q=P=Gamma=1 defaults.

    Raises:
        ConfigurationError: on invalid or mutually contradictory settings,
            with a message naming the offending flags.
    """
    values = {k: v for k, v in raw.items() if v is not None}
    unknown = set(values) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown options: {sorted(unknown)}")

    preset_token = str(values.get("preset", "custom"))
    try:
        preset = Preset(preset_token)
    except ValueError:
        raise ConfigurationError(
            f"--preset expects one of {[p.value for p in Preset]}, got {preset_token!r}"
        ) from None

    if preset is Preset.CUSTOM:
        quantity_token = values.get("quantity")
        if quantity_token is None:
            raise ConfigurationError("--preset custom requires --quantity")
        token = str(quantity_token).replace("_", "-")
        if token not in _QUANTITY_TOKENS:
            raise ConfigurationError(
                f"--quantity expects one of {sorted(_QUANTITY_TOKENS)}, got {quantity_token!r}"
            )
        quantity = _QUANTITY_TOKENS[token]
        if "users" not in values:
            raise ConfigurationError("--preset custom requires --users")
    else:
        if "quantity" in values:
            raise ConfigurationError(
                f"--quantity conflicts with --preset {preset.value}, "
                "which fixes the measured quantity"
            )
        quantity = _PRESET_QUANTITY[preset]

    K_list = _parse_users(values["users"]) if "users" in values else _PRESET_K.get(preset)
    if preset is Preset.FIG1 and any(k > 100 for k in K_list):
        raise ConfigurationError(
            f"--users {max(K_list)} conflicts with --preset fig1 (K must be within 1..100)"
        )
    if preset is Preset.FIG2 and any(k not in _FIG2_K for k in K_list):
        bad = [k for k in K_list if k not in _FIG2_K]
        raise ConfigurationError(
            f"--users {bad} conflicts with --preset fig2 "
            f"(K must be from {list(_FIG2_K)}, the asymptotic range)"
        )
    if quantity is Quantity.ASYMPTOTIC_RATIO and any(k <= 2 for k in K_list):
        raise ConfigurationError("--quantity asymptotic-ratio requires every K >= 3")

    n_samples = (
        _parse_int(values["samples"], "--samples")
        if "samples" in values
        else _PRESET_SAMPLES[preset]
    )
    if n_samples < 2:
        raise ConfigurationError(f"--samples must be >= 2, got {n_samples}")

    seed = _parse_int(values.get("seed", 42), "--seed")
    try:
        RngSpec(seed)
    except ConfigurationError as exc:
        raise ConfigurationError(f"--seed: {exc}") from None

    workers_raw = values.get("workers", 1)
    if str(workers_raw).strip() == "auto":
        workers = os.cpu_count() or 1
    else:
        workers = _parse_int(workers_raw, "--workers")
        if workers < 1:
            raise ConfigurationError(f"--workers must be >= 1, got {workers}")

    power = _parse_power(values.get("power", 1.0))
    entries = power if isinstance(power, tuple) else (power,)
    if any(p <= 0.0 for p in entries):
        raise ConfigurationError(f"--power entries must be positive, got {values.get('power')!r}")
    if isinstance(power, tuple):
        if quantity in (Quantity.MDG_RATIO, Quantity.MDG_KAPPA) and len(set(power)) > 1:
            raise ConfigurationError(
                "--power with unequal per-user entries conflicts with "
                f"--quantity {quantity.value}: diversity gain assumes symmetric powers"
            )
        if len(K_list) != 1 or K_list[0] != len(power):
            raise ConfigurationError(
                f"--power lists {len(power)} per-user entries, so --users must be "
                f"exactly {len(power)}"
            )

    networks = _parse_networks(values.get("network"))
    output_format = str(values.get("format", "csv"))
    if output_format not in ("csv", "json"):
        raise ConfigurationError(f"--format expects csv or json, got {output_format!r}")
    output_path = str(values.get("output", f"{preset.value}.{output_format}"))

    def _power_flag(key: str, flag: str) -> float:
        value = _parse_float(values.get(key, 1.0), flag)
        if value <= 0.0:
            raise ConfigurationError(f"{flag} must be positive, got {value}")
        return value

    return ExperimentSpec(
        preset=preset,
        networks=networks,
        K_list=tuple(K_list),
        n_samples=n_samples,
        seed=seed,
        workers=workers,
        quantity=quantity,
        per_user_power=power,
        bs_power=_power_flag("bs_power", "--bs-power"),
        pr_power=_power_flag("pr_power", "--pr-power"),
        interference_limit=_power_flag("interference_limit", "--interference-limit"),
        output_path=output_path,
        output_format=output_format,
    )


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def _config_for(spec: ExperimentSpec, kind: NetworkKind, K: int) -> NetworkConfig:
    power = spec.per_user_power
    if isinstance(power, tuple) and len(power) != K:
        power = power[0]
    return NetworkConfig(
        kind=kind,
        users=K,
        per_user_power=power,
        bs_power=spec.bs_power,
        pr_power=spec.pr_power,
        interference_limit=spec.interference_limit,
    )


def _estimate_point(spec: ExperimentSpec, kind: NetworkKind, K: int, rng: RngSpec) -> Estimate:
    config = _config_for(spec, kind, K)
    if spec.quantity is Quantity.THROUGHPUT:
        return metrics.estimate_ergodic_throughput(config, spec.n_samples, rng, spec.workers)
    if spec.quantity is Quantity.MDG_RATIO:
        return metrics.estimate_mdg_ratio(config, spec.n_samples, rng, spec.workers)
    if spec.quantity is Quantity.MDG_KAPPA:
        return metrics.estimate_mdg_kappa(config, spec.n_samples, rng, spec.workers)
    if spec.quantity is Quantity.ASYMPTOTIC_RATIO:
        return metrics.asymptotic_ratio(config, spec.n_samples, rng, spec.workers)
    raise ConfigurationError(f"unsupported quantity {spec.quantity}")


def _theorem_bounds(spec: ExperimentSpec, kind: NetworkKind, K: int) -> tuple[float, float, float]:
    """(lower, upper, alpha) of the diversity-gain sandwich for one row."""
    reference_gain = reference_mdg_exact(K)
    if kind.variant is NetworkVariant.REFERENCE:
        alpha = 1.0
    else:
        constants = bound_constants(_config_for(spec, kind, K))
        alpha = {
            NetworkVariant.CMAC: constants.alpha_mac,
            NetworkVariant.CBC: constants.alpha_bc,
            NetworkVariant.CPAC: constants.alpha_pac,
        }[kind.variant]
    return reference_gain, alpha * reference_gain, alpha


def _collect_rows(spec: ExperimentSpec) -> list[dict]:
    rng = RngSpec(spec.seed)
    rows: list[dict] = []

    if spec.quantity is Quantity.NORMALIZED_THROUGHPUT:
        points: list[CurvePoint] = metrics.normalized_throughput_curve(
            spec.networks,
            spec.K_list,
            spec.n_samples,
            rng,
            workers=spec.workers,
            per_user_power=spec.per_user_power,
            bs_power=spec.bs_power,
            pr_power=spec.pr_power,
            interference_limit=spec.interference_limit,
        )
        for point in points:
            rows.append(_row(spec, point.network, point.K, point.value))
            _log_point(point.network, point.K, point.value)
        return rows

    for kind in spec.networks:
        for K in spec.K_list:
            estimate = _estimate_point(spec, kind, K, rng)
            row = _row(spec, kind, K, estimate)
            if spec.preset is Preset.THEOREM_SUITE:
                lower, upper, alpha = _theorem_bounds(spec, kind, K)
                row["lower_bound"] = lower
                row["upper_bound"] = upper
                row["alpha"] = alpha
            rows.append(row)
            _log_point(kind, K, estimate)
    return rows


def _row(spec: ExperimentSpec, kind: NetworkKind, K: int, estimate: Estimate) -> dict:
    return {
        "network": kind.label,
        "K": K,
        "quantity": spec.quantity.value,
        "mean": estimate.mean,
        "std_error": estimate.std_error,
        "n_samples": estimate.n_samples,
        "seed": spec.seed,
    }


def _log_point(kind: NetworkKind, K: int, estimate: Estimate) -> None:
    print(
        f"[crmid] {kind.label:9s} K={K:<8d} mean={estimate.mean:.6g} "
        f"se={estimate.std_error:.3g} n={estimate.n_samples}",
        file=sys.stderr,
    )


def _format_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_csv(rows: list[dict], path: str) -> None:
    columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_value(row[c]) for c in columns))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(rows: list[dict], spec: ExperimentSpec, path: str) -> None:
    document = {
        "preset": spec.preset.value,
        "seed": spec.seed,
        "n_samples": spec.n_samples,
        "rows": rows,
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")


def run_experiment(spec: ExperimentSpec) -> int:
    """Run all (network, K) points, write the output file, return exit status.

    Exit status is 0 on success; for the theorem-suite preset it is 1 when
    any diversity-gain estimate sits outside its analytic sandwich by more
    than three standard errors.
    """
    rows = _collect_rows(spec)
    try:
        if spec.output_format == "csv":
            _write_csv(rows, spec.output_path)
        else:
            _write_json(rows, spec, spec.output_path)
    except OSError as exc:
        print(f"error: cannot write {spec.output_path!r}: {exc}", file=sys.stderr)
        return 2

    status = 0
    if spec.preset is Preset.THEOREM_SUITE:
        for row in rows:
            slack = 3.0 * row["std_error"]
            if row["mean"] < row["lower_bound"] - slack or row["mean"] > row["upper_bound"] + slack:
                print(
                    f"error: sandwich violation: {row['network']} K={row['K']} "
                    f"mean={row['mean']:.6g} outside "
                    f"[{row['lower_bound']:.6g}, {row['upper_bound']:.6g}] +/- {slack:.3g}",
                    file=sys.stderr,
                )
                status = 1
    print(f"[crmid] wrote {len(rows)} rows to {spec.output_path}", file=sys.stderr)
    return status


# ---------------------------------------------------------------------------
# Flag and config-file handling
# ---------------------------------------------------------------------------


def _read_config_file(path: str) -> dict[str, str]:
    """Parse a flat key=value config file mirroring the CLI flags."""
    options: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            content = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path!r}: {exc}") from None
    for lineno, line in enumerate(content.splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, _, value = text.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigurationError(
                f"{path}:{lineno}: unknown option {key!r} (expected one of {list(_CONFIG_KEYS)})"
            )
        options[key] = value.strip()
    return options


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crmid",
        description="Monte Carlo experiments for spectrum-sharing network diversity",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment and write CSV/JSON")
    run.add_argument("--preset", help="fig1 | fig2 | theorem-suite | custom")
    run.add_argument(
        "--network",
        action="append",
        choices=sorted(_NETWORK_TOKENS),
        help="network to include (repeatable; default: all four)",
    )
    run.add_argument("--users", help="comma-separated user counts K")
    run.add_argument("--samples", help="Monte Carlo samples per point")
    run.add_argument("--seed", help="master seed (default 42)")
    run.add_argument("--workers", help="worker processes, or 'auto' (default 1)")
    run.add_argument("--power", help="per-user peak power P (scalar or comma list)")
    run.add_argument("--bs-power", dest="bs_power", help="base-station peak power J")
    run.add_argument("--pr-power", dest="pr_power", help="primary transmit power Q")
    run.add_argument(
        "--interference-limit",
        dest="interference_limit",
        help="peak interference limit Gamma",
    )
    run.add_argument("--output", help="output file path")
    run.add_argument("--format", help="csv | json (default csv)")
    run.add_argument("--quantity", help="measured quantity for --preset custom")
    run.add_argument("--config", help="flat key=value config file (flags take precedence)")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Console entry point; returns the process exit status."""
    args = _build_parser().parse_args(argv)
    try:
        raw: dict[str, object] = {}
        if args.config:
            raw.update(_read_config_file(args.config))
        for key in _CONFIG_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                raw[key] = value
        spec = validate_spec(raw)
        return run_experiment(spec)
    except (ConfigurationError, UnsupportedConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
