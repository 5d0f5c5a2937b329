"""Command-line interface: ``run``, ``check``, and ``dyson``.

``run`` executes one scenario from a config file and writes a JSON summary
plus a per-report-time series table.  ``check`` sweeps the closed-form
amplitude identities over a refractive-index range.  ``dyson`` tabulates
the partial sums of the point-scatterer Born series for a coupling ratio
``q = |Omega|/(2c)`` (taken on the negative imaginary axis, so both
amplitudes are real).

Exit codes: 0 success, 1 tolerance breach under ``--strict``, 2
configuration error, 3 runtime error.  All floats are written with 17
significant digits; identical configs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .errors import BlipSimError, ConfigurationError, ZeroNormError
from .fields import field_profile
from .lattice import BlipWavePacket, Medium, centroid, combine, gaussian_packet, make_grid
from .observables import branch_expectations, conditional_expectations
from .propagation import Scenario, ScenarioResult, run_scenario
from .scattering import (
    REMAINDER_ROUNDING_FLOOR,
    MirrorCoupling,
    dyson_partial_sums,
    dyson_remainder_bound,
    fresnel_rates,
    omega_from_n,
    rates_from_omega,
    stokes_residuals,
)
from .spectral import SpectralWavePacket, to_momentum

__all__ = ["main", "cmd_run", "cmd_check", "cmd_dyson"]

DEFAULT_TOLERANCES = {
    "energy_ratio": 1e-9,
    "momentum_ratio": 1e-6,
    "conditional_ratio": 1e-6,
    "unitarity": 1e-9,
    "resample_drift": 1e-8,
    "peak_bins": 1.0,
}

_BOOLEAN_STATES = {
    "1": True, "yes": True, "true": True, "on": True,
    "0": False, "no": False, "false": False, "off": False,
}


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def _dump_json(obj: Any, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable key order."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(key))}: {_dump_json(val, indent + 1)}"
            for key, val in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{inner}{_dump_json(val, indent + 1)}" for val in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return str(v)


def _write_table(base: Path, header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> Path:
    """Write one table as ``base.csv`` or ``base.json``; returns the path."""
    if fmt == "csv":
        path = base.with_suffix(".csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    else:
        path = base.with_suffix(".json")
        payload = [dict(zip(header, row)) for row in rows]
        path.write_text(_dump_json([_clean_row(r) for r in payload]) + "\n")
    return path


def _clean_row(row: dict[str, Any]) -> dict[str, Any]:
    return {k: (float(v) if isinstance(v, np.floating) else v) for k, v in row.items()}


def _assert_finite(obj: Any, path: str = "summary") -> None:
    if isinstance(obj, dict):
        for key, val in obj.items():
            _assert_finite(val, f"{path}.{key}")
    elif isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            _assert_finite(val, f"{path}[{i}]")
    elif isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return
    elif isinstance(obj, (float, np.floating)):
        if not math.isfinite(float(obj)):
            raise BlipSimError(f"non-finite value at {path}")


# ---------------------------------------------------------------------------
# config schema

def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse complex number from {text!r}") from exc


def _parse_bool(text: str) -> bool:
    key = text.strip().lower()
    if key not in _BOOLEAN_STATES:
        raise ConfigurationError(f"cannot parse boolean from {text!r}")
    return _BOOLEAN_STATES[key]


def _parse_times(text: str) -> tuple[float, ...]:
    items = [tok for tok in text.replace(",", " ").split() if tok]
    if not items:
        raise ConfigurationError("schedule times must contain at least one value")
    return tuple(float(tok) for tok in items)


def _parse_direction(text: str) -> int:
    if text.strip() in ("+1", "1"):
        return 1
    if text.strip() == "-1":
        return -1
    raise ConfigurationError(f"direction must be +1 or -1, got {text!r}")


_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "grid": {"x_min": float, "x_max": float, "n_points": int},
    "packet": {
        "direction": _parse_direction,
        "polarization": str,
        "x0": float,
        "k0": float,
        "sigma": float,
    },
    "media": {
        "n": float,
        "left_epsilon": float,
        "left_mu": float,
        "right_epsilon": float,
        "right_mu": float,
        "area": float,
        "c0": float,
    },
    "coupling": {"source": str, "omega": _parse_complex},
    "schedule": {"times": _parse_times},
    "output": {"summary": str, "series": str, "snapshots": _parse_bool},
    "units": {"hbar": float},
    "tolerances": {key: float for key in DEFAULT_TOLERANCES},
}

_REQUIRED = {
    "grid": ("x_min", "x_max", "n_points"),
    "packet": ("direction", "polarization", "x0", "k0", "sigma"),
    "schedule": ("times",),
}


def _load_config(path: str) -> dict[str, dict[str, Any]]:
    """Parse and type-check the config; unknown sections or keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config {path!r}: {exc}") from exc
    cfg: dict[str, dict[str, Any]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigurationError(f"unknown config section [{section}]")
        cfg[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigurationError(f"unknown key {key!r} in section [{section}]")
            try:
                cfg[section][key] = _SCHEMA[section][key](raw)
            except ConfigurationError:
                raise
            except ValueError as exc:
                raise ConfigurationError(
                    f"bad value for {key!r} in [{section}]: {raw!r} ({exc})"
                ) from exc
    for section, keys in _REQUIRED.items():
        if section not in cfg:
            raise ConfigurationError(f"missing config section [{section}]")
        for key in keys:
            if key not in cfg[section]:
                raise ConfigurationError(f"missing key {key!r} in section [{section}]")
    return cfg


def _scenario_from_config(cfg: dict[str, dict[str, Any]]) -> Scenario:
    grid = make_grid(cfg["grid"]["x_min"], cfg["grid"]["x_max"], cfg["grid"]["n_points"])
    pol = cfg["packet"]["polarization"]
    if pol not in ("H", "V"):
        raise ConfigurationError(f"polarization must be H or V, got {pol!r}")
    packet = gaussian_packet(
        grid,
        (cfg["packet"]["direction"], pol),
        cfg["packet"]["x0"],
        cfg["packet"]["k0"],
        cfg["packet"]["sigma"],
    )

    media = cfg.get("media", {})
    area = media.get("area", 1.0)
    c0 = media.get("c0", 1.0)
    explicit = [key for key in ("left_epsilon", "left_mu", "right_epsilon", "right_mu") if key in media]
    if "n" in media and explicit:
        raise ConfigurationError("give either media.n or explicit epsilon/mu pairs, not both")
    if explicit:
        for key in ("left_epsilon", "left_mu", "right_epsilon", "right_mu"):
            if key not in media:
                raise ConfigurationError(f"explicit media need all four pairs; missing {key!r}")
        left = Medium(media["left_epsilon"], media["left_mu"], area, c0)
        right = Medium(media["right_epsilon"], media["right_mu"], area, c0)
    else:
        left = Medium.reference(area=area, c0=c0)
        right = Medium.from_index(media.get("n", 1.0), area=area, c0=c0)

    coupling = cfg.get("coupling", {})
    source = coupling.get("source", "from_n")
    if source not in ("from_n", "explicit"):
        raise ConfigurationError(f"coupling source must be from_n or explicit, got {source!r}")
    omega = None
    if source == "explicit":
        if "omega" not in coupling:
            raise ConfigurationError("coupling source 'explicit' needs an omega value")
        omega = coupling["omega"]
    elif "omega" in coupling:
        raise ConfigurationError("coupling omega given but source is from_n")

    hbar = cfg.get("units", {}).get("hbar", 1.0)
    return Scenario(
        packet=packet,
        left_medium=left,
        right_medium=right,
        schedule=cfg["schedule"]["times"],
        omega=omega,
        hbar=hbar,
    )


# ---------------------------------------------------------------------------
# run

def _observable_block(p: BlipWavePacket, media: dict[int, Medium], hbar: float) -> dict[str, Any]:
    vals = branch_expectations(p, media, hbar)
    weight = vals["photon_number"]
    return {
        "norm": weight,
        "centroid": centroid(p) if weight > 0.0 else None,
        "energy": vals["energy"],
        "dyn_hamiltonian": vals["dyn_hamiltonian"],
        "dyn_momentum": vals["dyn_momentum"],
        "field_momentum": vals["field_momentum"],
        "abraham_momentum": vals["abraham_momentum"],
    }


def _report_block(report) -> dict[str, Any]:
    return {
        "energy": report.energy,
        "dyn_hamiltonian": report.dyn_hamiltonian,
        "dyn_momentum": report.dyn_momentum,
        "field_momentum": report.field_momentum,
        "medium_tag": report.medium_tag,
    }


def _spectral_peak(p: BlipWavePacket) -> float | None:
    sp = to_momentum(p)
    dens = np.zeros(p.grid.n_points)
    for a in sp.amp.values():
        dens += np.abs(a) ** 2
    if not np.any(dens):
        return None
    return float(p.grid.k[int(np.argmax(dens))])


def _ratio(numer: float, denom: float) -> float | None:
    if abs(denom) < 1e-12 * max(1.0, abs(numer)):
        return None
    return numer / denom


def _verdict(deviation: float | None, tol: float) -> str:
    if deviation is None:
        return "skipped"
    return "pass" if deviation <= tol else "fail"


def _summarize(
    cfg: dict[str, dict[str, Any]], sc: Scenario, result: ScenarioResult
) -> tuple[dict[str, Any], int]:
    incoming_media = {+1: sc.left_medium, -1: sc.right_medium}
    outgoing_media = {+1: sc.right_medium, -1: sc.left_medium}
    outcome = result.outcome
    n = sc.n
    rates = outcome.rates

    directions = sorted({ch.s for ch in sc.packet.amp})
    direction = directions[0] if len(directions) == 1 else 0
    k0 = cfg["packet"]["k0"]

    inp = _observable_block(sc.packet, incoming_media, sc.hbar)
    total_packet = combine(outcome.transmitted, outcome.reflected)
    out_blocks = {
        "transmitted": _observable_block(outcome.transmitted, outgoing_media, sc.hbar),
        "reflected": _observable_block(outcome.reflected, outgoing_media, sc.hbar),
        "total": _observable_block(total_packet, outgoing_media, sc.hbar),
    }
    out_blocks["transmitted"]["probability"] = outcome.prob_t
    out_blocks["reflected"]["probability"] = outcome.prob_r

    conditional: dict[str, Any] = {}
    for branch in ("transmitted", "reflected"):
        try:
            conditional[branch] = _report_block(
                conditional_expectations(outcome, branch, sc.hbar)
            )
        except ZeroNormError:
            conditional[branch] = None

    # predictions from the amplitude table; closed forms where the rates are
    # the normal-incidence ones
    fresnel = sc.omega is None
    if direction == +1:
        pred_momentum = n * abs(rates.t_plus) ** 2 - abs(rates.r_plus) ** 2
        closed = (3.0 * n - 1.0) / (n + 1.0) if fresnel else None
        pred_conditional = n
        pred_peak = n * k0
    elif direction == -1:
        pred_momentum = abs(rates.t_minus) ** 2 / n - abs(rates.r_minus) ** 2
        closed = (3.0 - n) / (n + 1.0) if fresnel else None
        pred_conditional = 1.0 / n
        pred_peak = k0 / n
    else:
        pred_momentum = None
        closed = None
        pred_conditional = None
        pred_peak = None

    measured_energy = _ratio(out_blocks["total"]["energy"], inp["energy"])
    measured_momentum = _ratio(out_blocks["total"]["dyn_momentum"], inp["dyn_momentum"])
    cond_t = conditional["transmitted"]
    measured_conditional = (
        _ratio(cond_t["dyn_momentum"], inp["dyn_momentum"]) if cond_t else None
    )
    measured_peak = _spectral_peak(outcome.transmitted)
    unitarity = outcome.prob_t + outcome.prob_r

    def rel_dev(measured: float | None, predicted: float | None) -> float | None:
        if measured is None or predicted is None:
            return None
        scale = max(abs(predicted), 1e-12)
        return abs(measured - predicted) / scale if abs(predicted) > 1e-12 else abs(measured)

    deviations = {
        "energy_ratio": rel_dev(measured_energy, 1.0),
        "momentum_ratio": rel_dev(measured_momentum, pred_momentum),
        "conditional_ratio": rel_dev(measured_conditional, pred_conditional),
        "unitarity": rel_dev(unitarity, 1.0),
        "resample_drift": result.diagnostics["resampling_drift"],
        "peak_bins": (
            abs(measured_peak - pred_peak) / sc.packet.grid.dk
            if measured_peak is not None and pred_peak is not None
            else None
        ),
    }
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(cfg.get("tolerances", {}))
    checks = {key: _verdict(deviations[key], tolerances[key]) for key in deviations}
    breaches = sum(1 for verdict in checks.values() if verdict == "fail")

    summary = {
        "command": "run",
        "config": cfg_echo(cfg),
        "scenario": {
            "n": n,
            "direction": direction if direction else "mixed",
            "coupling": "from_n" if fresnel else "explicit",
            "omega": None
            if sc.omega is None
            else {"real": sc.omega.real, "imag": sc.omega.imag},
            "t_final": outcome.t_final,
            "schedule": list(sc.schedule),
            "tag": outcome.scenario_tag,
        },
        "input": inp,
        "output": out_blocks,
        "conditional": conditional,
        "predictions": {
            "energy_ratio": 1.0,
            "momentum_ratio": pred_momentum,
            "momentum_ratio_closed_form": closed,
            "conditional_transmitted_momentum_ratio": pred_conditional,
            "transmitted_peak_k": pred_peak,
            "unitarity": 1.0,
        },
        "measured": {
            "energy_ratio": measured_energy,
            "momentum_ratio": measured_momentum,
            "conditional_transmitted_momentum_ratio": measured_conditional,
            "transmitted_peak_k": measured_peak,
            "unitarity": unitarity,
        },
        "deviations": deviations,
        "tolerances": tolerances,
        "checks": checks,
        "diagnostics": {
            "resampling_drift": result.diagnostics["resampling_drift"],
            "guard_fraction": result.diagnostics["guard_fraction"],
            "non_asymptotic_times": list(result.diagnostics["non_asymptotic_times"]),
            "asymptotic_final": outcome.asymptotic,
        },
    }
    _assert_finite(summary)
    return summary, breaches


def cfg_echo(cfg: dict[str, dict[str, Any]]) -> dict[str, Any]:
    echo: dict[str, Any] = {}
    for section in sorted(cfg):
        echo[section] = {}
        for key in sorted(cfg[section]):
            val = cfg[section][key]
            if isinstance(val, complex):
                val = {"real": val.real, "imag": val.imag}
            elif isinstance(val, tuple):
                val = list(val)
            echo[section][key] = val
    return echo


SERIES_HEADER = (
    "time",
    "branch",
    "norm",
    "centroid",
    "energy",
    "dyn_momentum",
    "field_momentum",
    "abraham_momentum",
)


def _series_rows(result: ScenarioResult) -> list[list[Any]]:
    return [
        [
            row.time,
            row.branch,
            row.norm,
            row.centroid,
            row.energy,
            row.dyn_momentum,
            row.field_momentum,
            row.abraham_momentum,
        ]
        for row in result.rows
    ]


def _field_density(p: BlipWavePacket, media: dict[int, Medium], hbar: float) -> np.ndarray:
    """|E(x)|^2 with every channel reconstructed in its own medium."""
    sp = to_momentum(p)
    e_y = np.zeros(p.grid.n_points, dtype=np.complex128)
    e_z = np.zeros(p.grid.n_points, dtype=np.complex128)
    for ch, a in sp.amp.items():
        fp = field_profile(SpectralWavePacket(p.grid, {ch: a}), media[ch.s], hbar)
        e_y += fp.e_y
        e_z += fp.e_z
    return np.abs(e_y) ** 2 + np.abs(e_z) ** 2


def _write_snapshots(
    out_dir: Path, sc: Scenario, result: ScenarioResult, fmt: str
) -> list[Path]:
    outcome = result.outcome
    outgoing = {+1: sc.right_medium, -1: sc.left_medium}
    total = combine(outcome.transmitted, outcome.reflected)
    grid = total.grid

    def density_x(p: BlipWavePacket) -> np.ndarray:
        dens = np.zeros(grid.n_points)
        for a in p.amp.values():
            dens += np.abs(a) ** 2
        return dens

    def density_k(p: BlipWavePacket) -> np.ndarray:
        dens = np.zeros(grid.n_points)
        for a in to_momentum(p).amp.values():
            dens += np.abs(a) ** 2
        return dens

    written = []
    pos = [
        [x, t, r, tot]
        for x, t, r, tot in zip(
            grid.x, density_x(outcome.transmitted), density_x(outcome.reflected), density_x(total)
        )
    ]
    written.append(
        _write_table(out_dir / "snapshot_position", ("x", "transmitted", "reflected", "total"), pos, fmt)
    )
    spectrum_rows = [
        [k, t, r]
        for k, t, r in zip(
            grid.k, density_k(outcome.transmitted), density_k(outcome.reflected)
        )
    ]
    written.append(
        _write_table(
            out_dir / "snapshot_spectrum", ("k", "transmitted", "reflected"), spectrum_rows, fmt
        )
    )
    fld = _field_density(total, outgoing, sc.hbar)
    written.append(
        _write_table(
            out_dir / "snapshot_field",
            ("x", "e_density"),
            [[x, v] for x, v in zip(grid.x, fld)],
            fmt,
        )
    )
    return written


def cmd_run(config_path: str, out_dir: str = ".", fmt: str = "csv", strict: bool = False) -> int:
    cfg = _load_config(config_path)
    sc = _scenario_from_config(cfg)
    result = run_scenario(sc)
    summary, breaches = _summarize(cfg, sc, result)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    output_cfg = cfg.get("output", {})
    summary_path = out / output_cfg.get("summary", "summary.json")
    summary_path.write_text(_dump_json(summary) + "\n")
    series_base = out / Path(output_cfg.get("series", "series.csv")).stem
    series_path = _write_table(series_base, SERIES_HEADER, _series_rows(result), fmt)
    written = [summary_path, series_path]
    if output_cfg.get("snapshots", False):
        written.extend(_write_snapshots(out, sc, result, fmt))

    print(f"scenario: {summary['scenario']['tag']}")
    for key in ("energy_ratio", "momentum_ratio", "conditional_ratio", "unitarity", "peak_bins"):
        dev = summary["deviations"][key]
        shown = "n/a" if dev is None else _fmt_float(dev)
        print(f"  {key:<18} deviation {shown:<24} [{summary['checks'][key]}]")
    print(f"  resample_drift     {_fmt_float(summary['diagnostics']['resampling_drift'])}"
          f"                [{summary['checks']['resample_drift']}]")
    for path in written:
        print(f"wrote {path}")
    if strict and breaches:
        print(f"strict mode: {breaches} tolerance breach(es)", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# check

CHECK_HEADER = (
    "n",
    "t",
    "r_minus",
    "r_plus",
    "stokes_cross",
    "stokes_minus",
    "stokes_plus",
    "omega_roundtrip",
    "momentum_ratio_in",
    "momentum_ratio_in_closed",
    "momentum_ratio_out",
    "momentum_ratio_out_closed",
    "postselected_in",
    "postselected_out",
    "pass",
)


def cmd_check(
    n_min: float = 1.0,
    n_max: float = 10.0,
    steps: int = 100,
    out_dir: str = ".",
    fmt: str = "csv",
    strict: bool = False,
    tolerance: float = 1e-12,
) -> int:
    if not (math.isfinite(n_min) and n_min > 0 and math.isfinite(n_max) and n_max >= n_min):
        raise ConfigurationError(f"need 0 < n_min <= n_max, got [{n_min}, {n_max}]")
    if steps < 1:
        raise ConfigurationError(f"steps must be >= 1, got {steps}")
    values = np.linspace(n_min, n_max, steps) if steps > 1 else np.array([n_min])
    rows: list[list[Any]] = []
    worst = 0.0
    failures = 0
    for n in values:
        n = float(n)
        rates = fresnel_rates(n)
        cross, d_minus, d_plus = stokes_residuals(rates)
        recovered = rates_from_omega(omega_from_n(n))
        roundtrip = max(
            abs(recovered.t_minus - rates.t_minus),
            abs(recovered.t_plus - rates.t_plus),
            abs(recovered.r_minus - rates.r_minus),
            abs(recovered.r_plus - rates.r_plus),
        )
        ratio_in = n * abs(rates.t_plus) ** 2 - abs(rates.r_plus) ** 2
        closed_in = (3.0 * n - 1.0) / (n + 1.0)
        ratio_out = abs(rates.t_minus) ** 2 / n - abs(rates.r_minus) ** 2
        closed_out = (3.0 - n) / (n + 1.0)
        dev = max(
            cross, d_minus, d_plus, roundtrip,
            abs(ratio_in - closed_in), abs(ratio_out - closed_out),
        )
        worst = max(worst, dev)
        ok = dev <= tolerance
        failures += 0 if ok else 1
        rows.append(
            [
                n,
                rates.t_plus.real,
                rates.r_minus.real,
                rates.r_plus.real,
                cross,
                d_minus,
                d_plus,
                roundtrip,
                ratio_in,
                closed_in,
                ratio_out,
                closed_out,
                n,
                1.0 / n,
                ok,
            ]
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = _write_table(out / "check", CHECK_HEADER, rows, fmt)
    verdict = "PASS" if failures == 0 else f"FAIL ({failures} of {len(rows)} indices)"
    print(
        f"check: {len(rows)} indices in [{_fmt_float(n_min)}, {_fmt_float(n_max)}], "
        f"max deviation {_fmt_float(worst)} (tolerance {_fmt_float(tolerance)}): {verdict}"
    )
    print(f"wrote {path}")
    return 1 if strict and failures else 0


# ---------------------------------------------------------------------------
# dyson

DYSON_HEADER = (
    "order",
    "t_partial",
    "r_partial",
    "err_t",
    "bound_t",
    "within_t",
    "err_r",
    "bound_r",
    "within_r",
    "divergent",
)


def cmd_dyson(
    omega_ratio: float,
    n_terms: int = 12,
    out_dir: str = ".",
    fmt: str = "csv",
    strict: bool = False,
) -> int:
    if not (math.isfinite(omega_ratio) and omega_ratio >= 0):
        raise ConfigurationError(f"omega ratio must be >= 0, got {omega_ratio!r}")
    if n_terms < 1:
        raise ConfigurationError(f"terms must be >= 1, got {n_terms}")
    q = float(omega_ratio)
    mc = MirrorCoupling(omega=-2j * q, c_ref=1.0)
    sums = dyson_partial_sums(mc, n_terms)
    divergent = q >= 1.0
    rows: list[list[Any]] = []
    breaches = 0
    if divergent:
        for order, (t_part, r_part) in enumerate(sums):
            rows.append(
                [order, t_part.real, r_part.real, None, None, None, None, None, None, True]
            )
    else:
        exact = rates_from_omega(mc)
        for order, (t_part, r_part) in enumerate(sums):
            err_t = abs(t_part - exact.t_plus)
            err_r = abs(r_part - exact.r_plus)
            bound_t = dyson_remainder_bound(mc, order, "t")
            bound_r = dyson_remainder_bound(mc, order, "r")
            within_t = err_t <= bound_t + REMAINDER_ROUNDING_FLOOR
            within_r = err_r <= bound_r + REMAINDER_ROUNDING_FLOOR
            breaches += 0 if (within_t and within_r) else 1
            rows.append(
                [
                    order,
                    t_part.real,
                    r_part.real,
                    err_t,
                    bound_t,
                    within_t,
                    err_r,
                    bound_r,
                    within_r,
                    False,
                ]
            )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = _write_table(out / "dyson", DYSON_HEADER, rows, fmt)
    if divergent:
        print(
            f"dyson: q = {_fmt_float(q)} >= 1, series divergent; partial sums do not settle"
        )
    else:
        verdict = "PASS" if breaches == 0 else f"FAIL ({breaches} orders outside bound)"
        print(
            f"dyson: q = {_fmt_float(q)}, {len(rows)} orders, geometric tail bound: {verdict}"
        )
    print(f"wrote {path}")
    return 1 if strict and breaches else 0


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blipsim",
        description="Single-photon wave packets at mirrors and dielectric boundaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", metavar="DIR", help="output directory")
    common.add_argument(
        "--format", dest="fmt", choices=("csv", "json"), default="csv",
        help="table format (default csv)",
    )
    common.add_argument(
        "--strict", action="store_true",
        help="exit 1 when any tolerance check fails",
    )

    p_run = sub.add_parser("run", parents=[common], help="run a scenario from a config file")
    p_run.add_argument("--config", required=True, metavar="PATH")

    p_check = sub.add_parser(
        "check", parents=[common], help="closed-form identity sweep over an index range"
    )
    p_check.add_argument("--n-min", type=float, default=1.0)
    p_check.add_argument("--n-max", type=float, default=10.0)
    p_check.add_argument("--steps", type=int, default=100)
    p_check.add_argument("--tolerance", type=float, default=1e-12)

    p_dyson = sub.add_parser(
        "dyson", parents=[common], help="partial-sum convergence table for a coupling ratio"
    )
    p_dyson.add_argument(
        "--omega-ratio", type=float, required=True, metavar="Q",
        help="series parameter q = |Omega|/(2c)",
    )
    p_dyson.add_argument("--terms", type=int, default=12)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.out, args.fmt, args.strict)
        if args.command == "check":
            return cmd_check(
                args.n_min, args.n_max, args.steps, args.out, args.fmt, args.strict,
                args.tolerance,
            )
        return cmd_dyson(args.omega_ratio, args.terms, args.out, args.fmt, args.strict)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except BlipSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
