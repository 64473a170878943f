"""Command-line front end.

Verbs::

    nli-coherence evaluate --config cfg.json [--out rows.csv]
    nli-coherence compare  --config cfg.json [--out rows.csv] [--ref-method TAG] [--threads N]
    nli-coherence sweep    --config cfg.json [--out rows.csv] [--ref-method TAG] [--threads N]
    nli-coherence selftest

Configs are JSON with a versioned schema (``"schema": 1``); unknown keys
are rejected.  All unit conversions (dB/km, GBaud, dBm) happen here, at
the boundary — the library below runs in canonical units only.

Exit codes: 0 success, 1 validation error, 2 quadrature budget exhausted
in a method listed under ``required_methods``, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import closed_form, oracle
from .link import (DB_PER_NEPER, ROLLOFF_HIGH, QUAD_BUDGET, FiberSpan,
                   LinkConfig, SignalSpec, ValidationError, span_loss_db)
from .quadrature import QuadratureBudgetError, QuadratureSettings

CSV_HEADER = ["scenario", "method", "sweep_param", "sweep_value",
              "g_inc_w_per_thz", "g_cc_w_per_thz", "total_w_per_thz",
              "delta_db_vs_ref", "quad_err", "warnings"]

METHOD_TAGS = ("oracle-lozenge-exact", "oracle-square", "exact-series",
               "sinint", "siapp", "plateau", "lower-bound", "heterogeneous")

SWEEP_AXES = ("n_spans", "bandwidth", "beta2", "span_loss")

MAX_ROLLOFF = 0.3


class ConfigError(ValueError):
    """Config file problem; message names the offending field."""


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    link: LinkConfig
    signal: SignalSpec
    methods: tuple[str, ...]
    reference_method: str
    required_methods: tuple[str, ...]
    quadrature: QuadratureSettings
    sweep: SweepSpec | None
    roll_off: float | None


@dataclass(frozen=True)
class ComparisonRow:
    scenario: str
    method: str
    sweep_param: str
    sweep_value: str
    g_inc: float
    g_cc: float
    delta_db_vs_ref: float
    quad_err: float | None
    warnings: tuple[str, ...]

    @property
    def total(self) -> float:
        return self.g_inc + self.g_cc


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key {key!r}")


def _get(obj: dict, key: str, where: str, types):
    if key not in obj:
        raise ConfigError(f"{where}.{key}: missing")
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool):
        raise ConfigError(f"{where}.{key}: expected {types}, got {type(val).__name__}")
    return val


def _exactly_one(obj: dict, keys: tuple[str, ...], where: str) -> str:
    present = [k for k in keys if k in obj]
    if len(present) != 1:
        raise ConfigError(f"{where}: exactly one of {keys} required, found {present}")
    return present[0]


def _parse_span(obj: dict, where: str) -> FiberSpan:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, {"length_km", "loss_db_per_km", "loss_coeff_per_km",
                          "beta2_ps2_per_km", "gamma_per_w_km"}, where)
    loss_key = _exactly_one(obj, ("loss_db_per_km", "loss_coeff_per_km"), where)
    loss = float(_get(obj, loss_key, where, (int, float)))
    if loss_key == "loss_db_per_km":
        loss /= DB_PER_NEPER
    try:
        return FiberSpan(
            length_km=float(_get(obj, "length_km", where, (int, float))),
            loss_coeff_per_km=loss,
            beta2_ps2_per_km=float(_get(obj, "beta2_ps2_per_km", where, (int, float))),
            gamma_per_w_km=float(_get(obj, "gamma_per_w_km", where, (int, float))),
        )
    except ValidationError as exc:
        raise ConfigError(f"{where}.{exc.field}: {exc}") from exc


def _parse_signal(obj: dict) -> tuple[SignalSpec, float | None]:
    where = "signal"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, {"g0_w_per_thz", "power_w", "power_dbm",
                          "bandwidth_thz", "bandwidth_wdm_thz",
                          "bandwidth_cut_thz", "bandwidth_gbaud", "roll_off"}, where)
    bw_key = _exactly_one(obj, ("bandwidth_thz", "bandwidth_wdm_thz",
                                "bandwidth_cut_thz", "bandwidth_gbaud"), where)
    bandwidth = float(_get(obj, bw_key, where, (int, float)))
    if bw_key == "bandwidth_gbaud":
        bandwidth /= 1000.0
    lvl_key = _exactly_one(obj, ("g0_w_per_thz", "power_w", "power_dbm"), where)
    level = float(_get(obj, lvl_key, where, (int, float)))
    if lvl_key == "power_dbm":
        level = 10.0 ** (level / 10.0) * 1e-3
    if lvl_key == "g0_w_per_thz":
        g0 = level
    else:
        if bandwidth <= 0.0:
            raise ConfigError(f"{where}.{bw_key}: must be > 0")
        g0 = level / bandwidth
    roll_off = None
    if "roll_off" in obj:
        roll_off = float(_get(obj, "roll_off", where, (int, float)))
        if not (0.0 <= roll_off < 1.0):
            raise ConfigError(f"{where}.roll_off: must be in [0, 1)")
    try:
        return SignalSpec(g0_w_per_thz=g0, bandwidth_thz=bandwidth), roll_off
    except ValidationError as exc:
        raise ConfigError(f"{where}.{exc.field}: {exc}") from exc


def _parse_link(obj: dict) -> LinkConfig:
    where = "link"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, {"n_spans", "span", "spans"}, where)
    if "spans" in obj:
        if "span" in obj or "n_spans" in obj:
            raise ConfigError(f"{where}: give either span+n_spans or spans, not both")
        spans = obj["spans"]
        if not isinstance(spans, list) or not spans:
            raise ConfigError(f"{where}.spans: expected a nonempty array")
        return LinkConfig(spans=tuple(
            _parse_span(s, f"{where}.spans[{i}]") for i, s in enumerate(spans)))
    n_spans = _get(obj, "n_spans", where, int)
    if n_spans < 1:
        raise ConfigError(f"{where}.n_spans: must be >= 1")
    return LinkConfig.homogeneous(_parse_span(
        _get(obj, "span", where, dict), f"{where}.span"), n_spans)


def _parse_quadrature(obj: dict) -> QuadratureSettings:
    where = "quadrature"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, {"rel_tol", "abs_tol", "max_evals", "max_depth"}, where)
    kwargs = {}
    for key in ("rel_tol", "abs_tol"):
        if key in obj:
            kwargs[key] = float(_get(obj, key, where, (int, float)))
    for key in ("max_evals", "max_depth"):
        if key in obj:
            kwargs[key] = _get(obj, key, where, int)
    try:
        return QuadratureSettings(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_sweep(obj: dict) -> SweepSpec:
    where = "sweep"
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _reject_unknown(obj, {"axis", "values"}, where)
    axis = _get(obj, "axis", where, str)
    if axis not in SWEEP_AXES:
        raise ConfigError(f"{where}.axis: must be one of {SWEEP_AXES}, got {axis!r}")
    values = _get(obj, "values", where, list)
    if not values:
        raise ConfigError(f"{where}.values: expected a nonempty array")
    parsed = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{where}.values[{i}]: expected a number")
        if axis == "n_spans" and (not isinstance(v, int) or v < 1):
            raise ConfigError(f"{where}.values[{i}]: n_spans values must be positive integers")
        parsed.append(float(v))
    return SweepSpec(axis=axis, values=tuple(parsed))


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario file into canonical units."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    _reject_unknown(raw, {"schema", "scenario", "link", "signal", "methods",
                          "reference_method", "required_methods",
                          "quadrature", "sweep"}, "config")
    if raw.get("schema") != 1:
        raise ConfigError(f"config.schema: must be 1, got {raw.get('schema')!r}")
    scenario = _get(raw, "scenario", "config", str)
    link = _parse_link(_get(raw, "link", "config", dict))
    signal, roll_off = _parse_signal(_get(raw, "signal", "config", dict))
    methods = raw.get("methods", ["sinint"])
    if not isinstance(methods, list) or not methods:
        raise ConfigError("config.methods: expected a nonempty array of method tags")
    for m in methods:
        if m not in METHOD_TAGS:
            raise ConfigError(f"config.methods: unknown tag {m!r} (choose from {METHOD_TAGS})")
    reference = raw.get("reference_method", methods[0])
    if reference not in methods:
        raise ConfigError(f"config.reference_method: {reference!r} not in methods")
    required = raw.get("required_methods", [])
    if not isinstance(required, list):
        raise ConfigError("config.required_methods: expected an array")
    for m in required:
        if m not in methods:
            raise ConfigError(f"config.required_methods: {m!r} not in methods")
    quad = _parse_quadrature(raw.get("quadrature", {}))
    sweep = _parse_sweep(raw["sweep"]) if "sweep" in raw else None
    if sweep is not None and not link.is_homogeneous:
        raise ConfigError("config.sweep: sweeps require a homogeneous link")
    hetero_only = [m for m in methods if m != "heterogeneous"]
    if not link.is_homogeneous and hetero_only:
        raise ConfigError(
            f"config.methods: {hetero_only} require a homogeneous link; "
            "only 'heterogeneous' accepts distinct spans")
    return ScenarioConfig(scenario=scenario, link=link, signal=signal,
                          methods=tuple(methods), reference_method=reference,
                          required_methods=tuple(required), quadrature=quad,
                          sweep=sweep, roll_off=roll_off)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _apply_sweep(cfg: ScenarioConfig, axis: str, value: float):
    """One sweep point -> (link, signal).  span_loss values are total
    span loss in dB; bandwidth values are THz; beta2 in ps^2/km."""
    span = cfg.link.spans[0]
    signal = cfg.signal
    if axis == "n_spans":
        return LinkConfig.homogeneous(span, int(value)), signal
    if axis == "bandwidth":
        signal = SignalSpec(g0_w_per_thz=signal.g0_w_per_thz, bandwidth_thz=value)
        return cfg.link, signal
    if axis == "beta2":
        span = FiberSpan(length_km=span.length_km,
                         loss_coeff_per_km=span.loss_coeff_per_km,
                         beta2_ps2_per_km=value,
                         gamma_per_w_km=span.gamma_per_w_km)
    elif axis == "span_loss":
        span = FiberSpan(length_km=span.length_km,
                         loss_coeff_per_km=value / (DB_PER_NEPER * span.length_km),
                         beta2_ps2_per_km=span.beta2_ps2_per_km,
                         gamma_per_w_km=span.gamma_per_w_km)
    return LinkConfig.homogeneous(span, cfg.link.n_spans), signal


_CLOSED_TAGS = {"sinint": closed_form.CcMethod.SININT,
                "siapp": closed_form.CcMethod.SIAPP,
                "plateau": closed_form.CcMethod.PLATEAU,
                "lower-bound": closed_form.CcMethod.LOWER_BOUND}


def _evaluate_method(tag: str, link: LinkConfig, signal: SignalSpec,
                     settings: QuadratureSettings):
    """-> (g_inc, g_cc, quad_err or None, warnings tuple)."""
    if tag == "heterogeneous":
        est = closed_form.g_nli_total_heterogeneous(link, signal)
        return est.g_inc_w_per_thz, est.g_cc_w_per_thz, None, est.warnings
    span, n_s = link.spans[0], link.n_spans
    if tag in _CLOSED_TAGS:
        est = closed_form.g_nli_total(signal, span, n_s, _CLOSED_TAGS[tag])
        return est.g_inc_w_per_thz, est.g_cc_w_per_thz, None, est.warnings
    if tag == "exact-series":
        g_inc = closed_form.g_inc_closed(signal, span, n_s)
        warns = list(closed_form.span_warnings(span))
        try:
            res = closed_form.g_cc_exact_series(signal, span, n_s, settings)
        except QuadratureBudgetError as exc:
            res = exc.result
            warns.append(QUAD_BUDGET)
        return g_inc, res.value, res.error_estimate, tuple(warns)
    # 2-D oracles: split off the span-additive part via the single-span run
    shape = (oracle.DomainShape.SQUARE if tag == "oracle-square"
             else oracle.DomainShape.LOZENGE)
    model = (oracle.EfficiencyModel.LORENTZIAN if tag == "oracle-square"
             else oracle.EfficiencyModel.EXACT)
    warns = list(closed_form.span_warnings(span))
    try:
        total = oracle.g_nli_2d(signal, span, n_s, shape, model, settings)
        single = oracle.g_nli_2d(signal, span, 1, shape, model, settings)
        err = total.error_estimate + n_s * single.error_estimate
    except QuadratureBudgetError as exc:
        total = single = exc.result
        err = exc.result.error_estimate
        warns.append(QUAD_BUDGET)
        return total.value, 0.0, err, tuple(warns)
    g_inc = n_s * single.value
    return g_inc, total.value - g_inc, err, tuple(warns)


def run_compare(cfg: ScenarioConfig, threads: int = 1) -> list[ComparisonRow]:
    """One row per method per sweep point, sweep-major, method order as
    configured.  Point evaluation may be threaded; assembly is ordered."""
    if cfg.sweep is None:
        points = [("", "", cfg.link, cfg.signal)]
    else:
        points = []
        for v in cfg.sweep.values:
            link, signal = _apply_sweep(cfg, cfg.sweep.axis, v)
            label = str(int(v)) if cfg.sweep.axis == "n_spans" else str(v)
            points.append((cfg.sweep.axis, label, link, signal))

    extra = (ROLLOFF_HIGH,) if (cfg.roll_off is not None
                                and cfg.roll_off > MAX_ROLLOFF) else ()

    def eval_point(point):
        _, _, link, signal = point
        return [_evaluate_method(tag, link, signal, cfg.quadrature)
                for tag in cfg.methods]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_point = list(pool.map(eval_point, points))
    else:
        per_point = [eval_point(p) for p in points]

    rows = []
    for (param, label, _, _), results in zip(points, per_point):
        ref_idx = cfg.methods.index(cfg.reference_method)
        ref_total = results[ref_idx][0] + results[ref_idx][1]
        for tag, (g_inc, g_cc, err, warns) in zip(cfg.methods, results):
            total = g_inc + g_cc
            if tag == cfg.reference_method:
                delta = 0.0
            else:
                delta = 10.0 * math.log10(total / ref_total)
            rows.append(ComparisonRow(
                scenario=cfg.scenario, method=tag, sweep_param=param,
                sweep_value=label, g_inc=g_inc, g_cc=g_cc,
                delta_db_vs_ref=delta, quad_err=err,
                warnings=tuple(warns) + extra))
    return rows


def emit_csv(rows: list[ComparisonRow], stream) -> None:
    """RFC-4180 output with the fixed header; floats in shortest
    round-trip decimal form."""
    if not rows:
        raise ValueError("no rows to emit")
    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.scenario, r.method, r.sweep_param, r.sweep_value,
            repr(r.g_inc), repr(r.g_cc), repr(r.total),
            repr(r.delta_db_vs_ref),
            "" if r.quad_err is None else repr(r.quad_err),
            ";".join(r.warnings),
        ])


def _scenario_echo(cfg: ScenarioConfig, out) -> None:
    span = cfg.link.spans[0]
    xi = (math.pi**2 * span.beta2_ps2_per_km * span.length_km
          * cfg.signal.bandwidth_thz**2)
    print(f"scenario {cfg.scenario}: {cfg.link.n_spans} span(s), "
          f"span loss {span_loss_db(span):.2f} dB, "
          f"B = {cfg.signal.bandwidth_thz * 1000:.3f} GHz, "
          f"G0 = {cfg.signal.g0_w_per_thz:.6g} W/THz", file=out)
    print(f"  dispersion strength pi^2*beta2*Ls*B^2 = {xi:.4g} "
          f"({'plateau' if xi >= math.pi / 2 else 'pre-plateau'} regime)", file=out)


def _write_rows(rows, out_path: str | None) -> None:
    if out_path is None:
        emit_csv(rows, sys.stdout)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        emit_csv(rows, fh)


def _selftest() -> int:
    """Cheap built-in invariant checks, mirroring the test suite."""
    failures = 0

    def check(name, ok):
        nonlocal failures
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}")
        failures += 0 if ok else 1

    span = FiberSpan(length_km=100.0, loss_coeff_per_km=0.2 / DB_PER_NEPER,
                     beta2_ps2_per_km=21.0, gamma_per_w_km=1.3)
    signal = SignalSpec(g0_w_per_thz=0.03125, bandwidth_thz=0.032)
    settings = QuadratureSettings(rel_tol=1e-9)

    p = closed_form.Q1Params(b=0.25, q=0.016, h=40.0, n_spans=5)
    qc = closed_form.q1_closed(p)
    qq = oracle.q1_quadrature(p.b, p.q, p.h, p.n_spans, settings).value
    check("inner integral closed form vs quadrature", abs(qc - qq) <= 1e-8 * abs(qq))

    sq = oracle.g_nli_2d(signal, span, 3, oracle.DomainShape.SQUARE,
                         oracle.EfficiencyModel.LORENTZIAN, settings).value
    total = (closed_form.g_inc_closed(signal, span, 3)
             + closed_form.g_cc_exact_series(signal, span, 3, settings).value)
    check("incoherent + coherent parts vs 2-D quadrature",
          abs(total - sq) <= 1e-6 * abs(sq))

    gs = closed_form.g_cc_sinint(signal, span, 5)
    gq = oracle.g_cc_sinc_quadrature(signal, span, 5, settings).value
    check("sine-integral form vs quadrature", abs(gs - gq) <= 1e-8 * abs(gq))

    link = LinkConfig.homogeneous(span, 6)
    het = closed_form.g_cc_heterogeneous(link, signal)
    lb = closed_form.g_cc_lower_bound(signal, span, 6)
    check("homogeneous reduction of per-span bound", abs(het - lb) <= 1e-14 * abs(lb))

    print(f"selftest: {4 - failures}/4 passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nli-coherence",
        description="NLI accumulation estimators for multi-span fiber links")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("evaluate", "compare", "sweep"):
        sp = sub.add_parser(verb)
        sp.add_argument("--config", required=True, help="JSON scenario file")
        sp.add_argument("--out", default=None, help="CSV output path (default stdout)")
        sp.add_argument("--ref-method", default=None,
                        help="override the reference method tag")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweep points")
    sub.add_parser("selftest")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "selftest":
        return _selftest()
    try:
        cfg = load_config(args.config)
        if args.ref_method is not None:
            if args.ref_method not in cfg.methods:
                raise ConfigError(f"--ref-method: {args.ref_method!r} not in config methods")
            cfg = ScenarioConfig(scenario=cfg.scenario, link=cfg.link,
                                 signal=cfg.signal, methods=cfg.methods,
                                 reference_method=args.ref_method,
                                 required_methods=cfg.required_methods,
                                 quadrature=cfg.quadrature, sweep=cfg.sweep,
                                 roll_off=cfg.roll_off)
        if args.verb == "sweep" and cfg.sweep is None:
            raise ConfigError("config.sweep: required by the sweep verb")
        if args.verb == "evaluate":
            cfg = ScenarioConfig(scenario=cfg.scenario, link=cfg.link,
                                 signal=cfg.signal, methods=cfg.methods[:1],
                                 reference_method=cfg.methods[0],
                                 required_methods=tuple(
                                     m for m in cfg.required_methods
                                     if m == cfg.methods[0]),
                                 quadrature=cfg.quadrature, sweep=None,
                                 roll_off=cfg.roll_off)
        if args.threads < 1:
            raise ConfigError("--threads: must be >= 1")
    except (ConfigError, ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    _scenario_echo(cfg, sys.stderr)
    try:
        rows = run_compare(cfg, threads=args.threads)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        _write_rows(rows, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.out is not None:
        print(f"wrote {len(rows)} row(s) to {args.out}", file=sys.stderr)

    budget_hit = {r.method for r in rows if QUAD_BUDGET in r.warnings}
    if budget_hit & set(cfg.required_methods):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
