"""Scenario execution: compute curves/tables, emit CSV + SVG + manifest.

Concurrency: per-alpha curves and sweep rows are computed in a thread
pool, but results are collected by submission index and files are
written serially afterwards, so emitted bytes never depend on the
thread count or scheduling order.
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .circuit import (CircuitParams, ModelParams, charging_energy,
                      circuit_from_kelvin, coherent_flux_rms, derive_params,
                      effective_capacitance, flux_zero_point,
                      gate_charge_from_voltage, josephson_energy,
                      model_params, oscillator_frequency, series_capacitance,
                      validate_regime)
from .config import CONVENTIONS, RunConfig, canonical_config, with_threads
from .constants import E_CHARGE, constants_record
from .decoherence import (decoherence_approx, decoherence_exact,
                          decoherence_fock_oracle,
                          decoherence_gaussian_oracle, jump_metrics)
from .emit import (emit_csv, emit_svg, format_float, sha256_file,
                   sha256_text, write_manifest)
from .hamiltonians import schrieffer_wolff_check
from .observables import current_analytic, current_numeric, envelope_metrics
from .version import VERSION

# largest |alpha| still routed through the truncated-Fock oracle
FOCK_ALPHA_MAX = 5.0


def default_out_dir(cfg: RunConfig, cli_out=None):
    """--out flag > run.out in the config > LCDECO_OUT env > ./out"""
    return cli_out or cfg.out or os.environ.get("LCDECO_OUT") or "out"


def resolve_model(cfg: RunConfig):
    """RunConfig → (dimensionless ModelParams, time_scale, current_scale).

    Internally everything runs with ω = 1.  In SI mode the returned
    scales convert a dimensionless time τ to seconds (t = τ·time_scale)
    and a dimensionless current to amperes (I_SI = current_scale·I).
    """
    if cfg.mode == "dimensionless":
        return model_params(1.0, cfg.omega_a, cfg.g, cfg.theta), 1.0, 1.0
    m_si = derive_params(_circuit(cfg), cfg.device.convention)
    m = model_params(1.0, m_si.omega_a / m_si.omega, m_si.g / m_si.omega,
                     m_si.theta)
    return m, 1.0 / m_si.omega, E_CHARGE * m_si.omega


def _circuit(cfg: RunConfig) -> CircuitParams:
    d = cfg.device
    n_g = d.n_g
    if d.v_g is not None:
        n_g = gate_charge_from_voltage(d.c_g, d.v_g)
    return circuit_from_kelvin(d.c_j, d.c_g, d.l, d.e_j0_kelvin,
                               n_g=n_g, phi_x=d.phi_x)


def config_digest(cfg: RunConfig):
    """Digest of the resolved configuration, thread-count independent
    (so reruns with --threads N stay byte-identical)."""
    return sha256_text(canonical_config(with_threads(cfg, 1)))


def _meta(cfg, m: ModelParams, extra=()):
    rows = [("tool", "lcdeco " + VERSION),
            ("scenario", cfg.scenario),
            ("mode", cfg.mode),
            ("config_sha256", config_digest(cfg)),
            ("omega", m.omega), ("omega_a", m.omega_a), ("g", m.g),
            ("Omega", m.Omega), ("gamma", m.gamma)]
    rows.extend(extra)
    return rows


def _time_grid(cfg, m: ModelParams, default_periods, time_scale):
    """Uniform grid in dimensionless time; t_max config values are in
    output units (seconds in SI mode)."""
    if cfg.t_max is not None:
        t_max = cfg.t_max / time_scale
    else:
        t_max = default_periods * math.pi / m.Omega
    return np.linspace(0.0, t_max, cfg.samples)


def _alpha_tag(alpha):
    return "%g" % alpha


def _map_indexed(fn, items, threads):
    """fn over items, preserving order; thread pool only when needed."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, item) for item in items]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# scenarios

def _run_fig2(cfg, m, out_dir, threads, time_scale, _current_scale):
    ts = _time_grid(cfg, m, 1.0, time_scale)

    def one(alpha):
        d_exact = decoherence_exact(m, alpha, ts)
        d_approx = decoherence_approx(m, alpha, ts)
        d_gauss = decoherence_gaussian_oracle(m, alpha, ts)
        d_fock = (decoherence_fock_oracle(m, alpha, ts, cfg.dim)
                  if abs(alpha) <= FOCK_ALPHA_MAX else None)
        return d_exact, d_approx, d_gauss, d_fock

    results = _map_indexed(one, cfg.alpha, threads)
    files = []
    overlay = []
    labels = []
    echo = {"d_min": {}}
    for alpha, (d_exact, d_approx, d_gauss, d_fock) in zip(cfg.alpha,
                                                           results):
        jm = jump_metrics(m, alpha)
        echo["d_min"][_alpha_tag(alpha)] = jm.d_min
        columns = ["t", "D_exact", "D_approx", "D_gaussian"]
        data = [ts * time_scale, d_exact, d_approx, d_gauss]
        if d_fock is not None:
            columns.append("D_fock")
            data.append(d_fock)
        meta = _meta(cfg, m, [("alpha", alpha), ("dim", cfg.dim),
                              ("samples", cfg.samples),
                              ("d_min", jm.d_min),
                              ("t_unit", "s" if cfg.mode == "si" else
                               "1/omega")])
        path = os.path.join(out_dir, "fig2_alpha%s.csv" % _alpha_tag(alpha))
        emit_csv(path, columns, list(zip(*data)), meta=meta)
        files.append(path)
        overlay.append(d_exact)
        labels.append("alpha=%s" % _alpha_tag(alpha))
    svg = os.path.join(out_dir, "fig2_overlay.svg")
    emit_svg(svg, ts * time_scale, overlay, labels,
             title="branch-overlap decoherence factor",
             xlabel="time [%s]" % ("s" if cfg.mode == "si" else "1/omega"),
             ylabel="D(t)")
    files.append(svg)
    return files, [], echo


def _run_fig4(cfg, m, out_dir, threads, time_scale, current_scale):
    alpha = cfg.alpha[0]
    ts = _time_grid(cfg, m, 8.0, time_scale)
    i_analytic = current_analytic(m, alpha, ts)
    m0 = model_params(m.omega, m.omega_a, 0.0, m.theta)
    i_uncoupled = current_analytic(m0, alpha, ts)
    _, i_numeric = current_numeric(m, alpha, ts, cfg.dim,
                                   c0=cfg.c0, c1=cfg.c1)
    echo = {}
    for name, trace in (("analytic", i_analytic), ("numeric", i_numeric)):
        try:
            em = envelope_metrics(ts, trace)
        except ValueError:
            continue    # envelope analysis needs carrier >> modulation
        if not math.isfinite(em.modulation_period):
            continue    # flat envelope: no modulation to report
        echo["envelope_" + name] = {
            "carrier_period": em.carrier_period * time_scale,
            "modulation_period": em.modulation_period * time_scale,
            "modulation_depth": em.modulation_depth,
            "envelope_width_ratio": em.envelope_width_ratio,
        }
    unit = "A" if cfg.mode == "si" else "e*omega"
    meta = _meta(cfg, m, [("alpha", alpha), ("dim", cfg.dim),
                          ("samples", cfg.samples),
                          ("current_unit", unit),
                          ("t_unit", "s" if cfg.mode == "si" else
                           "1/omega")])
    path = os.path.join(out_dir, "fig4.csv")
    emit_csv(path, ["t", "I_analytic", "I_numeric", "I_uncoupled"],
             list(zip(ts * time_scale, i_analytic * current_scale,
                      i_numeric * current_scale,
                      i_uncoupled * current_scale)), meta=meta)
    svg = os.path.join(out_dir, "fig4.svg")
    emit_svg(svg, ts * time_scale,
             [i_analytic * current_scale, i_numeric * current_scale,
              i_uncoupled * current_scale],
             ["analytic", "numeric", "uncoupled"],
             title="probe current, alpha=%s" % _alpha_tag(alpha),
             xlabel="time [%s]" % ("s" if cfg.mode == "si" else "1/omega"),
             ylabel="I [%s]" % unit)
    return [path, svg], [], echo


def _run_oracle_check(cfg, m, out_dir, threads, time_scale, _cs):
    ts = _time_grid(cfg, m, 2.0, time_scale)

    def one(alpha):
        d_exact = decoherence_exact(m, alpha, ts)
        d_gauss = decoherence_gaussian_oracle(m, alpha, ts)
        rows = [("gaussian_vs_exact", alpha,
                 float(np.max(np.abs(d_gauss - d_exact))), 1e-8)]
        if abs(alpha) <= FOCK_ALPHA_MAX:
            d_fock = decoherence_fock_oracle(m, alpha, ts, cfg.dim)
            rows.insert(0, ("fock_vs_exact", alpha,
                            float(np.max(np.abs(d_fock - d_exact))), 1e-6))
            rows.insert(1, ("gaussian_vs_fock", alpha,
                            float(np.max(np.abs(d_gauss - d_fock))), 1e-8))
        return rows

    results = _map_indexed(one, cfg.alpha, threads)
    period = math.pi / m.Omega
    checks = [("exact_revival", cfg.alpha[0],
               abs(decoherence_exact(m, cfg.alpha[0], period) - 1.0), 1e-12)]
    for rows in results:
        checks.extend(rows)
    table = [(name, alpha, value, limit,
              "PASS" if value <= limit else "FAIL")
             for name, alpha, value, limit in checks]
    meta = _meta(cfg, m, [("dim", cfg.dim), ("samples", cfg.samples)])
    path = os.path.join(out_dir, "oracle_check.csv")
    emit_csv(path, ["check", "alpha", "max_abs_diff", "limit", "status"],
             table, meta=meta)
    failed = [row for row in table if row[4] == "FAIL"]
    return [path], table, {"failed": len(failed)}


def _run_sw_check(cfg, m, out_dir, threads, time_scale, _cs):
    reports = _map_indexed(
        lambda mm: schrieffer_wolff_check(mm, dim=cfg.dim),
        [m, model_params(m.omega, m.omega_a, 2.0 * m.g, m.theta)],
        threads)
    base, doubled = reports
    fit_rows = []
    for rep in reports:
        for b in rep.branches:
            fit_rows.append((rep.gamma, b.k, b.omega_fit, b.lam_fit,
                             b.omega_ref, b.lam_ref, b.omega_dev, b.lam_dev))
    fit_path = os.path.join(out_dir, "sw_fit.csv")
    emit_csv(fit_path,
             ["gamma", "branch", "omega_fit", "lam_fit", "omega_ref",
              "lam_ref", "omega_dev", "lam_dev"],
             fit_rows, meta=_meta(cfg, m, [("dim", cfg.dim)]))
    table = [
        ("omega_dev_monotone", base.gamma,
         base.max_omega_dev - doubled.max_omega_dev, 0.0),
        ("lam_dev_monotone", base.gamma,
         base.max_lam_dev - doubled.max_lam_dev, 0.0),
    ]
    if base.gamma <= 0.0501:
        table.append(("omega_dev_tol", base.gamma, base.max_omega_dev, 0.10))
        table.append(("lam_dev_tol", base.gamma, base.max_lam_dev, 0.15))
    table = [(name, gamma, value, limit,
              "PASS" if value <= limit else "FAIL")
             for name, gamma, value, limit in table]
    path = os.path.join(out_dir, "sw_check.csv")
    emit_csv(path, ["check", "gamma", "value", "limit", "status"], table,
             meta=_meta(cfg, m, [("dim", cfg.dim)]))
    return [fit_path, path], table, {
        "max_omega_dev": base.max_omega_dev,
        "max_lam_dev": base.max_lam_dev,
        "max_omega_dev_2gamma": doubled.max_omega_dev,
        "max_lam_dev_2gamma": doubled.max_lam_dev}


def _run_sweep(cfg, m, out_dir, threads, time_scale, _cs):
    def one(alpha):
        jm = jump_metrics(m, alpha)
        d_gauss_min = float(decoherence_gaussian_oracle(m, alpha, jm.t_min))
        d_approx_min = float(decoherence_approx(m, alpha, jm.t_min))
        return (alpha, m.Omega / time_scale if cfg.mode == "si" else m.Omega,
                jm.period * time_scale, jm.t_min * time_scale,
                jm.d_min, d_approx_min, d_gauss_min)

    rows = _map_indexed(one, cfg.alpha, threads)
    path = os.path.join(out_dir, "sweep.csv")
    emit_csv(path,
             ["alpha", "Omega", "period", "t_min", "d_min_exact",
              "d_min_approx", "d_min_gaussian"],
             rows, meta=_meta(cfg, m))
    return [path], [], {"rows": len(rows)}


def derive_report(cfg):
    """Parameter-derivation table for both capacitance conventions.

    Returns (report text, csv rows, params echo); pure — no files.
    """
    circ = _circuit(cfg)
    alpha = cfg.alpha[0] if cfg.alpha else 2.0
    lines = ["circuit inputs:"]
    for label, value, unit in (
            ("C_J", circ.c_j, "F"), ("C_g", circ.c_g, "F"),
            ("L", circ.l, "H"), ("E_J0", circ.e_j0, "J"),
            ("n_g", circ.n_g, ""), ("phi_x", circ.phi_x, "Wb")):
        lines.append("  %-10s %-24s %s" % (label, format_float(value), unit))
    lines.append("  %-10s %-24s %s" % ("E_C", format_float(
        charging_energy(circ)), "J"))
    lines.append("  %-10s %-24s %s" % ("E_J(phi_x)", format_float(
        josephson_energy(circ)), "J"))
    lines.append("  %-10s %-24s %s" % ("phi_zpf", format_float(
        flux_zero_point(circ)), "Wb"))
    lines.append("")
    csv_rows = []
    echo = {}
    for convention in CONVENTIONS:
        m = derive_params(circ, convention)
        report = validate_regime(
            m, alpha, phi_rms_estimate=coherent_flux_rms(circ, alpha),
            cap_ratio=series_capacitance(circ) / circ.c_j)
        lines.append("derived model parameters [%s: C_eff = %s F]:"
                     % (convention,
                        format_float(effective_capacitance(circ,
                                                           convention))))
        for key, value in m.as_dict().items():
            lines.append("  %-12s %s" % (key, format_float(value)))
            csv_rows.append((convention, key, value))
        lines.append("  regime: gamma %s (%.4g)%s"
                     % ("PASS" if report.gamma_pass else "FAIL",
                        report.gamma,
                        " [warn: above 0.1]" if report.gamma_warn else ""))
        lines.append("  regime: flux expansion parameter %s (%.4g, "
                     "alpha=%s)" % ("PASS" if report.coupling_pass
                                    else "FAIL", report.coupling_param,
                                    _alpha_tag(alpha)))
        for note in report.notes:
            lines.append("  note: %s" % note)
        csv_rows.append((convention, "gamma_ok", float(report.gamma_pass)))
        csv_rows.append((convention, "flux_param",
                         report.coupling_param))
        echo[convention] = m.as_dict()
        lines.append("")
    lines.append("note: the two conventions disagree on omega by "
                 "sqrt(C_J/(C_series)); both are printed so the choice "
                 "stays explicit.")
    return "\n".join(lines) + "\n", csv_rows, echo


def _run_derive(cfg, out_dir):
    text, csv_rows, echo = derive_report(cfg)
    report_path = os.path.join(out_dir, "derive_report.txt")
    with open(report_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    csv_path = os.path.join(out_dir, "derived.csv")
    emit_csv(csv_path, ["convention", "quantity", "value"], csv_rows,
             meta=[("tool", "lcdeco " + VERSION),
                   ("scenario", cfg.scenario),
                   ("config_sha256", config_digest(cfg))])
    return [report_path, csv_path], [], echo, text


# ---------------------------------------------------------------------------
# entry

_SCENARIO_FNS = {
    "fig2": _run_fig2,
    "fig4": _run_fig4,
    "oracle-check": _run_oracle_check,
    "sw-check": _run_sw_check,
    "sweep": _run_sweep,
}


def run_scenario(cfg: RunConfig, out_dir=None, threads=None,
                 config_text=None):
    """Execute one scenario; returns (manifest dict, derive-report text).

    The manifest is also written to <out>/manifest.json.  Check failures
    do not raise — they are recorded with status FAIL (the CLI maps them
    to its exit code).
    """
    out = default_out_dir(cfg, out_dir)
    os.makedirs(out, exist_ok=True)
    nthreads = cfg.threads if threads is None else int(threads)
    started = time.perf_counter()
    report_text = None
    try:
        if cfg.scenario == "derive-params":
            files, checks, echo, report_text = _run_derive(cfg, out)
            params_echo = echo
        else:
            m, time_scale, current_scale = resolve_model(cfg)
            fn = _SCENARIO_FNS[cfg.scenario]
            files, checks, params_echo = fn(cfg, m, out, nthreads,
                                            time_scale, current_scale)
            params_echo = {"model": m.as_dict(), **params_echo}
    except Exception as exc:
        write_manifest(os.path.join(out, "manifest.json"), {
            "tool": "lcdeco", "version": VERSION,
            "scenario": cfg.scenario, "mode": cfg.mode,
            "config_sha256": config_digest(cfg),
            "error": "%s: %s" % (type(exc).__name__, exc),
        })
        raise
    manifest = {
        "tool": "lcdeco",
        "version": VERSION,
        "scenario": cfg.scenario,
        "mode": cfg.mode,
        "config_sha256": config_digest(cfg),
        "config_file_sha256": (sha256_text(config_text)
                               if config_text is not None else None),
        "constants": constants_record(),
        "params": params_echo,
        "checks": [{"name": row[0], "at": row[1], "value": row[2],
                    "limit": row[3], "status": row[4]} for row in checks],
        "files": {os.path.basename(p): {"sha256": sha256_file(p),
                                        "bytes": os.path.getsize(p)}
                  for p in files},
        "wall_time_s": time.perf_counter() - started,
    }
    write_manifest(os.path.join(out, "manifest.json"), manifest)
    return manifest, report_text


def failed_checks(manifest):
    return [c for c in manifest["checks"] if c["status"] == "FAIL"]


# built-in defaults for `lcdeco check`
BUILTIN_ORACLE_CONFIG = """\
scenario = oracle-check
[model]
omega_a = 1.8
g = 0.05
alpha = 2, 30
dim = 64
samples = 200
"""

BUILTIN_SW_CONFIG = """\
scenario = sw-check
[model]
omega_a = 10.0
gamma = 0.05
dim = 64
"""
