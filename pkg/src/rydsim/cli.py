"""
Command-line front end.

    rydsim <subcommand> --config scenario.json [--out prefix] [--points n]
                        [--threads n] [--quiet]

Subcommands: eit-scan, eia-scan, doppler-scan, liouvillian-spectrum,
timescale, fluorescence, fluorescence-t, estimate-mw, selftest.

The config is one strict JSON document. Every ``*_MHz`` field is a linear
frequency nu in MHz and is converted to ``2 pi nu`` rad/us on load. Output is
a CSV file whose ``#`` header carries the format version, the resolved
config as a single JSON line and the column names. Exit status: 0 success,
2 configuration error, 3 numerical error.
"""

import argparse
import copy
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import analytics, doppler, fluorescence, spectra, spectral, steadystate
from .errors import ConfigError, RydsimError
from .model import AtomParams, DriveParams, build_liouvillian, mhz, to_mhz

FORMAT_VERSION = "rydsim-csv/1"
SUBCOMMANDS = ("eit-scan", "eia-scan", "doppler-scan", "liouvillian-spectrum",
               "timescale", "fluorescence", "fluorescence-t", "estimate-mw", "selftest")

# block -> {key: default}; None marks a required key
SCHEMA = {
    "atom": {"gamma2_MHz": None, "gamma3_MHz": 0.0, "gamma4_MHz": 0.0},
    "drive": {"omega_p_MHz": 0.0, "omega_c_MHz": 0.0, "omega_m_MHz": 0.0,
              "delta2_MHz": 0.0, "delta3_MHz": 0.0, "delta_m_MHz": 0.0},
    "scan": {"delta_min_MHz": -1.0, "delta_max_MHz": 1.0, "points": 2001,
             "method": "full", "sweep": "two_photon"},
    "doppler": {"enabled": True, "T_K": 300.0, "mass_amu": 88.0,
                "lambda_p_nm": 689.0, "lambda_c_nm": 319.0, "quad_order": 64},
    "fluorescence": {"omega_min_MHz": None, "omega_max_MHz": None, "points": 4001,
                     "time_us": None},
    "timescale": {"parameter": "omega_p", "start_MHz": 0.001, "stop_MHz": 1.0,
                  "points": 50, "log": True},
    "estimate": {"mode": "eit_dips", "correction": False, "prominence_fraction": 0.05},
    "output": {"path": None, "format": "csv"},
}
REQUIRED_BLOCKS = ("atom",)
OPTIONAL_NONE = {("fluorescence", "omega_min_MHz"), ("fluorescence", "omega_max_MHz"),
                 ("fluorescence", "time_us"), ("output", "path")}


# ---------------------------------------------------------------- config

def _number(block, key, value, minimum=None, integer=False):
    where = f"{block}.{key}"
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    if integer and int(value) != value:
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {value!r}")
    return int(value) if integer else float(value)


def resolve_config(raw):
    """Validate a parsed JSON document and fill defaults; returns a new dict."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(raw) - set(SCHEMA))
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")
    for block in REQUIRED_BLOCKS:
        if block not in raw:
            raise ConfigError(f"missing required block '{block}'")
    cfg = {}
    for block, spec in SCHEMA.items():
        given = raw.get(block, {})
        if not isinstance(given, dict):
            raise ConfigError(f"{block}: expected an object")
        bad = sorted(set(given) - set(spec))
        if bad:
            raise ConfigError(f"{block}: unknown key(s): {', '.join(bad)}")
        out = {}
        for key, default in spec.items():
            if key in given:
                out[key] = given[key]
            elif default is None and (block, key) not in OPTIONAL_NONE:
                raise ConfigError(f"missing required key '{block}.{key}'")
            else:
                out[key] = default
        cfg[block] = out

    for key in SCHEMA["atom"]:
        cfg["atom"][key] = _number("atom", key, cfg["atom"][key], minimum=0)
    for key in SCHEMA["drive"]:
        lo = 0 if key.startswith("omega") else None
        cfg["drive"][key] = _number("drive", key, cfg["drive"][key], minimum=lo)
    s = cfg["scan"]
    s["delta_min_MHz"] = _number("scan", "delta_min_MHz", s["delta_min_MHz"])
    s["delta_max_MHz"] = _number("scan", "delta_max_MHz", s["delta_max_MHz"])
    s["points"] = _number("scan", "points", s["points"], minimum=3, integer=True)
    if s["delta_max_MHz"] <= s["delta_min_MHz"]:
        raise ConfigError("scan.delta_max_MHz must exceed scan.delta_min_MHz")
    if s["method"] not in spectra.METHODS:
        raise ConfigError(f"scan.method: expected one of {spectra.METHODS}, got {s['method']!r}")
    if s["sweep"] not in spectra.SWEEPS:
        raise ConfigError(f"scan.sweep: expected one of {spectra.SWEEPS}, got {s['sweep']!r}")
    d = cfg["doppler"]
    if not isinstance(d["enabled"], bool):
        raise ConfigError("doppler.enabled: expected true or false")
    d["T_K"] = _number("doppler", "T_K", d["T_K"], minimum=0)
    for key in ("mass_amu", "lambda_p_nm", "lambda_c_nm"):
        d[key] = _number("doppler", key, d[key])
        if d[key] <= 0:
            raise ConfigError(f"doppler.{key}: must be > 0")
    d["quad_order"] = _number("doppler", "quad_order", d["quad_order"], minimum=8, integer=True)
    f = cfg["fluorescence"]
    for key in ("omega_min_MHz", "omega_max_MHz", "time_us"):
        if f[key] is not None:
            f[key] = _number("fluorescence", key, f[key], minimum=0 if key == "time_us" else None)
    if (f["omega_min_MHz"] is None) != (f["omega_max_MHz"] is None):
        raise ConfigError("fluorescence: give both omega_min_MHz and omega_max_MHz or neither")
    if f["omega_min_MHz"] is not None and f["omega_max_MHz"] <= f["omega_min_MHz"]:
        raise ConfigError("fluorescence.omega_max_MHz must exceed omega_min_MHz")
    f["points"] = _number("fluorescence", "points", f["points"], minimum=3, integer=True)
    t = cfg["timescale"]
    if t["parameter"] not in ("gamma2", "gamma3", "gamma4", "omega_p", "omega_c",
                              "omega_m", "delta2", "delta3", "delta_m"):
        raise ConfigError(f"timescale.parameter: unknown parameter {t['parameter']!r}")
    t["start_MHz"] = _number("timescale", "start_MHz", t["start_MHz"])
    t["stop_MHz"] = _number("timescale", "stop_MHz", t["stop_MHz"])
    t["points"] = _number("timescale", "points", t["points"], minimum=1, integer=True)
    if not isinstance(t["log"], bool):
        raise ConfigError("timescale.log: expected true or false")
    if t["log"] and (t["start_MHz"] <= 0 or t["stop_MHz"] <= 0):
        raise ConfigError("timescale: a log sweep needs positive start_MHz and stop_MHz")
    e = cfg["estimate"]
    if e["mode"] not in ("eit_dips", "eia_peaks"):
        raise ConfigError(f"estimate.mode: expected 'eit_dips' or 'eia_peaks', got {e['mode']!r}")
    if not isinstance(e["correction"], bool):
        raise ConfigError("estimate.correction: expected true or false")
    e["prominence_fraction"] = _number("estimate", "prominence_fraction", e["prominence_fraction"])
    if not 0 < e["prominence_fraction"] < 1:
        raise ConfigError("estimate.prominence_fraction must lie in (0, 1)")
    if cfg["output"]["format"] != "csv":
        raise ConfigError("output.format: only 'csv' is supported")
    if cfg["output"]["path"] is not None and not isinstance(cfg["output"]["path"], str):
        raise ConfigError("output.path: expected a string")

    # build the physical objects once so their invariants are checked on load
    atom_params(cfg)
    drive_params(cfg)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}") from err
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: "
                          f"{err.msg}") from err
    return resolve_config(raw)


def atom_params(cfg):
    a = cfg["atom"]
    return AtomParams(mhz(a["gamma2_MHz"]), mhz(a["gamma3_MHz"]), mhz(a["gamma4_MHz"]))


def drive_params(cfg):
    d = cfg["drive"]
    return DriveParams(*(mhz(d[k]) for k in ("omega_p_MHz", "omega_c_MHz", "omega_m_MHz",
                                             "delta2_MHz", "delta3_MHz", "delta_m_MHz")))


def scan_grid(cfg):
    s = cfg["scan"]
    return spectra.ScanGrid(mhz(s["delta_min_MHz"]), mhz(s["delta_max_MHz"]), s["points"])


def doppler_params(cfg):
    d = cfg["doppler"]
    return doppler.DopplerParams(d["T_K"] if d["enabled"] else 0.0, d["mass_amu"],
                                 d["lambda_p_nm"], d["lambda_c_nm"], d["quad_order"])


def omega_grid(cfg, drive):
    f = cfg["fluorescence"]
    if f["omega_min_MHz"] is None:
        return fluorescence.default_omega_grid(drive, f["points"])
    return np.linspace(mhz(f["omega_min_MHz"]), mhz(f["omega_max_MHz"]), f["points"])


# ---------------------------------------------------------------- output

def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def render_csv(cfg, columns, rows, meta=None):
    """CSV text: version line, config line, optional metadata, column names, rows."""
    buf = io.StringIO()
    buf.write(f"# {FORMAT_VERSION}\n")
    echo = copy.deepcopy(cfg)
    echo["output"].pop("path", None)
    buf.write("# config: " + json.dumps(echo, sort_keys=True, separators=(",", ":")) + "\n")
    buf.write("# units: *_MHz values are linear frequencies nu; internally omega = 2*pi*nu rad/us\n")
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".rydsim-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv_config(path):
    """Resolved config echoed in the header of an output file."""
    with open(path, encoding="utf-8") as fh:
        fh.readline()
        line = fh.readline()
    if not line.startswith("# config: "):
        raise ConfigError(f"{path} has no config header line")
    return json.loads(line[len("# config: "):])


# ---------------------------------------------------------------- scenarios

def _scan_rows(result):
    return [(to_mhz(d), c.real, c.imag, a)
            for d, c, a in zip(result.delta, result.coherence, result.absorption)]


SCAN_COLUMNS = ["delta_MHz", "re_coherence", "im_coherence", "absorption"]


def run_scan(cfg, kind, threads=1):
    atom, drive, grid = atom_params(cfg), drive_params(cfg), scan_grid(cfg)
    method = cfg["scan"]["method"]
    if kind == "eia-scan" and drive.delta3 == 0:
        raise ConfigError("eia-scan needs drive.delta3_MHz != 0 (far-detuned intermediate level)")
    if kind == "doppler-scan":
        if method == "eia_effective":
            raise ConfigError("doppler-scan supports scan.method 'full' or 'perturbative'")
        result = doppler.doppler_average_scan(atom, drive, grid, method, doppler_params(cfg),
                                              workers=threads)
    else:
        result = spectra.scan_absorption(atom, drive, grid, method, cfg["scan"]["sweep"])
    return SCAN_COLUMNS, _scan_rows(result), {"sigma": result.sigma, "method": method}


def run_liouvillian_spectrum(cfg):
    spec = spectral.decompose(build_liouvillian(atom_params(cfg), drive_params(cfg)))
    rows = [(k + 1, to_mhz(lam.real), to_mhz(lam.imag)) for k, lam in enumerate(spec.eigenvalues)]
    return ["k", "re_lambda_MHz", "im_lambda_MHz"], rows, {}


def run_timescale(cfg):
    t = cfg["timescale"]
    space = np.geomspace if t["log"] else np.linspace
    values = space(t["start_MHz"], t["stop_MHz"], t["points"])
    taus = steadystate.relaxation_time_scan(atom_params(cfg), drive_params(cfg),
                                            t["parameter"], mhz(values))
    return (["swept_param_value", "tau_us"], list(zip(values, taus)),
            {"swept_param": t["parameter"] + "_MHz"})


def run_fluorescence(cfg, timed):
    atom, drive = atom_params(cfg), drive_params(cfg)
    grid = omega_grid(cfg, drive)
    if timed:
        t = cfg["fluorescence"]["time_us"]
        if t is None:
            raise ConfigError("fluorescence-t needs fluorescence.time_us")
        result = fluorescence.time_dependent_spectrum(atom, drive, steadystate.ground_state(), t, grid)
    else:
        result = fluorescence.stationary_spectrum(atom, drive, grid)
    meta = {"time_us": result.t, "coherent_weight": result.coherent_weight,
            "excited_population": result.excited_population,
            "S_units": "per rad/us; int S domega / pi + coherent_weight = C(0)"}
    return ["omega_MHz", "S"], [(to_mhz(w), s) for w, s in zip(result.omega, result.S)], meta


def run_estimate(cfg):
    atom, drive, grid = atom_params(cfg), drive_params(cfg), scan_grid(cfg)
    e = cfg["estimate"]
    result = spectra.scan_absorption(atom, drive, grid, cfg["scan"]["method"], cfg["scan"]["sweep"])
    report = spectra.find_peaks(result, e["prominence_fraction"])
    correction = None
    if e["mode"] == "eia_peaks" and e["correction"]:
        correction = analytics.eia_effective(drive, atom)
    est = spectra.estimate_mw_rabi(report, e["mode"], correction)
    rows = [(est.mode, to_mhz(est.splitting), to_mhz(est.omega_m_hat), est.correction_applied)]
    return ["mode", "splitting_MHz", "omega_m_hat_MHz", "correction_applied"], rows, {}


def execute(subcommand, cfg, threads=1):
    """Run one scenario; returns ``(columns, rows, header_metadata)``."""
    if subcommand in ("eit-scan", "eia-scan", "doppler-scan"):
        return run_scan(cfg, subcommand, threads)
    if subcommand == "liouvillian-spectrum":
        return run_liouvillian_spectrum(cfg)
    if subcommand == "timescale":
        return run_timescale(cfg)
    if subcommand in ("fluorescence", "fluorescence-t"):
        return run_fluorescence(cfg, subcommand == "fluorescence-t")
    if subcommand == "estimate-mw":
        return run_estimate(cfg)
    raise ConfigError(f"unknown subcommand {subcommand!r}")


# ---------------------------------------------------------------- selftest

def _selftest_cases():
    from .model import apply_liouvillian, build_hamiltonian, projector
    from .steadystate import EvolutionConfig, evolve, ground_state, relaxation_time, steady_state

    atom = AtomParams(1.0, 0.5, 0.25)
    zero = DriveParams()

    def approx(a, b, tol):
        return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol))

    def two_lorentz():
        eff = analytics.EffectiveEiaModel(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.05, 0.05, True, True)
        x = np.linspace(-1.5, 1.5, 3001)
        c = analytics.coherence_rho13_two_lorentzian(AtomParams(1.0, 0.05, 0.05), eff, x)
        sigma, absorption = spectra._calibrate(c)
        r = spectra.SpectrumResult(x, c, absorption, sigma, "synthetic")
        return abs(spectra.find_peaks(r).splitting - 1.0) < 5e-3

    def flat_nopeaks():
        x = np.linspace(-1, 1, 11)
        try:
            spectra.find_peaks(spectra.SpectrumResult(x, 1j * np.ones(11), np.ones(11), 1, "flat"))
        except RydsimError:
            return True
        return False

    def quad_moments():
        dp = doppler.DopplerParams(n_q=32)
        v, w = doppler.velocity_quadrature(dp)
        return (abs(w.sum() - 1) < 1e-12 and abs(w @ v) < 1e-12 * dp.u
                and abs(w @ v ** 2 - dp.u ** 2 / 2) < 1e-10 * dp.u ** 2)

    eit = DriveParams(omega_p=0.1, omega_c=8.0, omega_m=1.0)
    return [
        ("model", "undriven generator annihilates |1><1|",
         lambda: approx(apply_liouvillian(atom, zero, projector(1)), 0, 0)),
        ("model", "Hamiltonian is Hermitian", lambda: approx(
            build_hamiltonian(eit), build_hamiltonian(eit).conj().T, 0)),
        ("steadystate", "undriven steady state is |1><1|",
         lambda: approx(steady_state(atom, zero), projector(1), 0)),
        ("steadystate", "free decay of |2> gives exp(-3) at t=3", lambda: abs(
            evolve(AtomParams(1.0), zero, projector(2), EvolutionConfig(3.0))[1, 1].real
            - np.exp(-3)) < 1e-6),
        ("steadystate", "zero generator leaves rho unchanged", lambda: approx(
            evolve(AtomParams(0.0), zero, projector(3), EvolutionConfig(2.0, dt=0.1)), projector(3), 0)),
        ("spectral", "undriven relaxation time is 2/gamma", lambda: abs(relaxation_time(
            spectral.decompose(build_liouvillian(AtomParams(2.0, 2.0, 2.0), zero))) - 1.0) < 1e-8),
        ("analytics", "EIT coherence vanishes at Omega_m/2", lambda: analytics.coherence_rho12_eit(
            AtomParams(1.0), eit, 0.5) == 0),
        ("analytics", "eit_ideal saturation 0.25", lambda: abs(analytics.saturation(
            "eit_ideal", AtomParams(1.0), DriveParams(omega_p=0.5)) - 0.25) < 1e-15),
        ("analytics", "no fields -> Omega_eff = delta_ac = 0", lambda: (lambda e: e.omega_eff == 0
            and e.delta_ac == 0)(analytics.eia_effective(DriveParams(delta3=1.0)))),
        ("analytics", "peaks at -+Omega_m/2 without shifts", lambda: approx(
            analytics.eia_peak_positions(AtomParams(1.0), analytics.EffectiveEiaModel(
                0.1, 0.0, 2.0, 0.0, 5.0, 0.0, 0.0, 0.0, True, True))[:2], (-1.0, 1.0), 1e-15)),
        ("spectra", "constant absorption has zero visibility", lambda: spectra.visibility(
            spectra.SpectrumResult(np.arange(3.0), np.ones(3) * 1j, np.ones(3), 1, "x")).v == 0),
        ("spectra", "flat spectrum raises NoPeaks", flat_nopeaks),
        ("spectra", "two-Lorentzian splitting recovered", two_lorentz),
        ("doppler", "quadrature moments 1, 0, u^2/2", quad_moments),
        ("doppler", "v = 0 leaves the drive unchanged", lambda: doppler.shifted_drive(
            eit, 0.0, doppler.DopplerParams()) == eit),
        ("doppler", "equal wavelengths keep delta fixed", lambda: abs(doppler.shifted_drive(
            eit, 3.0, doppler.DopplerParams(lambda_p_nm=500, lambda_c_nm=500)).delta - eit.delta) < 1e-12),
        ("fluorescence", "undriven spectrum vanishes", lambda: approx(fluorescence.stationary_spectrum(
            atom, zero, np.linspace(-1, 1, 5)).S, 0, 0)),
        ("fluorescence", "t = 0 from |1><1| vanishes", lambda: approx(
            fluorescence.time_dependent_spectrum(atom, eit, ground_state(), 0.0,
                                                 np.linspace(-1, 1, 5)).S, 0, 0)),
        ("fluorescence", "C(0) equals rho_22", lambda: (lambda rho: abs(
            fluorescence.correlation_series(atom, eit, rho, np.array([0.0, 0.1])).values[0]
            - rho[1, 1]) < 1e-12)(steady_state(atom, eit))),
    ]


def selftest(out=sys.stdout):
    cases = _selftest_cases()
    failures = 0
    width = max(len(name) for _, name, _ in cases)
    for module, name, check in cases:
        try:
            ok = bool(check())
        except Exception as err:  # a crash is a failure, not an abort
            ok, name = False, f"{name} ({type(err).__name__}: {err})"
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {module:<13}{name:<{width}}", file=out)
    print(f"{len(cases) - failures}/{len(cases)} passed", file=out)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------- entry point

def _threads(value):
    if value is None:
        value = os.environ.get("RYDSIM_THREADS", "1")
    try:
        n = int(value)
    except ValueError as err:
        raise ConfigError(f"thread count must be an integer, got {value!r}") from err
    if n < 0:
        raise ConfigError("thread count must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def build_parser():
    p = argparse.ArgumentParser(prog="rydsim", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="scenario JSON file")
    p.add_argument("--out", help="output path prefix (.csv is appended)")
    p.add_argument("--threads", help="worker threads, 0 = all cores (env RYDSIM_THREADS)")
    p.add_argument("--points", type=int, help="override scan/fluorescence grid points")
    p.add_argument("--quiet", action="store_true", help="no summary on stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.subcommand == "selftest":
        return selftest(open(os.devnull, "w") if args.quiet else sys.stdout)
    try:
        if not args.config:
            raise ConfigError(f"{args.subcommand} needs --config")
        cfg = load_config(args.config)
        if args.points is not None:
            if args.points < 3:
                raise ConfigError("--points must be >= 3")
            cfg["scan"]["points"] = cfg["fluorescence"]["points"] = args.points
        threads = _threads(args.threads)
    except ConfigError as err:
        print(f"rydsim: config error: {err}", file=sys.stderr)
        return 2
    prefix = args.out or cfg["output"]["path"] or f"rydsim_{args.subcommand.replace('-', '_')}"
    path = prefix if prefix.endswith(".csv") else prefix + ".csv"
    try:
        columns, rows, meta = execute(args.subcommand, cfg, threads)
    except ConfigError as err:
        print(f"rydsim: config error: {err}", file=sys.stderr)
        return 2
    except RydsimError as err:
        params = {k: cfg[k] for k in ("atom", "drive")}
        print(f"rydsim: numerical error in {args.subcommand}: {type(err).__name__}: {err}\n"
              f"rydsim: parameters: {json.dumps(params, sort_keys=True)}", file=sys.stderr)
        return 3
    try:
        write_atomic(path, render_csv(cfg, columns, rows, meta))
    except OSError as err:
        print(f"rydsim: cannot write {path}: {err}", file=sys.stderr)
        return 2
    if not args.quiet:
        print(f"wrote {len(rows)} rows to {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
