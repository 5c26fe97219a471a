"""Scenarios, period-averaging, model comparison, config and CSV I/O.

This is the reproduction pipeline: it defines the two shipped scenarios
(piecewise-constant and sinusoidal pipe, Gaussian density pulse at rest),
averages fine-scale finite-volume output over one pipe period, compares it
against the effective-model solution, and writes deterministic CSV files.

Snapshot CSV schema (one file per time):

    # t=<t> scenario=<name> solver=<fvm|homog> n_cells=<n> cfl=<c>
    x,rho,m,q            (the homog solver omits the m column)
    <17-significant-digit comma-separated rows>

Comparison report schema:

    # scenario=<name> kind=comparison breaking=<comma list or none>
    time,rel_L2_rho,rel_L2_q,peaks_fvm,peaks_homog,leading_speed
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .medium import CrossSectionProfile, GasModel, PiecewiseConstantProfile, SinusoidalProfile, SampledProfile, constant_profile

#: comparison window half-width around the tracked right-going peak
WINDOW_HALFWIDTH = 50.0
#: local-maxima prominence, as a fraction of the initial pulse amplitude
PEAK_PROMINENCE_FRACTION = 0.10
#: early-time agreement threshold for the density error
EARLY_REL_L2_THRESHOLD = 0.05
#: |d rho/dx| above this flags probable wave breaking
STEEPNESS_THRESHOLD = 0.05


@dataclass(frozen=True)
class Pulse:
    amplitude: float
    width: float
    center: float = 0.0

    def __post_init__(self):
        if self.amplitude <= 0.0 or self.width <= 0.0:
            raise ValueError("pulse amplitude and width must be positive")


@dataclass(frozen=True)
class Scenario:
    name: str
    profile: CrossSectionProfile
    gas: GasModel
    rho_background: float
    pulse: Pulse
    x_lo: float
    x_hi: float
    t_end: float
    snapshot_times: tuple

    def __post_init__(self):
        if self.rho_background <= 0.0:
            raise ValueError("background density must be positive")
        if self.x_hi <= self.x_lo:
            raise ValueError("empty domain")
        times = tuple(float(t) for t in self.snapshot_times)
        if any(t < 0.0 or t > self.t_end + 1e-12 for t in times):
            raise ValueError("snapshot times must lie in [0, t_end]")
        if list(times) != sorted(times):
            raise ValueError("snapshot times must be sorted")
        object.__setattr__(self, "snapshot_times", times)

    def initial_density(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.pulse.center) / self.pulse.width
        return self.rho_background + self.pulse.amplitude * np.exp(-(z * z))


DEFAULT_SNAPSHOT_TIMES = (0.0, 30.0, 60.0, 120.0, 240.0)
DEFAULT_DOMAIN = (-300.0, 300.0)

_PRESETS = {}


def _register_presets():
    gas = GasModel(kappa=1.0, gamma=1.4)
    _PRESETS["scenario_a"] = Scenario(
        name="scenario_a",
        profile=PiecewiseConstantProfile(values=(0.25, 0.75), breakpoints=(0.0, 0.5), period=1.0),
        gas=gas,
        rho_background=0.3,
        pulse=Pulse(amplitude=1.0 / 20.0, width=8.0, center=0.0),
        x_lo=DEFAULT_DOMAIN[0], x_hi=DEFAULT_DOMAIN[1],
        t_end=DEFAULT_SNAPSHOT_TIMES[-1], snapshot_times=DEFAULT_SNAPSHOT_TIMES,
    )
    _PRESETS["scenario_b"] = Scenario(
        name="scenario_b",
        profile=SinusoidalProfile(mean=0.6, amplitude=0.4, period=1.0),
        gas=gas,
        rho_background=0.3,
        pulse=Pulse(amplitude=1.0 / 12.0, width=5.0, center=0.0),
        x_lo=DEFAULT_DOMAIN[0], x_hi=DEFAULT_DOMAIN[1],
        t_end=DEFAULT_SNAPSHOT_TIMES[-1], snapshot_times=DEFAULT_SNAPSHOT_TIMES,
    )
    _PRESETS["uniform"] = Scenario(
        name="uniform",
        profile=constant_profile(1.0),
        gas=gas,
        rho_background=0.3,
        pulse=Pulse(amplitude=1.0 / 20.0, width=8.0, center=0.0),
        x_lo=DEFAULT_DOMAIN[0], x_hi=DEFAULT_DOMAIN[1],
        t_end=DEFAULT_SNAPSHOT_TIMES[-1], snapshot_times=DEFAULT_SNAPSHOT_TIMES,
    )


_register_presets()

# -- configuration ------------------------------------------------------

_SCENARIO_KEYS = {
    "scenario": str,
    "kappa": float,
    "gamma": float,
    "rho_background": float,
    "profile_kind": str,
    "profile_period": float,
    "profile_values": "floats",
    "profile_breakpoints": "floats",
    "profile_mean": float,
    "profile_amplitude": float,
    "profile_samples": "floats",
    "pulse_amplitude": float,
    "pulse_width": float,
    "pulse_center": float,
    "domain_lo": float,
    "domain_hi": float,
    "t_end": float,
    "snapshot_times": "floats",
}
_RUN_KEYS = {
    "cells_per_period": int,
    "n_modes": int,
    "cfl": float,
    "cfl_spec": float,
    "bc": str,
}
CONFIG_KEYS = {**_SCENARIO_KEYS, **_RUN_KEYS}


def load_config(path: str) -> dict:
    """Parse a flat key=value config file; unknown keys are rejected."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            kind = CONFIG_KEYS[key]
            if kind == "floats":
                out[key] = tuple(float(v) for v in value.split(",") if v.strip())
            elif kind is str:
                out[key] = value
            else:
                out[key] = kind(value)
    return out


def _profile_from_config(cfg: dict) -> CrossSectionProfile:
    kind = cfg.get("profile_kind")
    period = cfg.get("profile_period", 1.0)
    if kind == "piecewise":
        return PiecewiseConstantProfile(values=tuple(cfg["profile_values"]),
                                        breakpoints=tuple(cfg["profile_breakpoints"]),
                                        period=period)
    if kind == "sinusoidal":
        return SinusoidalProfile(mean=cfg["profile_mean"],
                                 amplitude=cfg["profile_amplitude"], period=period)
    if kind == "sampled":
        return SampledProfile(samples=tuple(cfg["profile_samples"]), period=period)
    raise ValueError(f"unknown profile_kind {kind!r}; expected piecewise|sinusoidal|sampled")


def build_scenario(name: str | None = None, config: dict | None = None) -> Scenario:
    """Named preset, optionally overridden / fully defined by a config dict."""
    cfg = dict(config or {})
    preset = name or cfg.pop("scenario", None)
    if preset is not None:
        if preset not in _PRESETS:
            raise ValueError(f"unknown scenario {preset!r}; presets: {sorted(_PRESETS)}")
        base = _PRESETS[preset]
    else:
        if "profile_kind" not in cfg:
            raise ValueError("config without a scenario preset must define the profile")
        base = None

    if base is None:
        required = ("rho_background", "pulse_amplitude", "pulse_width",
                    "domain_lo", "domain_hi", "t_end")
        missing = [k for k in required if k not in cfg]
        if missing:
            raise ValueError(f"config without a scenario preset must define {missing}")

    gas = GasModel(
        kappa=cfg.get("kappa", base.gas.kappa if base else 1.0),
        gamma=cfg.get("gamma", base.gas.gamma if base else 1.4),
    )
    profile = _profile_from_config(cfg) if "profile_kind" in cfg else base.profile
    pulse = Pulse(
        amplitude=cfg.get("pulse_amplitude", base.pulse.amplitude if base else None),
        width=cfg.get("pulse_width", base.pulse.width if base else None),
        center=cfg.get("pulse_center", base.pulse.center if base else 0.0),
    )
    t_end = cfg.get("t_end", base.t_end if base else None)
    snaps = cfg.get("snapshot_times", base.snapshot_times if base else (0.0, t_end))
    snaps = tuple(t for t in snaps if t <= t_end + 1e-12)
    return Scenario(
        name=preset or "custom",
        profile=profile,
        gas=gas,
        rho_background=cfg.get("rho_background", base.rho_background if base else None),
        pulse=pulse,
        x_lo=cfg.get("domain_lo", base.x_lo if base else None),
        x_hi=cfg.get("domain_hi", base.x_hi if base else None),
        t_end=t_end,
        snapshot_times=snaps,
    )


# -- snapshots and CSV --------------------------------------------------

@dataclass(frozen=True)
class Snapshot:
    t: float
    x: np.ndarray
    data: dict  # ordered column name -> array
    solver: str
    scenario: str
    n_cells: int
    cfl: float

    def columns(self):
        return ["x"] + list(self.data)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def emit_snapshot_csv(snap: Snapshot, path: str) -> str:
    """Write one snapshot; output bytes are a pure function of the data."""
    cols = snap.columns()
    lines = [
        f"# t={_fmt(snap.t)} scenario={snap.scenario} solver={snap.solver} "
        f"n_cells={snap.n_cells} cfl={_fmt(snap.cfl)}",
        ",".join(cols),
    ]
    arrays = [snap.x] + [snap.data[c] for c in cols[1:]]
    for row in zip(*arrays):
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def snapshot_filename(snap: Snapshot) -> str:
    return f"{snap.scenario}_{snap.solver}_t{snap.t:g}.csv"


def emit_csv(obj, path: str):
    """Write a snapshot series (to a directory) or a report (to a file)."""
    if isinstance(obj, ComparisonReport):
        return emit_report_csv(obj, path)
    os.makedirs(path, exist_ok=True)
    written = []
    for snap in obj:
        written.append(emit_snapshot_csv(snap, os.path.join(path, snapshot_filename(snap))))
    return written


def parse_snapshot_csv(path: str) -> Snapshot:
    """Read a snapshot file back; raises on any schema violation."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError(f"{path}:1: missing '# t=... scenario=...' header")
    meta = {}
    for token in lines[0][2:].split():
        key, _, value = token.partition("=")
        meta[key] = value
    for key in ("t", "scenario", "solver", "n_cells", "cfl"):
        if key not in meta:
            raise ValueError(f"{path}:1: header missing {key}=")
    if len(lines) < 2:
        raise ValueError(f"{path}:2: missing column header")
    cols = lines[1].split(",")
    if cols[0] != "x" or "rho" not in cols:
        raise ValueError(f"{path}:2: unexpected columns {cols}")
    rows = []
    for i, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(cols):
            raise ValueError(f"{path}:{i}: expected {len(cols)} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ValueError(f"{path}:{i}: non-numeric value in row") from None
    arr = np.asarray(rows, dtype=float).reshape(len(rows), len(cols))
    data = {c: arr[:, j] for j, c in enumerate(cols) if j > 0}
    return Snapshot(
        t=float(meta["t"]), x=arr[:, 0], data=data, solver=meta["solver"],
        scenario=meta["scenario"], n_cells=int(meta["n_cells"]), cfl=float(meta["cfl"]),
    )


# -- period averaging ----------------------------------------------------

def period_average(snap: Snapshot, profile: CrossSectionProfile, bc: str = "outflow") -> dict:
    """Moving average of rho and q over exactly one profile period.

    Cell-exact weights: an even number of cells per period uses the
    half-weighted end cells (window of p+1 cells), an odd number the flat
    p-cell window; both integrate the per-cell reconstruction over exactly
    one period.  Endpoint cells use the configured boundary extension.
    """
    dx = float(snap.x[1] - snap.x[0])
    p = int(round(profile.period / dx))
    if p < 8:
        raise ValueError(f"{p} cells per period is too coarse to average (need >= 8)")
    if abs(p * dx - profile.period) > 1e-9 * profile.period:
        raise ValueError("grid spacing does not evenly divide the profile period")
    if p % 2 == 0:
        kernel = np.full(p + 1, 1.0 / p)
        kernel[0] = kernel[-1] = 0.5 / p
    else:
        kernel = np.full(p, 1.0 / p)
    half = len(kernel) // 2

    out = {}
    for name in ("rho", "q"):
        if name not in snap.data:
            continue
        v = snap.data[name]
        if bc == "periodic":
            ext = np.concatenate([v[-half:], v, v[:half]])
        elif bc == "outflow":
            ext = np.concatenate([np.full(half, v[0]), v, np.full(half, v[-1])])
        else:
            raise ValueError(f"unknown bc {bc!r}")
        out[name] = np.convolve(ext, kernel, mode="valid")
    return out


# -- resampling the spectral solution ------------------------------------

def spectral_resample(values: np.ndarray, x_lo: float, x_hi: float,
                      x_new: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of uniform periodic samples.

    ``values`` live on x_lo + L*j/n; ``x_new`` must be the cell centers of
    a uniform grid on the same domain (x_lo + (i+1/2)*L/m), in which case
    the evaluation reduces to FFT zero-padding to 2m points.
    """
    n = values.size
    m = x_new.size
    length = x_hi - x_lo
    expect = x_lo + (np.arange(m) + 0.5) * (length / m)
    if not np.allclose(x_new, expect, rtol=0.0, atol=1e-9 * length):
        raise ValueError("x_new must be uniform cell centers on the same domain")
    target = 2 * m
    if target < n:
        raise ValueError("target grid too coarse for the spectral content")
    hat = np.fft.rfft(values)
    pad = np.zeros(target // 2 + 1, dtype=complex)
    pad[: hat.size] = hat
    if n % 2 == 0 and target > n:
        pad[n // 2] *= 0.5  # split the formerly-unmatched Nyquist mode
    up = np.fft.irfft(pad, n=target) * (target / n)
    return up[1::2].copy()


# -- comparison -----------------------------------------------------------

@dataclass(frozen=True)
class ComparisonReport:
    scenario: str
    times: tuple
    rel_l2_rho: tuple
    rel_l2_q: tuple
    peaks_fvm: tuple
    peaks_homog: tuple
    leading_speed: tuple
    breaking: tuple  # wave-breaking flags, advisory only


def emit_report_csv(report: ComparisonReport, path: str) -> str:
    breaking = ",".join(f"{t:g}" for t, b in zip(report.times, report.breaking) if b) or "none"
    lines = [
        f"# scenario={report.scenario} kind=comparison breaking={breaking}",
        "time,rel_L2_rho,rel_L2_q,peaks_fvm,peaks_homog,leading_speed",
    ]
    for row in zip(report.times, report.rel_l2_rho, report.rel_l2_q,
                   report.peaks_fvm, report.peaks_homog, report.leading_speed):
        t, e_rho, e_q, p_f, p_h, v = row
        lines.append(",".join([_fmt(t), _fmt(e_rho), _fmt(e_q), str(int(p_f)),
                               str(int(p_h)), _fmt(v)]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _window_mask(x, center, halfwidth):
    return (x >= center - halfwidth) & (x <= center + halfwidth)


def compare(fvm_series, homog_series, scenario: Scenario,
            window_halfwidth: float = WINDOW_HALFWIDTH,
            prominence_fraction: float = PEAK_PROMINENCE_FRACTION,
            steepness_threshold: float = STEEPNESS_THRESHOLD,
            bc: str = "outflow") -> ComparisonReport:
    """Per-snapshot comparison of the averaged fine model vs the effective one.

    The spectral solution is interpolated onto the finite-volume grid, the
    error window tracks the right-going pulse, and local maxima above the
    prominence threshold count solitary-wave crests.
    """
    if len(fvm_series) != len(homog_series):
        raise ValueError("snapshot series lengths differ")
    rho0 = scenario.rho_background
    prominence = prominence_fraction * scenario.pulse.amplitude

    times, e_rho, e_q, n_f, n_h, speeds, breaking = [], [], [], [], [], [], []
    prev_lead = None
    prev_t = None
    for snap_f, snap_h in zip(fvm_series, homog_series):
        if abs(snap_f.t - snap_h.t) > 1e-9 * max(1.0, abs(snap_f.t)):
            raise ValueError(f"mismatched snapshot times {snap_f.t} vs {snap_h.t}")
        x = snap_f.x
        dx = float(x[1] - x[0])
        avg = period_average(snap_f, scenario.profile, bc=bc)
        rho_h = spectral_resample(snap_h.data["rho"], scenario.x_lo, scenario.x_hi, x)
        q_h = spectral_resample(snap_h.data["q"], scenario.x_lo, scenario.x_hi, x)

        pert = avg["rho"] - rho0
        right = x >= scenario.pulse.center
        x_peak = float(x[right][np.argmax(pert[right])])
        win = _window_mask(x, x_peak, window_halfwidth)

        ref = np.linalg.norm(pert[win])
        e_rho.append(float(np.linalg.norm((avg["rho"] - rho_h)[win]) / ref))
        ref_q = np.linalg.norm(avg["q"][win])
        if ref_q == 0.0:
            e_q.append(0.0 if np.allclose(q_h[win], 0.0) else np.inf)
        else:
            e_q.append(float(np.linalg.norm((avg["q"] - q_h)[win]) / ref_q))

        pk_f, _ = find_peaks(pert[win], prominence=prominence)
        pk_h, _ = find_peaks((rho_h - rho0)[win], prominence=prominence)
        n_f.append(len(pk_f))
        n_h.append(len(pk_h))

        lead = float(x[win][pk_f[-1]]) if len(pk_f) else x_peak
        if prev_lead is None or snap_f.t == prev_t:
            speeds.append(float("nan"))
        else:
            speeds.append((lead - prev_lead) / (snap_f.t - prev_t))
        prev_lead, prev_t = lead, snap_f.t

        steep = float(np.max(np.abs(np.diff(avg["rho"])))) / dx
        breaking.append(bool(steep > steepness_threshold))
        times.append(snap_f.t)

    return ComparisonReport(
        scenario=scenario.name, times=tuple(times),
        rel_l2_rho=tuple(e_rho), rel_l2_q=tuple(e_q),
        peaks_fvm=tuple(n_f), peaks_homog=tuple(n_h),
        leading_speed=tuple(speeds), breaking=tuple(breaking),
    )
