"""Experiment runner: configuration, presets, CSV emission, and reports.

Configuration is a flat key=value mapping (file, preset, or --set overrides);
every run is reproducible from the recorded mapping and seed. Output is
data-only; plotting is left to external tools.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from .accel import AccelSpec, AuxParams, vector_accelerate
from .errors import ConfigError
from .model import LTISystem, TimeGrid, slice_boundaries
from .omega_study import SubdivisionSet, build_psi
from .optimize import (
    AnnealConfig,
    anneal_q,
    bootstrap_reference,
    periodic_refresh,
    propagate_calibration,
)
from .parareal import (
    CLASSIC,
    SEMI_EXPLICIT,
    DeltaSchedule,
    PararealConfig,
    classic_parareal,
    extrapolated_solution,
    semi_explicit_parareal,
)
from .propagators import exact_solution, step_count

MODE_EULER_STUDY = "euler-study"
MODE_CLASSIC = "parareal-classic"
MODE_SEMI = "parareal-semi"

PRESETS = {
    "paper-sigma": {
        "A": "-1 5 ; -5 -1",
        "B": "0 ; 1",
        "u": "10",
        "y0": "0 1",
        "t0": "0",
        "tf": "0.9",
        "slices": "9",
        "mode": MODE_SEMI,
        "iterations": "8",
        "delta_base": "100",
        "delta_step": "1",
        "delta_low": "0.5",
        "delta_high": "1.5",
        "coarse_substeps": "7",
        "eps_k": "4",
        "eps_n": "2",
        "rho": "1",
        "aux_offset": "0",
        "aux_form": "literal",
        "guard": "1e-12",
        "h_tiny": "1e-5",
        "refresh_interval": "9",
        "anneal_steps": "2000",
        "anneal_cooling": "0.95",
        "anneal_scale": "0.5",
        "anneal_qmin": "1e-10",
        "anneal_qmax": "100",
        "ladder": "1,2,4,8,16,32,64,128,256,512,1024",
        "report_scale": "4",
        "seed": "42",
    }
}

_KEYS = {
    "A", "B", "u", "y0", "t0", "tf", "slices", "mode", "iterations",
    "delta_base", "delta_step", "delta_low", "delta_high", "coarse_substeps",
    "fine_step", "eps_k", "eps_n", "rho", "aux_offset", "aux_form", "guard",
    "h_tiny", "refresh_interval", "anneal_steps", "anneal_cooling",
    "anneal_scale", "anneal_qmin", "anneal_qmax", "anneal_temp", "ladder",
    "report_scale", "seed", "threads", "out",
}


def _parse_matrix(text: str, key: str) -> np.ndarray:
    try:
        rows = [[float(x) for x in row.split()] for row in text.split(";")]
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse matrix from {text!r}") from exc
    if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
        raise ConfigError(f"{key}: ragged or empty matrix in {text!r}")
    return np.array(rows)


def _parse_vector(text: str, key: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace(";", " ").split()])
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse vector from {text!r}") from exc


@dataclass
class ExperimentConfig:
    system: LTISystem
    grid: TimeGrid
    mode: str
    iterations: int
    schedule: DeltaSchedule
    coarse_substeps: int
    fine_step: float | None
    accel: AccelSpec
    aux_offset: float
    aux_form: str
    h_tiny: float
    refresh_interval: int
    anneal: AnnealConfig
    ladder: tuple
    report_scale: int
    threads: int
    out_dir: str
    raw: dict = field(default_factory=dict)


def _get(mapping: dict, key: str, default=None):
    if key in mapping:
        return mapping[key]
    if default is None:
        raise ConfigError(f"missing required config key {key!r}")
    return default


def _num(mapping: dict, key: str, conv, default=None):
    raw = _get(mapping, key, default)
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: expected {conv.__name__}, got {raw!r}") from exc


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = stripped.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_config(mapping: dict, command: str) -> ExperimentConfig:
    unknown = set(mapping) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    system = LTISystem(
        A=_parse_matrix(_get(mapping, "A"), "A"),
        B=_parse_matrix(_get(mapping, "B"), "B"),
        u=_parse_vector(_get(mapping, "u"), "u"),
        y0=_parse_vector(_get(mapping, "y0"), "y0"),
    )
    grid = TimeGrid(
        t0=_num(mapping, "t0", float, "0"),
        tf=_num(mapping, "tf", float),
        n_slices=_num(mapping, "slices", int),
    )

    default_mode = MODE_EULER_STUDY if command == "euler-study" else MODE_SEMI
    mode = str(_get(mapping, "mode", default_mode))
    if mode not in (MODE_EULER_STUDY, MODE_CLASSIC, MODE_SEMI):
        raise ConfigError(f"mode: expected one of euler-study, parareal-classic, "
                          f"parareal-semi, got {mode!r}")

    schedule = DeltaSchedule(
        base=_num(mapping, "delta_base", float, "100"),
        step=_num(mapping, "delta_step", float, "1"),
        low=_num(mapping, "delta_low", float, "0.5"),
        high=_num(mapping, "delta_high", float, "1.5"),
    )
    aux_form = str(_get(mapping, "aux_form", "literal"))
    if aux_form not in ("literal", "summed"):
        raise ConfigError(f"aux_form: expected literal or summed, got {aux_form!r}")
    aux_offset = _num(mapping, "aux_offset", float, "0")
    accel = AccelSpec(
        k=_num(mapping, "eps_k", int, "4"),
        n=_num(mapping, "eps_n", int, "2"),
        rho=_num(mapping, "rho", float, "1"),
        aux=None,  # created by calibration; q is not a free config key
        guard=_num(mapping, "guard", float, "1e-12"),
        delta_bounds=(schedule.low, schedule.high),
    )
    temp_raw = mapping.get("anneal_temp")
    anneal = AnnealConfig(
        q_min=_num(mapping, "anneal_qmin", float, "1e-10"),
        q_max=_num(mapping, "anneal_qmax", float, "100"),
        initial_temp=float(temp_raw) if temp_raw not in (None, "", "auto") else None,
        cooling=_num(mapping, "anneal_cooling", float, "0.95"),
        steps=_num(mapping, "anneal_steps", int, "2000"),
        proposal_scale=_num(mapping, "anneal_scale", float, "0.5"),
        seed=_num(mapping, "seed", int, "0"),
    )
    try:
        ladder = tuple(int(x) for x in str(_get(mapping, "ladder", "1,2,4,8")).split(","))
    except ValueError as exc:
        raise ConfigError("ladder: expected comma-separated integers") from exc

    fine_raw = mapping.get("fine_step")
    return ExperimentConfig(
        system=system,
        grid=grid,
        mode=mode,
        iterations=_num(mapping, "iterations", int, "8"),
        schedule=schedule,
        coarse_substeps=_num(mapping, "coarse_substeps", int, "1"),
        fine_step=float(fine_raw) if fine_raw is not None else None,
        accel=accel,
        aux_offset=aux_offset,
        aux_form=aux_form,
        h_tiny=_num(mapping, "h_tiny", float, "1e-5"),
        refresh_interval=_num(mapping, "refresh_interval", int,
                              str(_num(mapping, "slices", int))),
        anneal=anneal,
        ladder=ladder,
        report_scale=_num(mapping, "report_scale", int, "4"),
        threads=_num(mapping, "threads", int, str(_parallel.default_workers())),
        out_dir=str(_get(mapping, "out", "out")),
        raw=dict(mapping),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: str, header: list, rows) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _state_header(d: int) -> list:
    return ["t"] + [f"x{i + 1}" for i in range(d)]


def cmd_exact(cfg: ExperimentConfig) -> list:
    os.makedirs(cfg.out_dir, exist_ok=True)
    times = slice_boundaries(cfg.grid)
    rows = [[t, *exact_solution(cfg.system, t)] for t in times]
    path = write_csv(os.path.join(cfg.out_dir, "exact.csv"),
                     _state_header(cfg.system.dim), rows)
    return [path]


def cmd_euler_study(cfg: ExperimentConfig) -> list:
    os.makedirs(cfg.out_dir, exist_ok=True)
    h0 = cfg.grid.slice_len
    sub = SubdivisionSet(h0=h0, deltas=cfg.ladder)
    tf = cfg.grid.tf
    psis = _parallel.keyed_map(
        lambda d: build_psi(cfg.system, h0, d, tf), sub.deltas, cfg.threads
    )
    paths = []
    for d in sub.deltas:
        tr = psis[d]
        rows = [[t, *state] for t, state in zip(tr.times, tr.states)]
        paths.append(write_csv(os.path.join(cfg.out_dir, f"psi_{d}.csv"),
                               _state_header(cfg.system.dim), rows))
    n_coarse = step_count(tf, h0)
    exacts = {k0: exact_solution(cfg.system, k0 * h0) for k0 in range(1, n_coarse + 1)}
    err_rows = []
    for k0 in range(1, n_coarse + 1):
        for d in sub.deltas:
            err = float(np.linalg.norm(psis[d].states[k0] - exacts[k0]))
            err_rows.append([k0, d, err])
    paths.append(write_csv(os.path.join(cfg.out_dir, "omega_err.csv"),
                           ["k0", "delta", "err"], err_rows))
    return paths


def _parareal_config(cfg: ExperimentConfig) -> PararealConfig:
    mode = CLASSIC if cfg.mode == MODE_CLASSIC else SEMI_EXPLICIT
    return PararealConfig(
        grid=cfg.grid,
        iterations=cfg.iterations,
        mode=mode,
        schedule=cfg.schedule,
        coarse_substeps=cfg.coarse_substeps,
        fine_step=cfg.fine_step,
        workers=cfg.threads,
    )


def _base_spec(cfg: ExperimentConfig) -> AccelSpec:
    # aux q is a placeholder; calibration replaces it
    aux = AuxParams(offset=cfg.aux_offset, q=1.0, summed=cfg.aux_form == "summed")
    return AccelSpec(
        k=cfg.accel.k,
        n=cfg.accel.n,
        rho=cfg.accel.rho,
        aux=aux,
        guard=cfg.accel.guard,
        delta_bounds=cfg.accel.delta_bounds,
    )


def run_calibrated_pipeline(cfg: ExperimentConfig):
    """Solve, calibrate on the refresh schedule, extrapolate every slice.

    Returns (result, rows) where each row is
    (slice index, active q, error vs the plain extrapolant, error vs exact).
    """
    pcfg = _parareal_config(cfg)
    if pcfg.mode == CLASSIC:
        result = classic_parareal(cfg.system, pcfg)
    else:
        result = semi_explicit_parareal(cfg.system, pcfg)

    base = _base_spec(cfg)
    refresh_at = set(periodic_refresh(cfg.refresh_interval, cfg.grid.n_slices))
    plain_spec = AccelSpec(k=base.k, n=base.n, rho=base.rho, aux=None, guard=base.guard)

    rows = []
    solution = []
    active = None
    q_active = float("nan")
    for j in range(1, cfg.grid.n_slices + 1):
        om = result.omega_per_slice[j - 1]
        if j in refresh_at:
            ref = bootstrap_reference(cfg.system, float(om.anchor_time), cfg.h_tiny)
            calib = anneal_q(om, ref, cfg.accel.rho, cfg.anneal, base)
            active = propagate_calibration(calib, base)
            q_active = calib.q_opt
        value = vector_accelerate(active, om.terms)
        plain = vector_accelerate(plain_spec, om.terms)
        exact = exact_solution(cfg.system, float(om.anchor_time))
        rows.append((j, q_active,
                     float(np.linalg.norm(value - plain)),
                     float(np.linalg.norm(value - exact))))
        solution.append(value)
    result.final_solution = solution
    return result, rows


def cmd_parareal(cfg: ExperimentConfig) -> list:
    os.makedirs(cfg.out_dir, exist_ok=True)
    result, rows = run_calibrated_pipeline(cfg)

    err_rows = []
    for j in range(1, cfg.grid.n_slices + 1):
        om = result.omega_per_slice[j - 1]
        exact = exact_solution(cfg.system, float(om.anchor_time))
        for k, term in enumerate(om.terms, start=2):
            err_rows.append([j, k, float(np.linalg.norm(term - exact))])
    paths = [write_csv(os.path.join(cfg.out_dir, "omega_err_para.csv"),
                       ["j", "k", "err"], err_rows)]

    bounds = slice_boundaries(cfg.grid)
    sol_rows = [[bounds[0], *cfg.system.y0]]
    sol_rows += [[bounds[j], *result.final_solution[j - 1]]
                 for j in range(1, cfg.grid.n_slices + 1)]
    paths.append(write_csv(os.path.join(cfg.out_dir, "solution.csv"),
                           _state_header(cfg.system.dim), sol_rows))
    paths.append(write_report(cfg, rows))
    return paths


def write_report(cfg: ExperimentConfig, rows) -> str:
    path = os.path.join(cfg.out_dir, "report.txt")
    scale = 10.0 ** cfg.report_scale
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# errors scaled by 1e{cfg.report_scale}\n")
        fh.write("j q_opt err_vs_omega_lim err_vs_exact\n")
        for j, q, e_lim, e_ex in rows:
            fh.write(f"{j} {_fmt(q)} {_fmt(e_lim * scale)} {_fmt(e_ex * scale)}\n")
    return path


def cmd_optimize_q(cfg: ExperimentConfig) -> list:
    """Run the solver, calibrate on the first slice only, record the result."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    pcfg = _parareal_config(cfg)
    if pcfg.mode == CLASSIC:
        result = classic_parareal(cfg.system, pcfg)
    else:
        result = semi_explicit_parareal(cfg.system, pcfg)
    om1 = result.omega_per_slice[0]
    ref = bootstrap_reference(cfg.system, float(om1.anchor_time), cfg.h_tiny)
    calib = anneal_q(om1, ref, cfg.accel.rho, cfg.anneal, _base_spec(cfg))
    path = os.path.join(cfg.out_dir, "calibration.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"q_opt {_fmt(calib.q_opt)}\n")
        fh.write(f"objective {_fmt(calib.objective_at_opt)}\n")
        fh.write(f"evaluations {calib.evaluations}\n")
        fh.write("reference " + " ".join(_fmt(v) for v in calib.reference_limit) + "\n")
    return [path]
