"""
Named experiments writing CSV tables (plus a JSON sidecar with the resolved
manifest) into an output directory.

CSV format: comma separated, header row, '.' decimal separator, numbers
with 12 significant digits, LF line endings.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import Manifest, to_jsonable
from .dynamics import propagate_checkpoints
from .engine import (
    COLD,
    HOT,
    OttoEngine,
    final_wm_temperature,
    measurement_suite,
    perfect_cycles,
    single_bath_setup,
    thermalization_time,
)
from .information import (
    athermality,
    effective_temperature,
    mutual_information,
    pairwise_mutual_information,
)
from .models import CouplingSpec, free_hamiltonian
from .phase_space import mean_energy, symmetrize

log = logging.getLogger(__name__)


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % value
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_sidecar(out_dir: Path, experiment: str, manifest: Manifest, extra: dict | None = None) -> Path:
    path = out_dir / f"{experiment}.json"
    payload = {"experiment": experiment, "config": to_jsonable(manifest.as_dict())}
    if extra:
        payload.update(to_jsonable(extra))
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def trace_grid(t_end: float, step: float, stride: int) -> list[float]:
    """Checkpoints ``k * step * stride`` in ``(0, t_end]``, always including ``t_end``."""
    h = step * stride
    n = int(math.floor(t_end / h + 1e-9))
    times = [k * h for k in range(1, n + 1)]
    if not times or abs(times[-1] - t_end) > 1e-9:
        times.append(t_end)
    return times


def _parallel_map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# thermalize ---------------------------------------------------------------


def run_thermalize(manifest: Manifest, out_dir: Path, workers: int = 1) -> list[Path]:
    bath = manifest.hot_bath()
    wm = manifest.working_medium()
    coupling = manifest.coupling()
    profile = manifest.profile()
    schedule, sigma0, layout = single_bath_setup(bath, wm, coupling, profile)
    times = [0.0, *trace_grid(profile.tau, manifest.trace_dt, manifest.trace_stride)]
    props = propagate_checkpoints(schedule, times, manifest.controls())
    anchor = coupling.sites[0]
    rows = []
    for t, S in zip(times, props):
        sigma = symmetrize(S @ sigma0 @ S.T)
        obs = measurement_suite(sigma, layout, wm.omega_m, t=t, anchors={"bath": anchor})
        rows.append(
            (
                t,
                obs.T_eff,
                obs.MI_wm_bath["bath"],
                obs.MI_wm_nodes["bath"][anchor],
                obs.MI_node1_rest["bath"],
                obs.athermality,
            )
        )
    out = write_csv(
        out_dir / "thermalize.csv",
        ["t", "T_eff", "MI_wm_bath", "MI_wm_node1", "MI_node1_rest", "athermality"],
        rows,
    )
    return [out, write_sidecar(out_dir, "thermalize", manifest)]


# cone ---------------------------------------------------------------------


def _cone_point(args) -> tuple[int, float, float]:
    manifest, n, tau = args
    t_eff = final_wm_temperature(
        manifest.hot_bath(n_nodes=n),
        manifest.working_medium(),
        manifest.coupling(n),
        tau,
        manifest.delta_ratio,
        manifest.controls(),
    )
    return n, tau, t_eff


def run_cone(manifest: Manifest, out_dir: Path, workers: int = 1) -> list[Path]:
    grid = [(manifest, n, tau) for n in manifest.n_list for tau in manifest.tau_list]
    rows = _parallel_map(_cone_point, grid, workers)
    out = write_csv(out_dir / "cone.csv", ["N", "tau", "T_eff_final"], rows)
    return [out, write_sidecar(out_dir, "cone", manifest)]


# otto ---------------------------------------------------------------------

CYCLE_COLUMNS = [
    "index",
    "W_ih",
    "W_ic",
    "W_h_to_c",
    "W_c_to_h",
    "W_total",
    "Q",
    "eta",
    "eta_defined",
    "T_h_eff",
    "T_c_eff",
    "MI_baths",
    "S_rel_hot",
    "S_rel_cold",
    "Q_pred",
    "W_pred",
    "eta_pred",
    "perfect",
]


def cycle_rows(records) -> list[list]:
    flags = perfect_cycles(records)
    rows = []
    for r, flag in zip(records, flags):
        d = asdict(r)
        d["perfect"] = flag
        rows.append([d[c] for c in CYCLE_COLUMNS])
    return rows


def _trace_times(manifest: Manifest) -> list[float]:
    return trace_grid(manifest.tau, manifest.trace_dt, manifest.trace_stride)


def run_otto(manifest: Manifest, out_dir: Path, workers: int = 1) -> list[Path]:
    config = manifest.engine_config()
    trace_rows = []

    def observer(stroke, t, sigma, omega):
        trace_rows.append(
            (
                t,
                stroke,
                effective_temperature(sigma[:2, :2], omega),
                athermality(sigma[:2, :2]),
                mean_energy(np.eye(2) * 0.5 * omega, sigma[:2, :2]),
            )
        )

    engine = OttoEngine(config, trace_times=_trace_times(manifest) if manifest.traces else None)
    records = []
    for rec in engine.cycles(observer=observer if manifest.traces else None):
        records.append(rec)
    paths = [write_csv(out_dir / "cycles.csv", CYCLE_COLUMNS, cycle_rows(records))]
    if manifest.traces:
        paths.append(
            write_csv(
                out_dir / "cycle_traces.csv",
                ["t", "stroke", "T_eff", "athermality", "E_wm"],
                trace_rows,
            )
        )
    summary = {
        "eta_otto": config.eta_otto,
        "refrigerator": config.is_refrigerator,
        "perfect_cycles": int(sum(perfect_cycles(records))),
    }
    paths.append(write_sidecar(out_dir, "otto", manifest, summary))
    return paths


# correlations -------------------------------------------------------------


def run_correlations(manifest: Manifest, out_dir: Path, workers: int = 1) -> list[Path]:
    config = manifest.engine_config()
    layout_modes = {}
    node_rows, bath_rows = [], []
    snapshots = {round(t, 9) for t in manifest.snapshot_times}
    snap_paths = []
    engine = OttoEngine(config, observables=False, trace_times=_trace_times(manifest))
    layout = engine.layout
    for name in (HOT, COLD):
        layout_modes[name] = list(layout.bath_modes(name))

    def record(t, sigma):
        for name in (HOT, COLD):
            mi = pairwise_mutual_information(sigma, [layout.wm], layout_modes[name])[0]
            node_rows.extend((t, name, i, v) for i, v in enumerate(mi))
        bath_rows.append((t, mutual_information(sigma, layout_modes[HOT], layout_modes[COLD])))
        key = round(t, 9)
        if key in snapshots:
            snapshots.discard(key)
            for name in (HOT, COLD):
                m = pairwise_mutual_information(sigma, layout_modes[name], layout_modes[name])
                n = len(layout_modes[name])
                rows = [(i, j, m[i, j]) for i in range(n) for j in range(n)]
                path = out_dir / f"mi_intra_{name}_{fmt(t)}.csv"
                snap_paths.append(write_csv(path, ["node_i", "node_j", "MI"], rows))

    record(0.0, engine.state)
    for _ in engine.cycles(observer=lambda stroke, t, sigma, omega: record(t, sigma)):
        pass
    if snapshots:
        log.warning("snapshot times never reached on the trace grid: %s", sorted(snapshots))
    paths = [
        write_csv(out_dir / "mi_wm_nodes.csv", ["t", "bath", "node", "MI"], node_rows),
        write_csv(out_dir / "mi_baths.csv", ["t", "MI"], bath_rows),
        *snap_paths,
    ]
    paths.append(write_sidecar(out_dir, "correlations", manifest))
    return paths


# scaling ------------------------------------------------------------------


@dataclass
class ScalingPoint:
    alpha: float
    tau_th: float
    W_i: float
    heat: float
    eta: float
    eta_gap: float
    power: float


def scaling_point(manifest: Manifest, alpha: float) -> ScalingPoint:
    """Thermalization time at coupling ``alpha`` (= gamma), then isochore and first-cycle figures at that duration."""
    bath = manifest.hot_bath(alpha=alpha)
    wm = manifest.working_medium()
    coupling = CouplingSpec(alpha, manifest.coupling().sites)
    tau_th = thermalization_time(bath, wm, coupling, manifest.delta_ratio, controls=manifest.controls())

    profile = manifest.profile(tau_th)
    schedule, sigma0, layout = single_bath_setup(bath, wm, coupling, profile)
    S = propagate_checkpoints(schedule, [0.0, tau_th], manifest.controls())[-1]
    F0 = free_hamiltonian(layout, wm.omega_m, {"bath": bath})
    sigma1 = symmetrize(S @ sigma0 @ S.T)
    W_i = mean_energy(F0, sigma0) - mean_energy(F0, sigma1)
    heat = mean_energy(F0[2:, 2:], sigma0[2:, 2:]) - mean_energy(F0[2:, 2:], sigma1[2:, 2:])

    config = manifest.engine_config(tau=tau_th, alpha=alpha)
    rec = OttoEngine(config, observables=False).step()
    return ScalingPoint(
        alpha=alpha,
        tau_th=tau_th,
        W_i=W_i,
        heat=heat,
        eta=rec.eta,
        eta_gap=config.eta_otto - rec.eta,
        power=rec.W_total / config.cycle_duration,
    )


def fit_exponent(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of log|y| against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.abs(np.asarray(y, dtype=float)))
    return float(np.polyfit(lx, ly, 1)[0])


def _scaling_job(args):
    manifest, alpha = args
    return scaling_point(manifest, alpha)


def run_scaling(manifest: Manifest, out_dir: Path, workers: int = 1) -> list[Path]:
    points = _parallel_map(_scaling_job, [(manifest, a) for a in manifest.alpha_list], workers)
    cols = ["alpha", "tau_th", "W_i", "heat", "eta", "eta_gap", "power"]
    paths = [write_csv(out_dir / "scaling.csv", cols, [[getattr(p, c) for c in cols] for p in points])]
    if len(points) >= 2:
        alphas = [p.alpha for p in points]
        fits = [(q, fit_exponent(alphas, [getattr(p, q) for p in points])) for q in cols[1:]]
        paths.append(write_csv(out_dir / "scaling_fits.csv", ["quantity", "exponent"], fits))
    paths.append(write_sidecar(out_dir, "scaling", manifest))
    return paths


RUNNERS = {
    "thermalize": run_thermalize,
    "cone": run_cone,
    "otto": run_otto,
    "correlations": run_correlations,
    "scaling": run_scaling,
}
