"""Input generators, end-to-end pipeline driver, and scaling sweeps with CSV output.

Function inputs are sampled on endpoint-inclusive uniform grids (N points,
x_k = a + k(b-a)/(N-1)): gaussian and ricker on [-3, 3] with sigma=1, mu=0;
sin and cos on [0, 2*pi]. random_normal draws i.i.d. standard normals and
unit-normalizes. Everything is deterministic given the seed, down to the CSV
bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import circuit as circuit_mod
from . import pathopt, preprocess, simulator

GENERATOR_KINDS = ("random_normal", "gaussian", "ricker", "sin", "cos")
SIMULATE_LIMIT = 14  # dense statevector bails out above this many SYSTEM qubits


@dataclass(frozen=True)
class InputSpec:
    kind: str
    n: int
    seed: int | None = None
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS + ("file",):
            raise ValueError(f"unknown input kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file input needs a path")
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")


@dataclass
class BenchRecord:
    input_kind: str
    n: int
    L: int
    seed: int | None
    depth_core: int
    depth_full: int
    mcx_total: int
    p_success: float
    rho: float
    infidelity: float | None
    attempts_estimate: float
    tsp_mode: str
    wall_ms_decompose: float
    wall_ms_tsp: float
    wall_ms_simulate: float | None


CSV_COLUMNS = [f.name for f in fields(BenchRecord)]


def _load_file(path: str, size: int) -> np.ndarray:
    text = Path(path).read_text()
    stripped = text.lstrip()
    try:
        if stripped.startswith("["):
            values = json.loads(text)
        else:
            values = [float(line) for line in text.split() if line]
    except (json.JSONDecodeError, ValueError) as exc:
        raise ValueError(f"cannot parse input file {path}: {exc}") from exc
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape[0] != size:
        raise ValueError(f"input file holds {arr.shape[0]} values, expected {size}")
    return arr


def generate(spec: InputSpec) -> np.ndarray:
    """Deterministic input vector of length 2^n for the given spec."""
    size = 1 << spec.n
    if spec.kind == "file":
        return _load_file(spec.path, size)
    if spec.kind == "random_normal":
        rng = np.random.default_rng(spec.seed)
        v = rng.standard_normal(size)
        return v / np.linalg.norm(v)
    if spec.kind in ("gaussian", "ricker"):
        x = np.linspace(-3.0, 3.0, size)
        g = np.exp(-(x**2) / 2)
        return g if spec.kind == "gaussian" else (1 - x**2) * g
    x = np.linspace(0.0, 2 * math.pi, size)
    return np.sin(x) if spec.kind == "sin" else np.cos(x)


def run_pipeline(
    spec: InputSpec,
    L: int,
    order_mode: str = "auto",
    simulate: bool | None = None,
) -> BenchRecord:
    """Preprocess -> decompose/order -> build circuits -> (optionally) verify.

    simulate defaults to on for n <= 14; above that the verification fields
    are left empty.
    """
    if simulate is None:
        simulate = spec.n <= SIMULATE_LIMIT
    v = generate(spec)
    thetas = preprocess.compute_angles(v)
    B = preprocess.quantize(thetas, L)
    rho = preprocess.density_rho(v)

    t0 = time.perf_counter()
    P = pathopt.build_path_matrix(B)
    costs = pathopt.edge_costs(P)
    t1 = time.perf_counter()
    tour = pathopt.solve_tsp(costs, mode=order_mode)
    t2 = time.perf_counter()
    resolved_mode = order_mode
    if order_mode == "auto":
        resolved_mode = "exact" if L <= pathopt.EXACT_LIMIT else "heuristic"

    core = circuit_mod.build_core(B, tour)
    full = circuit_mod.build_full(B, tour)
    p = core.p_success
    if p <= 0:
        raise ValueError("quantized success probability is zero; nothing to encode")

    infidelity = None
    wall_simulate = None
    if simulate:
        t3 = time.perf_counter()
        state = simulator.run(core)
        ps = simulator.postselect_flag(state)
        infidelity = 1.0 - simulator.fidelity(ps, v)
        wall_simulate = (time.perf_counter() - t3) * 1e3

    return BenchRecord(
        input_kind=spec.kind,
        n=spec.n,
        L=L,
        seed=spec.seed,
        depth_core=circuit_mod.depth(core),
        depth_full=circuit_mod.depth(full),
        mcx_total=core.mcx_count,
        p_success=p,
        rho=rho,
        infidelity=infidelity,
        attempts_estimate=1.0 / p,
        tsp_mode=resolved_mode,
        wall_ms_decompose=(t1 - t0) * 1e3,
        wall_ms_tsp=(t2 - t1) * 1e3,
        wall_ms_simulate=wall_simulate,
    )


def sweep(
    kinds: Sequence[str],
    n_values: Sequence[int],
    L: int,
    repetitions: int,
    order_mode: str = "auto",
    base_seed: int = 0,
    simulate: bool | None = None,
) -> list[BenchRecord]:
    """One record per (kind, n, repetition), in deterministic sorted order.

    Seeds are derived as base_seed + 1000*n + repetition so every cell is
    reproducible in isolation.
    """
    records = []
    for kind in sorted(kinds):
        for n in sorted(n_values):
            for rep in range(repetitions):
                spec = InputSpec(kind=kind, n=n, seed=base_seed + 1000 * n + rep)
                records.append(run_pipeline(spec, L, order_mode, simulate=simulate))
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(records: Sequence[BenchRecord], aggregate: bool = True) -> str:
    """Render records (plus per-(kind, n) mean/stddev rows) as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(_fmt(getattr(rec, col)) for col in CSV_COLUMNS)
    if aggregate:
        numeric = [
            "depth_core",
            "depth_full",
            "mcx_total",
            "p_success",
            "rho",
            "infidelity",
            "attempts_estimate",
            "wall_ms_decompose",
            "wall_ms_tsp",
            "wall_ms_simulate",
        ]
        groups: dict[tuple[str, int, int], list[BenchRecord]] = {}
        for rec in records:
            groups.setdefault((rec.input_kind, rec.n, rec.L), []).append(rec)
        for (kind, n, L), recs in sorted(groups.items()):
            stats = (("mean", np.mean), ("stddev", np.std)) if len(recs) > 1 else (("mean", np.mean),)
            for stat, fn in stats:
                row = {col: "" for col in CSV_COLUMNS}
                row.update(input_kind=kind, n=n, L=L, seed=stat)
                modes = {r.tsp_mode for r in recs}
                row["tsp_mode"] = modes.pop() if len(modes) == 1 else ""
                for col in numeric:
                    vals = [getattr(r, col) for r in recs if getattr(r, col) is not None]
                    if vals:
                        row[col] = repr(float(fn(vals)))
                writer.writerow(row[col] for col in CSV_COLUMNS)
    return buf.getvalue()
