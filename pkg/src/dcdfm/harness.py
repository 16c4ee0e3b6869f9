"""Experiment driver: seeded simulation sweeps and real-data noise sweeps.

Every replicate owns an independent RNG stream derived from
``(base_seed, sweep-value index, replicate)`` via SeedSequence spawn keys,
so runs are reproducible record for record regardless of execution order,
and replicates can run in parallel worker processes without changing the
output.  Both detection methods see the same sampled adjacency within a
replicate (paired comparison).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import make_rng, subseed
from .clustering import KMeansConfig
from .detect import detect_both
from .errors import DistributionDomainViolation, MissingGroundTruth
from .metrics import error_rate
from .model import (
    ConnectivityMatrix,
    Heterogeneity,
    Labeling,
    ModelParams,
    expected_adjacency,
    make_distribution,
    sample_adjacency,
)
from .netio import NetworkDataset, add_noise

# Four-community connectivity used by the simulation presets: a mixed-sign
# matrix for the normal-distribution sweeps, and a non-negative one for the
# probability-mean families.  Max absolute entry is 1 in both.
P_MIXED_SIGN = np.array(
    [
        [-1.0, -0.4, 0.5, 0.2],
        [-0.4, 0.9, 0.2, -0.2],
        [0.5, 0.2, 0.8, 0.3],
        [0.2, -0.2, 0.3, -0.9],
    ]
)
P_NONNEGATIVE = np.array(
    [
        [1.0, 0.4, 0.5, 0.2],
        [0.4, 0.9, 0.2, 0.2],
        [0.5, 0.2, 0.8, 0.3],
        [0.2, 0.2, 0.3, 0.9],
    ]
)

DEFAULT_NOISE_GRID = tuple(k / 100 for k in range(0, 21))


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    """One simulation sweep: fixed model shape, one varying parameter.

    ``sweep_name`` is one of ``rho`` (sparsity scale), ``sigma2_a`` (normal
    variance), or ``m`` (binomial trials).  Node weights are drawn as
    ``sqrt(rho) * U(0,1)``, which keeps every entrywise mean within
    ``rho * max|P|``; rho is the network's density scale.  ``saturate``
    enables probability clipping in the sampler for sweeps that push means
    past the domain edge anyway (Bernoulli with rho > 1).
    """

    id: str
    n: int
    K: int
    P: np.ndarray
    family: str
    sweep_name: str
    sweep_values: tuple
    sigma2: float | None = None
    m: int | None = None
    rho: float | None = None
    replicates: int = 50
    base_seed: int = 0
    saturate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "P", np.asarray(self.P, dtype=np.float64))
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        if not self.sweep_values:
            raise ValueError("sweep_values must be non-empty")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.sweep_name not in ("rho", "sigma2_a", "m"):
            raise ValueError(f"unknown sweep parameter {self.sweep_name!r}")


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    param_name: str
    param_value: float
    replicate: int
    method: str
    error: float


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    param_name: str
    param_value: float
    method: str
    mean_error: float
    stderr: float
    replicates: int


def preset(experiment_id: str, replicates: int = 50, base_seed: int = 0) -> ExperimentSpec:
    """Built-in sweeps E1a, E1b, E2a, E2b, E3, E4 (n=400, K=4)."""
    common = dict(n=400, K=4, replicates=replicates, base_seed=base_seed)
    presets = {
        "E1a": dict(
            P=P_MIXED_SIGN, family="normal", sigma2=4.0,
            sweep_name="rho", sweep_values=[float(k) for k in range(1, 11)],
        ),
        "E1b": dict(
            P=P_MIXED_SIGN, family="normal", rho=10.0,
            sweep_name="sigma2_a", sweep_values=[float(k) for k in range(1, 11)],
        ),
        # with rho < m every binomial mean stays within [0, m]; no clipping
        "E2a": dict(
            P=P_NONNEGATIVE, family="binomial", m=5,
            sweep_name="rho", sweep_values=[k / 2 for k in range(1, 9)],
        ),
        "E2b": dict(
            P=P_NONNEGATIVE, family="binomial", rho=1.0,
            sweep_name="m", sweep_values=[float(k) for k in range(1, 21)],
        ),
        "E3": dict(
            P=P_NONNEGATIVE, family="bernoulli",
            sweep_name="rho", sweep_values=[k / 10 for k in range(1, 21)],
            saturate=True,
        ),
        "E4": dict(
            P=P_NONNEGATIVE, family="poisson",
            sweep_name="rho", sweep_values=[k / 10 for k in range(1, 21)],
        ),
    }
    if experiment_id not in presets:
        raise KeyError(f"unknown experiment {experiment_id!r}; expected one of {sorted(presets)}")
    return ExperimentSpec(id=experiment_id, **common, **presets[experiment_id])


PRESET_IDS = ("E1a", "E1b", "E2a", "E2b", "E3", "E4")


def draw_labels(rng: np.random.Generator, n: int, K: int) -> np.ndarray:
    """Uniform community labels, redrawn until every community is non-empty."""
    for _ in range(1000):
        labels = rng.integers(1, K + 1, size=n)
        if np.bincount(labels, minlength=K + 1)[1:].min() > 0:
            return labels.astype(np.int64)
    raise RuntimeError(f"could not draw a full labeling with n={n}, K={K}")


def _resolve(spec: ExperimentSpec, value: float):
    """Weight scale and distribution for one sweep value."""
    if spec.sweep_name == "rho":
        return value, make_distribution(spec.family, sigma2=spec.sigma2, m=spec.m)
    if spec.sweep_name == "sigma2_a":
        return spec.rho, make_distribution(spec.family, sigma2=value, m=spec.m)
    return spec.rho, make_distribution(spec.family, sigma2=spec.sigma2, m=int(value))


def _simulate_cell(spec: ExperimentSpec, value_index: int, replicate: int):
    """One replicate: draw a model, sample A, run both methods."""
    value = spec.sweep_values[value_index]
    rho, dist = _resolve(spec, value)
    ss = subseed(spec.base_seed, value_index, replicate)
    s_model, s_sample, s_ndfa, s_dfa = ss.spawn(4)
    rng = make_rng(s_model)
    truth = Labeling(draw_labels(rng, spec.n, spec.K), spec.K)
    theta = np.sqrt(rho) * rng.random(spec.n)
    params = ModelParams(
        K=spec.K,
        labeling=truth,
        P=ConnectivityMatrix(spec.P),
        theta=Heterogeneity(theta),
    )
    omega = expected_adjacency(params)
    try:
        A = sample_adjacency(omega, dist, s_sample, saturate=spec.saturate)
    except DistributionDomainViolation as exc:
        raise DistributionDomainViolation(
            f"{spec.id}: {spec.sweep_name}={value!r} replicate {replicate}: {exc}",
            i=exc.i,
            j=exc.j,
            value=exc.value,
        ) from exc
    out_n, out_d = detect_both(
        A,
        spec.K,
        ndfa_config=KMeansConfig(K=spec.K, seed=s_ndfa),
        dfa_config=KMeansConfig(K=spec.K, seed=s_dfa),
    )
    rows = [
        ExperimentRecord(
            spec.id, spec.sweep_name, value, replicate, out.method,
            error_rate(out.labeling, truth),
        )
        for out in (out_n, out_d)
    ]
    return sorted(rows, key=lambda r: r.method)


def _run_cells(task_fn, cells, jobs: int):
    """Run cells serially or in worker processes; output order is fixed."""
    if jobs <= 1:
        return [task_fn(*cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_CellRunner(task_fn), cells, chunksize=8))


class _CellRunner:
    """Picklable adapter: maps a cell tuple onto a task function."""

    def __init__(self, task_fn):
        self.task_fn = task_fn

    def __call__(self, cell):
        return self.task_fn(*cell)


def run_simulation(spec: ExperimentSpec, jobs: int = 1) -> list[ExperimentRecord]:
    """All (sweep value, replicate) cells of a sweep, in deterministic order.

    Records are sorted by (sweep-value index, replicate, method); rerunning
    with the same spec reproduces them exactly, serial or parallel.
    """
    cells = [
        (spec, vi, r)
        for vi in range(len(spec.sweep_values))
        for r in range(spec.replicates)
    ]
    out = []
    for rows in _run_cells(_simulate_cell, cells, jobs):
        out.extend(rows)
    return out


def _real_noise_cell(dataset: NetworkDataset, sigma2_grid, base_seed, value_index, replicate):
    sigma2 = sigma2_grid[value_index]
    truth = dataset.truth
    ss = subseed(base_seed, value_index, replicate)
    s_noise, s_ndfa, s_dfa = ss.spawn(3)
    noisy = add_noise(dataset.adjacency, sigma2, s_noise)
    out_n, out_d = detect_both(
        noisy,
        truth.K,
        ndfa_config=KMeansConfig(K=truth.K, seed=s_ndfa),
        dfa_config=KMeansConfig(K=truth.K, seed=s_dfa),
    )
    rows = [
        ExperimentRecord(
            f"RealNoise[{dataset.name}]", "sigma2_w", sigma2, replicate, out.method,
            error_rate(out.labeling, truth),
        )
        for out in (out_n, out_d)
    ]
    return sorted(rows, key=lambda r: r.method)


def run_real_noise(
    dataset: NetworkDataset,
    sigma2_grid=DEFAULT_NOISE_GRID,
    replicates: int = 50,
    base_seed: int = 0,
    jobs: int = 1,
) -> list[ExperimentRecord]:
    """Noise-perturbation sweep on a labelled real network."""
    if dataset.truth is None:
        raise MissingGroundTruth(f"dataset {dataset.name!r} has no ground-truth labels")
    grid = tuple(float(v) for v in sigma2_grid)
    if not grid:
        raise ValueError("sigma2 grid must be non-empty")
    cells = [
        (dataset, grid, base_seed, vi, r)
        for vi in range(len(grid))
        for r in range(replicates)
    ]
    out = []
    for rows in _run_cells(_real_noise_cell, cells, jobs):
        out.extend(rows)
    return out


def summarize(records) -> list[SummaryRow]:
    """Per-(experiment, parameter value, method) means and standard errors.

    Group order follows first appearance, so summaries are as deterministic
    as the records.
    """
    groups: dict = {}
    for r in records:
        key = (r.experiment, r.param_name, r.param_value, r.method)
        groups.setdefault(key, []).append(r.error)
    out = []
    for (exp, pname, pvalue, method), errs in groups.items():
        arr = np.asarray(errs, dtype=np.float64)
        stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
        out.append(
            SummaryRow(
                experiment=exp,
                param_name=pname,
                param_value=pvalue,
                method=method,
                mean_error=float(arr.mean()),
                stderr=stderr,
                replicates=arr.size,
            )
        )
    return out


def mean_errors(records, method: str) -> dict:
    """param_value -> mean error for one method (convenience for tests)."""
    return {
        row.param_value: row.mean_error
        for row in summarize(records)
        if row.method == method
    }


# ---------------------------------------------------------------------------
# key=value model / experiment descriptions (CLI input format)
# ---------------------------------------------------------------------------


def parse_matrix_field(text: str) -> np.ndarray:
    """Parse ``a,b;c,d`` (rows split by ';', entries by ',')."""
    rows = [
        [float(x) for x in row.split(",")]
        for row in text.split(";")
        if row.strip()
    ]
    return np.asarray(rows, dtype=np.float64)


def model_from_config(cfg: dict, seed=None):
    """Build (params, distribution, seed) from a key=value description.

    Recognised keys: ``n``, ``K``, ``P`` (rows ``;``-separated), ``rho``,
    ``distribution`` plus ``sigma2``/``m``, ``seed``, and optional explicit
    ``labels`` / ``theta`` comma lists.  Absent labels are drawn uniformly
    and absent theta as sqrt(rho) * U(0,1) (the experiment convention),
    both from the seed's model stream.
    """
    n = int(cfg["n"])
    K = int(cfg["K"])
    P = parse_matrix_field(cfg["P"])
    if seed is None:
        seed = int(cfg.get("seed", 0))
    rng = make_rng(subseed(seed, 0))
    if "labels" in cfg:
        labels = np.asarray([int(x) for x in cfg["labels"].split(",")], dtype=np.int64)
    else:
        labels = draw_labels(rng, n, K)
    if "theta" in cfg:
        theta = np.asarray([float(x) for x in cfg["theta"].split(",")], dtype=np.float64)
    else:
        theta = np.sqrt(float(cfg.get("rho", 1.0))) * rng.random(n)
    dist = None
    if "distribution" in cfg:
        dist = make_distribution(
            cfg["distribution"],
            sigma2=float(cfg["sigma2"]) if "sigma2" in cfg else None,
            m=int(cfg["m"]) if "m" in cfg else None,
        )
    params = ModelParams(
        K=K,
        labeling=Labeling(labels, K),
        P=ConnectivityMatrix(P),
        theta=Heterogeneity(theta),
    )
    return params, dist, seed


def spec_from_config(cfg: dict) -> ExperimentSpec:
    """Build a custom ExperimentSpec from a key=value description.

    Requires ``n``, ``K``, ``P``, ``distribution``, and ``sweep`` written as
    ``name:v1,v2,...``; optional ``id``, ``rho``, ``sigma2``, ``m``,
    ``replicates``, ``seed``, ``saturate``.
    """
    sweep = cfg["sweep"]
    if ":" not in sweep:
        raise ValueError(f"sweep must be 'name:v1,v2,...', got {sweep!r}")
    sweep_name, _, values = sweep.partition(":")
    return ExperimentSpec(
        id=cfg.get("id", "Custom"),
        n=int(cfg["n"]),
        K=int(cfg["K"]),
        P=parse_matrix_field(cfg["P"]),
        family=cfg["distribution"],
        sweep_name=sweep_name.strip(),
        sweep_values=[float(v) for v in values.split(",")],
        sigma2=float(cfg["sigma2"]) if "sigma2" in cfg else None,
        m=int(cfg["m"]) if "m" in cfg else None,
        rho=float(cfg["rho"]) if "rho" in cfg else None,
        replicates=int(cfg.get("replicates", 50)),
        base_seed=int(cfg.get("seed", 0)),
        saturate=cfg.get("saturate", "0").strip() in ("1", "true", "yes"),
    )
