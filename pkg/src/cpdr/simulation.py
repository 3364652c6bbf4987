"""Benchmark models, data generators and the Monte Carlo harness.

Predictors and the error term are drawn jointly as
``(X, eps) = W / sqrt(V / df)`` with ``W`` having independent standard
normal (or centred unit exponential) entries and ``V ~ chi^2_df``. For
finite ``df`` the error therefore shares the mixing variable with ``X``.
"""
from __future__ import annotations

import csv
import io
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._errors import CPDRError, InputError
from .evaluation import delta_distance
from .kernels import (
    CP_METHODS,
    kernel_classical,
    kernel_cp_dr,
    kernel_cp_save,
    kernel_cp_sir,
    sample_whitening,
    slice_moments,
)
from .pipeline import normalize_method
from .projection import project
from .scatter import TylerConfig, robust_scatter
from .slicing import slice_response
from .subspace import DEFAULT_DMAX, back_transform, merc, top_eigen

MODELS = ("I", "II", "III", "IV", "V")
FAMILIES = ("elliptical_t", "asymmetric_exp")
N_SLICES = 5
_D0 = {"I": 1, "II": 2, "III": 2, "IV": 1, "V": 1}
_MIN_P = {"I": 3, "II": 2, "III": 10, "IV": 2, "V": 2}


@dataclass(frozen=True)
class ModelSpec:
    model: str = "I"
    p: int = 20
    n: int = 400
    df: float = math.inf
    family: str = "elliptical_t"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InputError(f"unknown model {self.model!r}")
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        if self.p < _MIN_P[self.model]:
            raise InputError(f"model {self.model} needs p >= {_MIN_P[self.model]}")
        if not self.df > 0:
            raise InputError("df must be positive")
        if math.isfinite(self.df) and self.df != int(self.df):
            raise InputError("finite df must be an integer")
        if self.n < self.p + 1:
            raise InputError("need n >= p + 1")

    @property
    def d0(self) -> int:
        return _D0[self.model]

    @property
    def cell_id(self) -> int:
        key = f"{self.model}|{self.family}|{format_df(self.df)}|{self.n}|{self.p}"
        return zlib.crc32(key.encode())


def format_df(df) -> str:
    return "inf" if math.isinf(df) else str(int(df))


def parse_df(text) -> float:
    text = str(text).strip().lower()
    if text in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(int(text))
    except ValueError:
        raise InputError(f"invalid df {text!r}") from None


def gen_predictors(spec: ModelSpec, seed):
    """Draw ``(X, eps)`` for one data set.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = (spec.n, spec.p + 1)
    if spec.family == "elliptical_t":
        W = rng.standard_normal(shape)
    else:
        W = rng.standard_exponential(shape) - 1.0
    if math.isfinite(spec.df):
        df = int(spec.df)
        V = np.sum(rng.standard_normal((spec.n, df)) ** 2, axis=1)
        W = W / np.sqrt(V / df)[:, None]
    return W[:, : spec.p], W[:, spec.p]


def true_basis(spec: ModelSpec) -> np.ndarray:
    """Columns are the model's true directions, unnormalized."""
    p = spec.p
    B = np.zeros((p, spec.d0))
    if spec.model == "I":
        B[:3, 0] = 1.0
    elif spec.model == "II":
        B[0, 0] = 1.0
        B[1, 1] = 1.0
    elif spec.model == "III":
        B[0:4, 0] = 1.0
        B[6:10, 1] = 1.0
    elif spec.model == "IV":
        B[0, 0] = 1.0
    else:
        B[:2, 0] = 1.0
    return B


def gen_response(spec: ModelSpec, X, eps) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    eps = np.asarray(eps, dtype=float)
    u = X @ true_basis(spec)
    if spec.model == "I":
        return u[:, 0] + 0.5 * eps
    if spec.model == "II":
        return u[:, 0] ** 2 + u[:, 1] + 0.2 * eps
    if spec.model == "III":
        return (u[:, 0] + 0.2 * eps > 0).astype(float) + 2.0 * (u[:, 1] + 0.2 * eps > 0)
    if spec.model == "IV":
        return 0.5 * (u[:, 0] - 0.5) ** 2 * eps
    return u[:, 0] ** 2 / np.sum(X * X, axis=1) + 0.2 * eps


def generate(spec: ModelSpec, seed):
    X, eps = gen_predictors(spec, seed)
    return X, gen_response(spec, X, eps)


@dataclass(frozen=True)
class ReplicationResult:
    seed: int
    method: str
    delta: float
    d_selected: int
    elapsed: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def run_replication(spec: ModelSpec, method: str, d_mode: str = "fixed_d0", seed: int = 0,
                    tyler: TylerConfig | None = None) -> ReplicationResult:
    """Generate one data set from ``seed`` and score one method on it.

    ``delta`` uses ``d = d0`` (``d_mode="fixed_d0"``) or the MERC choice
    (``d_mode="merc"``); ``d_selected`` is always the MERC choice.
    """
    method = normalize_method(method)
    X, y = generate(spec, seed)
    return _evaluate(spec, X, y, [method], d_mode, seed, tyler)[method]


def _evaluate(spec, X, y, methods, d_mode, seed, tyler=None):
    """Score several methods on one shared data set."""
    if d_mode not in ("fixed_d0", "merc"):
        raise InputError(f"unknown d_mode {d_mode!r}")
    B0 = true_basis(spec)
    out = {}
    cp_cache = {}
    slices = None
    for method in methods:
        t0 = time.perf_counter()
        try:
            if slices is None:
                slices = slice_response(y, N_SLICES)
            if method in CP_METHODS:
                if not cp_cache:
                    scatter = robust_scatter(X, tyler)
                    cp_cache["scatter"] = scatter
                    cp_cache["moments"] = slice_moments(project(X, scatter), slices)
                kernel = {"cp_sir": kernel_cp_sir, "cp_save": kernel_cp_save,
                          "cp_dr": kernel_cp_dr}[method](cp_cache["moments"])
                whitening = cp_cache["scatter"].sigma_inv_sqrt
            else:
                kernel = kernel_classical(X, slices, method)
                whitening = sample_whitening(X)[1]
            full = top_eigen(kernel, 1)
            d_sel = merc(full.eigenvalues, min(DEFAULT_DMAX, spec.p - 1))
            d = spec.d0 if d_mode == "fixed_d0" else d_sel
            sub = back_transform(top_eigen(kernel, d), whitening)
            delta = delta_distance(B0, sub.basis_x)
            out[method] = ReplicationResult(int(seed), method, delta, d_sel,
                                            time.perf_counter() - t0)
        except CPDRError as exc:
            out[method] = ReplicationResult(int(seed), method, math.nan, 0,
                                            time.perf_counter() - t0, str(exc))
    return out


def replication_seed(base_seed: int, spec: ModelSpec, rep: int) -> int:
    """Deterministic per-(cell, replication) seed, shared by all methods."""
    ss = np.random.SeedSequence([int(base_seed), spec.cell_id, int(rep)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class BenchmarkRow:
    model: str
    family: str
    df: float
    n: int
    method: str
    reps: int
    mean_delta: float
    se_delta: float
    dhat_accuracy: float
    failures: int = 0


@dataclass
class BenchmarkTable:
    """Aggregated replication results keyed by ``(spec, method)``."""

    specs: list
    methods: list
    results: dict = field(default_factory=dict)

    def replications(self, spec: ModelSpec, method: str) -> list:
        return self.results[(spec, method)]

    def row(self, spec: ModelSpec, method: str) -> BenchmarkRow:
        reps = self.results[(spec, method)]
        ok = [r for r in reps if r.ok]
        deltas = np.array([r.delta for r in ok])
        k = deltas.size
        mean = float(deltas.mean()) if k else math.nan
        se = float(deltas.std(ddof=1) / math.sqrt(k)) if k > 1 else math.nan
        acc = float(np.mean([r.d_selected == spec.d0 for r in ok])) if k else math.nan
        return BenchmarkRow(spec.model, spec.family, spec.df, spec.n, method,
                            k, mean, se, acc, len(reps) - k)

    def rows(self) -> list:
        return [self.row(s, m) for s in self.specs for m in self.methods]

    def mean_delta(self, spec: ModelSpec, method: str) -> float:
        return self.row(spec, method).mean_delta

    def dhat_accuracy(self, spec: ModelSpec, method: str) -> float:
        return self.row(spec, method).dhat_accuracy

    def delta_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "family", "df", "n", "method", "reps", "mean_delta", "se_delta"])
        for r in self.rows():
            w.writerow([r.model, r.family, format_df(r.df), r.n, r.method, r.reps,
                        _fmt(r.mean_delta), _fmt(r.se_delta)])
        return buf.getvalue()

    def dhat_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "family", "df", "n", "method", "dhat_accuracy"])
        for r in self.rows():
            w.writerow([r.model, r.family, format_df(r.df), r.n, r.method, _fmt(r.dhat_accuracy)])
        return buf.getvalue()

    def summary(self) -> str:
        head = f"{'model':<6}{'family':<16}{'df':>5}{'n':>7}  {'method':<8}{'reps':>6}{'mean_delta':>12}{'se':>9}{'dhat=d0':>9}"
        lines = [head, "-" * len(head)]
        for r in self.rows():
            lines.append(
                f"{r.model:<6}{r.family:<16}{format_df(r.df):>5}{r.n:>7}  {r.method:<8}"
                f"{r.reps:>6}{r.mean_delta:>12.4f}{r.se_delta:>9.4f}{r.dhat_accuracy:>9.3f}"
            )
        return "\n".join(lines)


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def _run_cell_rep(args):
    spec, methods, rep, base_seed, tyler = args
    seed = replication_seed(base_seed, spec, rep)
    X, y = generate(spec, seed)
    return _evaluate(spec, X, y, methods, "fixed_d0", seed, tyler)


def run_benchmark(specs, methods, reps: int, base_seed: int = 0, n_jobs: int = 1,
                  tyler: TylerConfig | None = None) -> BenchmarkTable:
    """Run every (spec, replication) and score all methods on each data set.

    Methods within a replication see the same ``(X, y)``. Deltas use
    ``d = d0``; the MERC choice from the same kernel feeds the
    dimension-recovery column.
    """
    if reps < 1:
        raise InputError("reps must be at least 1")
    specs = list(specs)
    methods = [normalize_method(m) for m in methods]
    tasks = [(s, methods, i, base_seed, tyler) for s in specs for i in range(reps)]
    if n_jobs == 1:
        outcomes = [_run_cell_rep(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            outcomes = list(pool.map(_run_cell_rep, tasks, chunksize=8))
    table = BenchmarkTable(specs, methods)
    for (spec, _, _, _, _), out in zip(tasks, outcomes):
        for m in methods:
            table.results.setdefault((spec, m), []).append(out[m])
    return table
