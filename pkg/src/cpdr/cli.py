"""Command-line entry points: ``cpdr fit``, ``cpdr project``, ``cpdr simulate``.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ._errors import CPDRError, InputError, NumericalError
from .kernels import METHODS
from .pipeline import fit_directions, normalize_method
from .scatter import robust_scatter
from .simulation import FAMILIES, MODELS, ModelSpec, parse_df, run_benchmark
from .subspace import DEFAULT_DMAX, orthonormalize

SCHEMA = "cpdr.fit/1"
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


@dataclass
class FitReport:
    method: str
    predictors: list
    response: str
    n: int
    K: int
    eigenvalues: list
    d_selected: int
    d_merc: int
    basis_x: list
    basis_proj: list
    center: list
    whitening: list
    contour: bool
    indices: list
    scatter_iterations: int | None = None
    scatter_residual: float | None = None
    schema: str = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "FitReport":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise InputError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)

    def indices_for(self, X) -> np.ndarray:
        Z = (np.asarray(X, dtype=float) - np.array(self.center)) @ np.array(self.whitening)
        if self.contour:
            Z = Z / np.linalg.norm(Z, axis=1)[:, None]
        return Z @ np.array(self.basis_proj).T


def read_table(path) -> tuple[list, np.ndarray]:
    """Read a headed numeric CSV. Raises :class:`InputError` on bad cells."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise InputError(f"{path}: duplicate column names")
    data = []
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise InputError(f"{path}: row {i} has {len(row)} fields, expected {len(header)}")
        values = []
        for name, cell in zip(header, row):
            try:
                values.append(float(cell))
            except ValueError:
                raise InputError(f"{path}: non-numeric value {cell!r} at row {i}, column {name!r}") from None
        data.append(values)
    return header, np.array(data, dtype=float).reshape(len(data), len(header))


def _select(header, data, response, predictors):
    if response not in header:
        raise InputError(f"response column {response!r} not found")
    names = [h for h in header if h != response] if predictors is None else predictors
    missing = [c for c in names if c not in header]
    if missing:
        raise InputError(f"predictor columns not found: {', '.join(missing)}")
    X = data[:, [header.index(c) for c in names]]
    y = data[:, header.index(response)]
    return names, X, y


def cmd_fit(args) -> int:
    header, data = read_table(args.input)
    predictors = args.predictors.split(",") if args.predictors else None
    names, X, y = _select(header, data, args.response, predictors)
    scale = np.ones(X.shape[1])
    if args.standardize:
        # unit diagonal for the robust scatter
        scale = np.sqrt(np.diag(robust_scatter(X).sigma_hat))
    dim = "auto" if args.dim == "auto" else int(args.dim)
    fit = fit_directions(X / scale, y, args.method, args.slices, dim, args.dmax)

    center = fit.center * scale
    whitening = fit.whitening / scale[:, None]
    basis_x = orthonormalize(whitening @ fit.subspace.basis_proj)
    report = FitReport(
        method=fit.method,
        predictors=list(names),
        response=args.response,
        n=int(X.shape[0]),
        K=int(fit.slices.K),
        eigenvalues=fit.subspace.eigenvalues.tolist(),
        d_selected=int(fit.d),
        d_merc=int(fit.d_merc),
        basis_x=basis_x.T.tolist(),
        basis_proj=fit.subspace.basis_proj.T.tolist(),
        center=center.tolist(),
        whitening=whitening.tolist(),
        contour=fit.contour,
        indices=fit.indices(X / scale).tolist(),
        scatter_iterations=None if fit.scatter is None else fit.scatter.iterations_used,
        scatter_residual=None if fit.scatter is None else fit.scatter.final_residual,
    )
    Path(args.out).write_text(report.to_json())
    print(f"{report.method}: K={report.K} d={report.d_selected} (MERC {report.d_merc}) -> {args.out}")
    return EXIT_OK


def cmd_project(args) -> int:
    try:
        report = FitReport.from_json(Path(args.model_file).read_text())
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise InputError(f"cannot load model file {args.model_file}: {exc}") from None
    header, data = read_table(args.input)
    missing = [c for c in report.predictors if c not in header]
    if missing:
        raise InputError(f"dimension mismatch: data lacks predictor columns {', '.join(missing)}")
    X = data[:, [header.index(c) for c in report.predictors]]
    eta = report.indices_for(X)
    cols = [f"eta{j + 1}" for j in range(eta.shape[1])]
    has_y = report.response in header
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(([report.response] if has_y else []) + cols)
        y = data[:, header.index(report.response)] if has_y else None
        for i in range(eta.shape[0]):
            lead = [repr(float(y[i]))] if has_y else []
            w.writerow(lead + [repr(float(v)) for v in eta[i]])
    return EXIT_OK


def cmd_simulate(args) -> int:
    specs = [
        ModelSpec(model=m, p=args.p, n=n, df=df, family=fam)
        for m in args.models
        for fam in args.families
        for df in args.dfs
        for n in args.n
    ]
    table = run_benchmark(specs, args.methods, args.reps, args.seed, n_jobs=args.jobs)
    out = Path(args.out)
    out.write_text(table.delta_csv())
    dhat_out = Path(args.dhat_out) if args.dhat_out else out.with_name(out.stem + "_dhat.csv")
    dhat_out.write_text(table.dhat_csv())
    print(table.summary())
    return EXIT_OK


def _csv_choice(choices):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if not items or bad:
            raise argparse.ArgumentTypeError(
                f"invalid choice(s) {bad or text!r}; choose from {', '.join(choices)}")
        return items
    return parse


def _method_list(text):
    try:
        return [normalize_method(t) for t in text.split(",") if t.strip()]
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _df_list(text):
    try:
        return [parse_df(t) for t in text.split(",") if t.strip()]
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        items = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not items or min(items) < 1:
        raise argparse.ArgumentTypeError("values must be positive integers")
    return items


def _dim(text):
    if text == "auto":
        return text
    if text.isdigit() and int(text) >= 1:
        return text
    raise argparse.ArgumentTypeError("--dim must be a positive integer or 'auto'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpdr", description="Contour-projected dimension reduction.")
    sub = parser.add_subparsers(dest="command", required=True)
    method_names = [m.replace("_", "-") for m in METHODS]

    fit = sub.add_parser("fit", help="estimate reduction directions from a CSV file")
    fit.add_argument("input")
    fit.add_argument("--response", required=True)
    fit.add_argument("--predictors", help="comma-separated predictor columns (default: all others)")
    fit.add_argument("--method", default="cp-dr", choices=method_names + list(METHODS))
    fit.add_argument("--slices", type=int, default=5)
    fit.add_argument("--dim", type=_dim, default="auto")
    fit.add_argument("--dmax", type=int, default=DEFAULT_DMAX)
    fit.add_argument("--seed", type=int, default=0, help="accepted for symmetry; fitting is deterministic")
    fit.add_argument("--standardize", action="store_true",
                     help="rescale predictors to unit robust-scatter diagonal first")
    fit.add_argument("--out", required=True)
    fit.set_defaults(func=cmd_fit)

    proj = sub.add_parser("project", help="compute reduced indices for a CSV file")
    proj.add_argument("input")
    proj.add_argument("--model-file", required=True)
    proj.add_argument("--out", required=True)
    proj.set_defaults(func=cmd_project)

    sim = sub.add_parser("simulate", help="run the Monte Carlo benchmark grid")
    sim.add_argument("--models", type=_csv_choice(MODELS), default=list(MODELS))
    sim.add_argument("--dfs", type=_df_list, default=[float("inf"), 5.0, 3.0, 1.0])
    sim.add_argument("--families", type=_csv_choice(FAMILIES), default=["elliptical_t"])
    sim.add_argument("--n", type=_int_list, default=[400])
    sim.add_argument("--p", type=int, default=20)
    sim.add_argument("--reps", type=int, default=100)
    sim.add_argument("--methods", type=_method_list, default=list(METHODS))
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--out", required=True)
    sim.add_argument("--dhat-out")
    sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"cpdr: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CPDRError as exc:
        print(f"cpdr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
