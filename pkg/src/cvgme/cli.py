"""Command-line front end.

Each experiment regenerates one of the package's reference studies as
machine-readable data: a CSV with one row per sweep point and a JSON summary
embedding the witness reports.  Output is data, not rendered plots; the
``--gnuplot`` flag additionally writes a plain-text plotting script that
references the CSV, so figures can be rebuilt with no extra dependencies.

Exit codes: 0 when the run succeeded and at least one row certified,
2 when the run succeeded but nothing certified, 1 on any error (including
usage errors).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import families, numerics, witnesses
from .fock_core import DimensionError, NullStateError
from .gaussian_ops import CutoffError, ResourceLimitError

#: Fixed six-point settings set used by the kernel scan: a conjugate pair,
#: its negatives, and the shared real part with its negative.
KERNEL_SCAN_XI0 = 10.0 / 11.0 + 1j * 7.0 / 17.0
KERNEL_SCAN_XI = (
    KERNEL_SCAN_XI0,
    -KERNEL_SCAN_XI0,
    KERNEL_SCAN_XI0.conjugate(),
    -KERNEL_SCAN_XI0.conjugate(),
    complex(KERNEL_SCAN_XI0.real),
    complex(-KERNEL_SCAN_XI0.real),
)


class CliError(ValueError):
    """A fatal problem with the requested run (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1, not 2.

    Exit code 2 is reserved for "ran but nothing certified"."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


@dataclass
class ExperimentInfo:
    name: str
    flags: str
    anchor: str


@dataclass
class ExperimentResult:
    columns: list
    rows: list
    reports: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def certified_any(self) -> bool:
        return any(bool(r.get("certified")) for r in self.rows)


def parse_range(text: str):
    """Parse `start:stop:step` (inclusive, floats) or `lo..hi` (inclusive ints)."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise CliError("empty integer range %r" % text)
        return [float(k) for k in range(lo_i, hi_i + 1)]
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError("range must be start:stop:step, got %r" % text)
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise CliError("range step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise CliError("empty range %r" % text)
        return [start + k * step for k in range(count)]
    return [float(text)]


def parse_int_range(text: str):
    vals = parse_range(text)
    out = []
    for v in vals:
        if abs(v - round(v)) > 1e-9:
            raise CliError("expected integers in range, got %g" % v)
        out.append(int(round(v)))
    return out


def _fmt_number(value) -> str:
    """CSV cell formatting: '.' decimals, scientific below 1e-4."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    if abs(x) < 1e-4:
        return "%.12e" % x
    return repr(x)


def write_csv(path: str, columns, rows) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt_number(row[c]) for c in columns))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_gnuplot(path: str, csv_name: str, columns, title: str) -> None:
    x = columns[0]
    try:
        y_idx = columns.index("value") + 1
    except ValueError:
        y_idx = 2
    script = [
        "# plotting script for %s" % csv_name,
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel '%s'" % x,
        "set ylabel 'value'",
        "set title '%s'" % title,
        "plot '%s' using 1:%d with linespoints" % (csv_name, y_idx),
    ]
    if "threshold" in columns:
        script[-1] += (
            ", '%s' using 1:%d with lines dashtype 2 title 'threshold'"
            % (csv_name, columns.index("threshold") + 1)
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(script) + "\n")


def _limit_threads(n) -> None:
    if n is None:
        return
    if n < 1:
        raise CliError("--threads must be at least 1")
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ[var] = str(n)
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:
        pass


def _require_seed(args) -> int:
    if args.seed is None:
        raise CliError(
            "experiment %r is stochastic; a --seed is required" % args.experiment
        )
    return args.seed


def _budget(args) -> numerics.OptimizerBudget:
    return numerics.OptimizerBudget(
        restarts=args.restarts,
        max_evals=args.max_evals,
        tol=1e-7,
        seed=_require_seed(args),
    )


def v2d_quadrature(spec: families.FamilySpec, delta: float,
                   radius: float | None = None) -> float:
    """Absolute slice volume by midpoint quadrature of the closed-form slice."""
    if radius is None:
        radius = numerics.tail_radius(families.slice_abs_envelope(spec))
    grid = numerics.disc_grid(delta, radius)
    vals = np.abs(families.family_wigner_slice(spec, grid.centers()))
    scale = (2.0 / math.pi) * (math.pi / 2.0) ** spec.modes
    return scale * numerics.midpoint_integral(vals, delta)


def _volume_report(spec, value, estimator, extra=None) -> witnesses.WitnessReport:
    thr = witnesses.volume_threshold(spec.modes)
    params = {"quantity": "v2d", "estimator": estimator, "modes": spec.modes}
    if extra:
        params.update(extra)
    return witnesses.WitnessReport(
        witness="A",
        value=value,
        threshold=thr,
        certified=value > thr + witnesses.GUARD,
        family=spec.label(),
        params=params,
        rigorous_error=0.0 if estimator == "closed_form" else None,
    )


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------


def _run_wstate_violation(args) -> ExperimentResult:
    rows, reports = [], []
    for m in parse_int_range(args.m_range):
        spec = families.w_family(m)
        value = families.v2d_closed_form(spec)
        thr = witnesses.volume_threshold(m)
        rep = _volume_report(spec, value, "closed_form")
        rows.append(
            {
                "m": m,
                "value": value,
                "threshold": thr,
                "violation": value - thr,
                "certified": rep.certified,
            }
        )
        reports.append(rep)
    return ExperimentResult(
        ["m", "value", "threshold", "violation", "certified"], rows, reports
    )


def _run_dicke_violation(args) -> ExperimentResult:
    rows, reports = [], []
    for m in parse_int_range(args.m_range):
        spec = families.dicke2_family(m)
        value = families.v2d_closed_form(spec)
        thr = witnesses.volume_threshold(m)
        rep = _volume_report(spec, value, "closed_form")
        rows.append(
            {
                "m": m,
                "value": value,
                "threshold": thr,
                "violation": value - thr,
                "certified": rep.certified,
            }
        )
        reports.append(rep)
    return ExperimentResult(
        ["m", "value", "threshold", "violation", "certified"], rows, reports
    )


def _run_cat_violation(args) -> ExperimentResult:
    rows, reports = [], []
    for m in parse_int_range(args.m_range):
        thr = witnesses.volume_threshold(m)
        best = None
        for gamma in parse_range(args.gamma_range):
            spec = families.cat_family(m, gamma, eta=args.eta)
            value = v2d_quadrature(spec, args.delta)
            rows.append(
                {
                    "m": m,
                    "gamma": gamma,
                    "value": value,
                    "threshold": thr,
                    "violation": value - thr,
                    "certified": value > thr + witnesses.GUARD,
                }
            )
            if best is None or value > best[1]:
                best = (spec, value)
        reports.append(
            _volume_report(best[0], best[1], "quadrature", {"delta": args.delta})
        )
    return ExperimentResult(
        ["m", "gamma", "value", "threshold", "violation", "certified"],
        rows,
        reports,
    )


def _run_asym_volumes(args) -> ExperimentResult:
    rows, reports = [], []
    for tag in ("psi1", "psi2"):
        spec = families.psi_family(tag)
        value = v2d_quadrature(spec, args.delta, radius=args.r)
        thr = witnesses.volume_threshold(spec.modes)
        rep = _volume_report(spec, value, "quadrature", {"delta": args.delta})
        rows.append(
            {
                "state": tag,
                "value": value,
                "threshold": thr,
                "violation": value - thr,
                "certified": rep.certified,
            }
        )
        reports.append(rep)
    return ExperimentResult(
        ["state", "value", "threshold", "violation", "certified"], rows, reports
    )


def _run_wstate_loss(args) -> ExperimentResult:
    rows, reports = [], []
    for m in parse_int_range(args.m_range):
        thr = witnesses.volume_threshold(m)

        def detects(eta, m=m, thr=thr):
            spec = families.w_family(m, eta=eta)
            return v2d_quadrature(spec, args.delta) > thr

        lossless = families.w_family(m)
        value0 = v2d_quadrature(lossless, args.delta)
        try:
            eta_max = numerics.bisect_threshold(detects, 0.0, 0.5, args.tol)
            found = True
        except ValueError:
            eta_max = float("nan")
            found = False
        rows.append(
            {
                "m": m,
                "eta_max": eta_max,
                "value": value0,
                "threshold": thr,
                "violation": value0 - thr,
                "certified": found and value0 > thr + witnesses.GUARD,
            }
        )
        reports.append(
            _volume_report(
                lossless, value0, "quadrature",
                {"delta": args.delta, "eta_max": eta_max},
            )
        )
    return ExperimentResult(
        ["m", "eta_max", "value", "threshold", "violation", "certified"],
        rows,
        reports,
    )


def _run_cat_loss(args) -> ExperimentResult:
    rows, reports = [], []
    m = args.m
    thr = witnesses.volume_threshold(m)
    for gamma in parse_range(args.gamma_range):

        def detects(eta, gamma=gamma):
            spec = families.cat_family(m, gamma, eta=eta)
            return v2d_quadrature(spec, args.delta) > thr

        lossless = families.cat_family(m, gamma)
        value0 = v2d_quadrature(lossless, args.delta)
        try:
            eta_max = numerics.bisect_threshold(detects, 0.0, 0.5, args.tol)
            found = True
        except ValueError:
            eta_max = float("nan")
            found = False
        rows.append(
            {
                "gamma": gamma,
                "eta_max": eta_max,
                "value": value0,
                "threshold": thr,
                "violation": value0 - thr,
                "certified": found and value0 > thr + witnesses.GUARD,
            }
        )
        reports.append(
            _volume_report(
                lossless, value0, "quadrature",
                {"delta": args.delta, "eta_max": eta_max},
            )
        )
    return ExperimentResult(
        ["gamma", "eta_max", "value", "threshold", "violation", "certified"],
        rows,
        reports,
    )


def _run_rmin_scan(args) -> ExperimentResult:
    rows, reports = [], []
    m = args.m
    thr = witnesses.volume_threshold(m)
    for eta in parse_range(args.eta_range):
        spec = families.w_family(m, eta=eta)

        def detects(r, spec=spec):
            return v2d_quadrature(spec, args.delta, radius=r) > thr

        try:
            r_min = numerics.monotone_boundary(detects, args.r_lo, args.r_hi, args.tol)
            value = v2d_quadrature(spec, args.delta, radius=r_min + args.tol)
            found = True
        except ValueError:
            r_min = float("nan")
            value = v2d_quadrature(spec, args.delta, radius=args.r_hi)
            found = value > thr + witnesses.GUARD
        rows.append(
            {
                "eta": eta,
                "r_min": r_min,
                "value": value,
                "threshold": thr,
                "violation": value - thr,
                "certified": found and value > thr + witnesses.GUARD,
            }
        )
        reports.append(
            _volume_report(
                spec, value, "quadrature",
                {"delta": args.delta, "r_min": r_min},
            )
        )
    return ExperimentResult(
        ["eta", "r_min", "value", "threshold", "violation", "certified"],
        rows,
        reports,
    )


def _run_numint(args) -> ExperimentResult:
    spec = families.parse_family(args.family)
    slice_fn = lambda a: families.family_wigner_slice(spec, a)
    deltas = parse_range(args.delta_range) if args.delta_range else [args.delta]
    rows, reports = [], []
    for delta in deltas:
        grid = numerics.disc_grid(delta, args.r, energy_bound=args.energy)
        rep = witnesses.witness_a(slice_fn, grid, spec.modes, family=spec.label())
        err = rep.params["error"]
        rows.append(
            {
                "delta": delta,
                "value": rep.value,
                "error": err,
                "threshold": rep.threshold,
                "violation": rep.value - err - rep.threshold,
                "certified": rep.certified,
            }
        )
        reports.append(rep)
    return ExperimentResult(
        ["delta", "value", "error", "threshold", "violation", "certified"],
        rows,
        reports,
    )


def _run_settings_w(args) -> ExperimentResult:
    spec = families.w_family(args.m, eta=args.eta)
    rep = witnesses.optimize_witness_b(spec, args.n_points, _budget(args))
    row = {
        "n_points": args.n_points,
        "value": rep.value,
        "threshold": rep.threshold,
        "violation": rep.value - rep.threshold,
        "n_settings": rep.n_settings,
        "certified": rep.certified,
    }
    return ExperimentResult(
        ["n_points", "value", "threshold", "violation", "n_settings", "certified"],
        [row],
        [rep],
    )


def _run_settings_cat(args) -> ExperimentResult:
    spec = families.cat_family(args.m, args.gamma, eta=args.eta)
    rep = witnesses.optimize_witness_b(spec, args.n_points, _budget(args))
    row = {
        "n_points": args.n_points,
        "value": rep.value,
        "threshold": rep.threshold,
        "violation": rep.value - rep.threshold,
        "n_settings": rep.n_settings,
        "certified": rep.certified,
    }
    return ExperimentResult(
        ["n_points", "value", "threshold", "violation", "n_settings", "certified"],
        [row],
        [rep],
    )


def zeta_to_eta(zeta: float, modes: int) -> float:
    """Collective-noise parameter -> per-mode transmissivity loss."""
    return (2.0 * (modes - 1) * zeta - (modes - 2)) / modes


def _run_zeta_scan(args) -> ExperimentResult:
    m = args.m
    kernel = families.vacuum_kernel(m - 2)
    budget = _budget(args)
    rows, reports, skipped = [], [], []
    for zeta in parse_range(args.zeta_range):
        eta = zeta_to_eta(zeta, m)
        if eta < 0.0 or eta > 1.0:
            skipped.append(zeta)
            continue
        spec = families.w_family(m, eta=eta)
        rep = witnesses.optimize_witness_e(spec, kernel, args.n_points, budget)
        rows.append(
            {
                "zeta": zeta,
                "eta": eta,
                "value": rep.value,
                "threshold": rep.threshold,
                "violation": rep.value - rep.threshold,
                "certified": rep.certified,
            }
        )
        reports.append(rep)
    notes = {"skipped_zeta": skipped} if skipped else {}
    return ExperimentResult(
        ["zeta", "eta", "value", "threshold", "violation", "certified"],
        rows,
        reports,
        notes,
    )


def kernel_scan_values(spec: families.FamilySpec, s_values) -> np.ndarray:
    """Trace norm of C o K(s) on the fixed six-point settings set."""
    if spec.modes != 3:
        raise CliError("the kernel scan uses a single squeezed ancilla (M = 3)")
    xi = np.asarray(KERNEL_SCAN_XI, dtype=complex)
    diffs = xi[:, None] - xi[None, :]
    c_mat = families.family_c_entry(spec, diffs) / xi.size
    out = np.empty(len(s_values))
    for k, s in enumerate(s_values):
        kernel = families.squeezed_kernel(1, s)
        mat = c_mat * families.kernel_c_entry(kernel, diffs)
        mat = 0.5 * (mat + mat.conj().T)
        out[k] = float(np.sum(np.abs(np.linalg.eigvalsh(mat))))
    return out


def _run_kernel_scan(args) -> ExperimentResult:
    spec = families.parse_family(args.family)
    s_values = parse_range(args.s_range)
    values = kernel_scan_values(spec, s_values)
    rows = []
    for s, value in zip(s_values, values):
        rows.append(
            {
                "s": s,
                "value": float(value),
                "threshold": 1.0,
                "violation": float(value) - 1.0,
                "certified": bool(value > 1.0 + witnesses.GUARD),
            }
        )
    k_best = int(np.argmax(values))
    kernel = families.squeezed_kernel(1, s_values[k_best])
    rep = witnesses.witness_e(
        lambda d: families.family_c_entry(spec, d),
        KERNEL_SCAN_XI,
        kernel,
        spec.modes,
        family=spec.label(),
    )
    notes = {"s_at_max": s_values[k_best], "max_value": float(values[k_best])}
    return ExperimentResult(
        ["s", "value", "threshold", "violation", "certified"], rows, [rep], notes
    )


def _run_mc_witness4(args) -> ExperimentResult:
    seed = _require_seed(args)
    spec = families.parse_family(args.family)
    if spec.tag != "w":
        raise CliError(
            "only the W family has a tabulated collective-mode distribution; "
            "got %r" % spec.tag
        )
    m = spec.modes
    scale = args.cov_scale
    if scale is None:
        scale = (m - 2.0) / (4.0 * m**2)
    alpha = complex(args.alpha)
    scheme = witnesses.RandomDisplacementScheme(
        alpha=alpha, cov=((scale, 0.0), (0.0, scale)), modes=m
    )
    rep = witnesses.witness_d(spec, scheme, args.shots, seed)
    err = 3.0 * rep.stderr
    row = {
        "n_samples": args.shots,
        "value": rep.value,
        "error": err,
        "threshold": rep.threshold,
        "violation": rep.threshold - rep.value - err,
        "certified": rep.certified,
    }
    return ExperimentResult(
        ["n_samples", "value", "error", "threshold", "violation", "certified"],
        [row],
        [rep],
    )


# ---------------------------------------------------------------------------
# registry / parser
# ---------------------------------------------------------------------------

EXPERIMENTS = {
    "wstate-violation": ExperimentInfo(
        "wstate-violation", "--m-range",
        "violation-vs-mode-count curve for W states"),
    "cat-violation": ExperimentInfo(
        "cat-violation", "--m-range --gamma-range --eta --delta",
        "violation-vs-cat-size curves"),
    "dicke-violation": ExperimentInfo(
        "dicke-violation", "--m-range",
        "violation-vs-mode-count curve for two-excitation Dicke states"),
    "asym-volumes": ExperimentInfo(
        "asym-volumes", "--delta --r",
        "slice-volume table for the two asymmetric three-mode states"),
    "wstate-loss": ExperimentInfo(
        "wstate-loss", "--m-range --delta --tol",
        "loss-threshold curve for W states"),
    "cat-loss": ExperimentInfo(
        "cat-loss", "--m --gamma-range --delta --tol",
        "loss-threshold-vs-cat-size curve"),
    "rmin-scan": ExperimentInfo(
        "rmin-scan", "--m --eta-range --delta --tol",
        "minimal certification radius against loss"),
    "numint": ExperimentInfo(
        "numint", "--family --delta --delta-range --r --energy",
        "discretized-integration certification study"),
    "settings-w": ExperimentInfo(
        "settings-w", "--m --eta --n-points --restarts --max-evals --seed",
        "optimized settings-matrix certification for lossy W states"),
    "settings-cat": ExperimentInfo(
        "settings-cat",
        "--m --gamma --eta --n-points --restarts --max-evals --seed",
        "optimized settings-matrix certification for lossy cat states"),
    "zeta-scan": ExperimentInfo(
        "zeta-scan", "--m --zeta-range --n-points --restarts --max-evals --seed",
        "kernel-witness value against the collective-noise parameter"),
    "kernel-scan": ExperimentInfo(
        "kernel-scan", "--family --s-range",
        "kernel-witness value against the squeezing of the kernel"),
    "mc-witness4": ExperimentInfo(
        "mc-witness4", "--family --alpha --cov-scale --shots --seed",
        "Monte-Carlo randomized-displacement certification"),
}

_RUNNERS = {
    "wstate-violation": _run_wstate_violation,
    "cat-violation": _run_cat_violation,
    "dicke-violation": _run_dicke_violation,
    "asym-volumes": _run_asym_volumes,
    "wstate-loss": _run_wstate_loss,
    "cat-loss": _run_cat_loss,
    "rmin-scan": _run_rmin_scan,
    "numint": _run_numint,
    "settings-w": _run_settings_w,
    "settings-cat": _run_settings_cat,
    "zeta-scan": _run_zeta_scan,
    "kernel-scan": _run_kernel_scan,
    "mc-witness4": _run_mc_witness4,
}

STOCHASTIC = frozenset({"settings-w", "settings-cat", "zeta-scan", "mc-witness4"})


def list_experiments():
    """Stable-ordered table of experiment names, flags, and output anchors."""
    return [EXPERIMENTS[name] for name in EXPERIMENTS]


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=None, metavar="U64",
                     help="RNG seed (required for stochastic experiments)")
    sub.add_argument("--out", default=".", metavar="DIR",
                     help="output directory (default: current)")
    sub.add_argument("--threads", type=int, default=None, metavar="N",
                     help="cap the BLAS/OpenMP thread pools")
    sub.add_argument("--format", choices=("csv", "json", "both"), default="both",
                     help="which files to write (default: both)")
    sub.add_argument("--gnuplot", action="store_true",
                     help="also write a plotting script referencing the CSV")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cvgme",
        description="Phase-space certification of genuine multipartite "
                    "entanglement: reference experiments as CSV/JSON data.",
    )
    sub = parser.add_subparsers(dest="experiment", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("list", help="list available experiments")
    p.set_defaults(experiment="list")

    p = sub.add_parser("wstate-violation",
                       help=EXPERIMENTS["wstate-violation"].anchor)
    p.add_argument("--m-range", default="3..8")
    _add_common(p)

    p = sub.add_parser("cat-violation", help=EXPERIMENTS["cat-violation"].anchor)
    p.add_argument("--m-range", default="3..3")
    p.add_argument("--gamma-range", default="0.1:2:0.05")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.01)
    _add_common(p)

    p = sub.add_parser("dicke-violation",
                       help=EXPERIMENTS["dicke-violation"].anchor)
    p.add_argument("--m-range", default="3..8")
    _add_common(p)

    p = sub.add_parser("asym-volumes", help=EXPERIMENTS["asym-volumes"].anchor)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--r", type=float, default=3.0)
    _add_common(p)

    p = sub.add_parser("wstate-loss", help=EXPERIMENTS["wstate-loss"].anchor)
    p.add_argument("--m-range", default="3..6")
    p.add_argument("--delta", type=float, default=0.005)
    p.add_argument("--tol", type=float, default=2e-4)
    _add_common(p)

    p = sub.add_parser("cat-loss", help=EXPERIMENTS["cat-loss"].anchor)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--gamma-range", default="0.5:1.5:0.25")
    p.add_argument("--delta", type=float, default=0.005)
    p.add_argument("--tol", type=float, default=5e-4)
    _add_common(p)

    p = sub.add_parser("rmin-scan", help=EXPERIMENTS["rmin-scan"].anchor)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--eta-range", default="0:0.3:0.05")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--r-lo", type=float, default=0.2)
    p.add_argument("--r-hi", type=float, default=3.0)
    _add_common(p)

    p = sub.add_parser("numint", help=EXPERIMENTS["numint"].anchor)
    p.add_argument("--family", default="w:M=3")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--delta-range", default=None)
    p.add_argument("--r", type=float, default=0.9)
    p.add_argument("--energy", type=float, default=None,
                   help="mean-photon bound enabling the rigorous error ledger")
    _add_common(p)

    p = sub.add_parser("settings-w", help=EXPERIMENTS["settings-w"].anchor)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--eta", type=float, default=0.03)
    p.add_argument("--n-points", type=int, default=4)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-evals", type=int, default=2000)
    _add_common(p)

    p = sub.add_parser("settings-cat", help=EXPERIMENTS["settings-cat"].anchor)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--n-points", type=int, default=5)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-evals", type=int, default=2000)
    _add_common(p)

    p = sub.add_parser("zeta-scan", help=EXPERIMENTS["zeta-scan"].anchor)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--zeta-range", default="0.25:0.6:0.025")
    p.add_argument("--n-points", type=int, default=6)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-evals", type=int, default=1500)
    _add_common(p)

    p = sub.add_parser("kernel-scan", help=EXPERIMENTS["kernel-scan"].anchor)
    p.add_argument("--family", default="cat:M=3,gamma=1")
    p.add_argument("--s-range", default="0.2:1.2:0.005")
    _add_common(p)

    p = sub.add_parser("mc-witness4", help=EXPERIMENTS["mc-witness4"].anchor)
    p.add_argument("--family", default="w:M=3")
    p.add_argument("--alpha", default="0",
                   help="phase-space point, python complex syntax")
    p.add_argument("--cov-scale", type=float, default=None,
                   help="isotropic covariance scale (default: soundness bound)")
    p.add_argument("--shots", type=int, default=100000)
    _add_common(p)

    return parser


def _config_dict(args) -> dict:
    skip = {"experiment"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = val if not isinstance(val, (list, tuple)) else list(val)
    return out


def run_experiment(args) -> int:
    """Run one experiment, write its artifacts, and return the exit code."""
    name = args.experiment
    if name in STOCHASTIC:
        _require_seed(args)
    _limit_threads(args.threads)
    result = _RUNNERS[name](args)

    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, name)
    csv_name = name + ".csv"
    want_csv = args.format in ("csv", "both") or args.gnuplot
    if want_csv:
        write_csv(base + ".csv", result.columns, result.rows)
    if args.format in ("json", "both"):
        payload = {
            "experiment": name,
            "config": _config_dict(args),
            "columns": result.columns,
            "rows": result.rows,
            "certified_any": result.certified_any,
            "reports": [rep.to_json_dict() for rep in result.reports],
        }
        payload.update(result.notes)
        with open(base + ".json", "w", encoding="ascii") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")
    if args.gnuplot:
        write_gnuplot(base + ".gp", csv_name, result.columns, name)

    n_cert = sum(1 for r in result.rows if r.get("certified"))
    print(
        "%s: %d row(s), %d certified -> %s"
        % (name, len(result.rows), n_cert, args.out)
    )
    return 0 if result.certified_any else 2


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError("not JSON serializable: %r" % type(obj))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.experiment == "list":
        for info in list_experiments():
            print("%-18s %s" % (info.name, info.anchor))
            print("%-18s   flags: %s" % ("", info.flags))
        return 0
    try:
        return run_experiment(args)
    except (CliError, ValueError, NullStateError, DimensionError,
            CutoffError, OSError) as exc:
        print("cvgme: error: %s" % exc, file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print("cvgme: resource error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
