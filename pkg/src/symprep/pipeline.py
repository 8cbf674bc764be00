"""End-to-end orchestration: config parsing, single runs, and sweeps.

A run executes: sample the target density, optionally cut to its left half,
encode as amplitudes, decompose to an exact MPS, build the disentangler
stack, emit the preparation circuit (plus reflection wrapper for the
symmetry method), simulate densely, and score against the full target.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .circuit import Circuit, accounting, add_reflection_wrapper, export_circuit, prep_circuit, simulate
from .disentangler import build_stack
from .dist import DistSpec, Grid, TargetDistribution, amplitudes, left_half, sample_pdf
from .metrics import MetricsReport, classical_fidelity, kl_divergence, meyer_wallach_purity
from .mps import mps_from_statevector

__all__ = [
    "ConfigError",
    "PipelineError",
    "RunConfig",
    "SweepConfig",
    "RunResult",
    "parse_config",
    "config_from_dict",
    "run",
    "run_full",
    "sweep",
    "sweep_full",
    "SWEEP_COLUMNS",
]

REPORT_FORMAT = 1

SWEEP_COLUMNS = [
    "varied_param",
    "value",
    "chi",
    "num_layers",
    "kl",
    "fidelity",
    "q_measure",
    "truncation_error",
    "residual",
    "cnot_depth_analytic",
    "error",
]

_VARY_KEYS = ("bond_dims", "qubit_counts", "layer_counts")


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


class PipelineError(RuntimeError):
    """Runtime failure inside a pipeline stage (CLI exit code 1)."""


@dataclass(frozen=True)
class RunConfig:
    dist: DistSpec
    grid: Grid
    n_qubits: int
    method: str = "symmetry"
    num_layers: int = 1
    chi_work: int | None = None
    report_path: str | None = None
    circuit_path: str | None = None
    out_format: str = "json"
    seed: int | None = None

    def __post_init__(self):
        if self.n_qubits < 3:
            raise ConfigError(f"n_qubits must be >= 3, got {self.n_qubits}")
        if self.method not in ("symmetry", "baseline"):
            raise ConfigError(f"method must be symmetry or baseline, got {self.method!r}")
        if self.num_layers < 1:
            raise ConfigError(f"num_layers must be >= 1, got {self.num_layers}")
        if self.chi_work is not None and self.chi_work < 2:
            raise ConfigError(f"chi_work must be >= 2, got {self.chi_work}")
        if self.out_format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.out_format!r}")
        if self.grid.n_qubits != self.n_qubits:
            raise ConfigError("grid qubit count does not match n_qubits")
        if self.method == "symmetry" and not self._spec_symmetric():
            raise ConfigError(
                "method=symmetry needs a density that is mirror symmetric about "
                "the grid center (or a table with assume_symmetric set)"
            )

    def _spec_symmetric(self) -> bool:
        if self.dist.kind == "table":
            return bool(self.dist.assume_symmetric)
        c = self.dist.symmetry_center()
        return abs(c - self.grid.center) <= 1e-12 * (self.grid.max - self.grid.min)


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    vary_key: str
    vary_values: tuple

    def __post_init__(self):
        if self.vary_key not in _VARY_KEYS:
            raise ConfigError(f"vary key must be one of {_VARY_KEYS}, got {self.vary_key!r}")
        vals = tuple(int(v) for v in self.vary_values)
        if not vals:
            raise ConfigError("vary list must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError(f"vary list must be strictly increasing, got {list(vals)}")
        if self.vary_key == "bond_dims":
            for v in vals:
                if v < 2 or (v & (v - 1)) != 0:
                    raise ConfigError(
                        f"bond_dims entries must be powers of two >= 2, got {v} "
                        "(each maps to num_layers = log2(chi))"
                    )
        object.__setattr__(self, "vary_values", vals)


@dataclass(frozen=True)
class RunResult:
    report: MetricsReport
    report_doc: dict
    circuit: Circuit
    state: np.ndarray
    target: TargetDistribution
    residual_history: tuple = field(default=())


def _reject_unknown(d: dict, allowed, ctx: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {ctx}")


_DIST_KEYS = {
    "normal": ("kind", "mu", "sigma2"),
    "lorentzian": ("kind", "x0", "gamma"),
    "student_t": ("kind", "nu"),
    "table": ("kind", "path", "weights", "assume_symmetric"),
}


def _dist_from_dict(d: dict) -> DistSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError("dist must be an object with a 'kind' key")
    kind = d["kind"]
    if kind not in _DIST_KEYS:
        raise ConfigError(f"unknown dist kind {kind!r}")
    _reject_unknown(d, _DIST_KEYS[kind], "dist")
    try:
        if kind == "normal":
            return DistSpec("normal", mu=float(d.get("mu", 0.0)), sigma2=float(d.get("sigma2", 1.0)))
        if kind == "lorentzian":
            return DistSpec("lorentzian", x0=float(d.get("x0", 0.0)), gamma=float(d.get("gamma", 1.0)))
        if kind == "student_t":
            return DistSpec("student_t", nu=float(d.get("nu", 1.0)))
        return DistSpec(
            "table",
            path=d.get("path"),
            weights=tuple(float(x) for x in d.get("weights", ())),
            assume_symmetric=bool(d.get("assume_symmetric", False)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _default_grid_bounds(spec: DistSpec) -> tuple[float, float]:
    # five natural scale units either side of the center of symmetry
    if spec.kind == "normal":
        s = 5.0 * math.sqrt(spec.sigma2)
        return spec.mu - s, spec.mu + s
    if spec.kind == "lorentzian":
        return spec.x0 - 5.0 * spec.gamma, spec.x0 + 5.0 * spec.gamma
    if spec.kind == "student_t":
        return -5.0 * spec.nu, 5.0 * spec.nu
    raise ConfigError("table dists need an explicit grid (no natural scale)")


def config_from_dict(doc: dict, *, assume_symmetric: bool = False) -> RunConfig | SweepConfig:
    """Validate a parsed config document. Unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    if "vary" in doc:
        _reject_unknown(doc, ("base", "vary"), "sweep config")
        if "base" not in doc:
            raise ConfigError("sweep config needs a 'base' run config")
        base = config_from_dict(doc["base"], assume_symmetric=assume_symmetric)
        if not isinstance(base, RunConfig):
            raise ConfigError("sweep base must be a run config, not another sweep")
        vary = doc["vary"]
        if not isinstance(vary, dict) or len(vary) != 1:
            raise ConfigError(f"vary must hold exactly one of {_VARY_KEYS}")
        key = next(iter(vary))
        if key not in _VARY_KEYS:
            raise ConfigError(f"vary key must be one of {_VARY_KEYS}, got {key!r}")
        return SweepConfig(base=base, vary_key=key, vary_values=tuple(vary[key]))

    allowed = (
        "dist", "grid", "n_qubits", "method", "num_layers", "chi_work", "outputs", "seed",
    )
    _reject_unknown(doc, allowed, "run config")
    if "dist" not in doc or "n_qubits" not in doc:
        raise ConfigError("run config needs at least 'dist' and 'n_qubits'")
    dist_doc = dict(doc["dist"])
    if assume_symmetric and dist_doc.get("kind") == "table":
        dist_doc["assume_symmetric"] = True
    spec = _dist_from_dict(dist_doc)

    try:
        n_qubits = int(doc["n_qubits"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"n_qubits must be an integer: {exc}") from exc

    grid_doc = doc.get("grid", {})
    if not isinstance(grid_doc, dict):
        raise ConfigError("grid must be an object")
    _reject_unknown(grid_doc, ("min", "max", "convention"), "grid")
    if "min" in grid_doc or "max" in grid_doc:
        if not ("min" in grid_doc and "max" in grid_doc):
            raise ConfigError("grid needs both min and max")
        gmin, gmax = float(grid_doc["min"]), float(grid_doc["max"])
    else:
        gmin, gmax = _default_grid_bounds(spec)
    try:
        grid = Grid(gmin, gmax, n_qubits, grid_doc.get("convention", "midpoint"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    outputs = doc.get("outputs", {})
    if not isinstance(outputs, dict):
        raise ConfigError("outputs must be an object")
    _reject_unknown(outputs, ("report_path", "circuit_path", "format"), "outputs")

    chi_work = doc.get("chi_work")
    return RunConfig(
        dist=spec,
        grid=grid,
        n_qubits=n_qubits,
        method=doc.get("method", "symmetry"),
        num_layers=int(doc.get("num_layers", 1)),
        chi_work=None if chi_work is None else int(chi_work),
        report_path=outputs.get("report_path"),
        circuit_path=outputs.get("circuit_path"),
        out_format=outputs.get("format", "json"),
        seed=None if doc.get("seed") is None else int(doc.get("seed")),
    )


def parse_config(path: str, *, assume_symmetric: bool = False) -> RunConfig | SweepConfig:
    """Load and validate a JSON config file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(doc, assume_symmetric=assume_symmetric)


def _config_echo(cfg: RunConfig) -> dict:
    d = {
        "dist": {"kind": cfg.dist.kind},
        "grid": {
            "min": cfg.grid.min,
            "max": cfg.grid.max,
            "convention": cfg.grid.convention,
        },
        "n_qubits": cfg.n_qubits,
        "method": cfg.method,
        "num_layers": cfg.num_layers,
        "chi_work": cfg.chi_work,
        "seed": cfg.seed,
    }
    if cfg.dist.kind == "normal":
        d["dist"].update(mu=cfg.dist.mu, sigma2=cfg.dist.sigma2)
    elif cfg.dist.kind == "lorentzian":
        d["dist"].update(x0=cfg.dist.x0, gamma=cfg.dist.gamma)
    elif cfg.dist.kind == "student_t":
        d["dist"].update(nu=cfg.dist.nu)
    else:
        d["dist"].update(
            path=cfg.dist.path,
            inline_weights=len(cfg.dist.weights),
            assume_symmetric=cfg.dist.assume_symmetric,
        )
    return d


def run_full(config: RunConfig) -> RunResult:
    """Execute the pipeline and return the report plus artifacts."""
    stage = "sample_pdf"
    try:
        target = sample_pdf(config.dist, config.grid)
        encode = target
        if config.method == "symmetry":
            stage = "left_half"
            encode = left_half(target)
        stage = "amplitudes"
        amp = amplitudes(encode)
        stage = "mps_from_statevector"
        m = mps_from_statevector(amp)
        stage = "build_stack"
        stack = build_stack(m, config.num_layers, config.chi_work)
        stage = "prep_circuit"
        circ = prep_circuit(stack)
        if config.method == "symmetry":
            stage = "add_reflection_wrapper"
            circ = add_reflection_wrapper(circ)
        stage = "simulate"
        psi = simulate(circ)
        stage = "metrics"
        probs = psi * psi
        stats = accounting(circ, num_layers=config.num_layers, symmetry=config.method == "symmetry")
        report = MetricsReport(
            kl_divergence=kl_divergence(target.p, probs),
            classical_fidelity=classical_fidelity(target.p, probs),
            meyer_wallach_q=meyer_wallach_purity(psi),
            truncation_error=stack.truncation_error,
            residual_infidelity=stack.residual_infidelity,
            gate_stats=stats,
        )
    except (ConfigError, PipelineError):
        raise
    except Exception as exc:
        raise PipelineError(f"stage {stage}: {exc}") from exc

    doc = {
        "artifact": {"name": "symprep", "version": __version__, "report_format": REPORT_FORMAT},
        "config": _config_echo(config),
        "metrics": {
            "kl_divergence": report.kl_divergence,
            "kl_log_base": "natural",
            "classical_fidelity": report.classical_fidelity,
            "meyer_wallach_q": report.meyer_wallach_q,
            "truncation_error": report.truncation_error,
            "residual_infidelity": report.residual_infidelity,
            "residual_history": list(stack.residual_history),
        },
        "gate_stats": {
            "cnot_count_analytic": report.gate_stats.cnot_count_analytic,
            "cnot_depth_analytic": report.gate_stats.cnot_depth_analytic,
            "two_qubit_gate_count": report.gate_stats.two_qubit_gate_count,
            "total_gate_count": report.gate_stats.total_gate_count,
            "cnot_depth_counted": report.gate_stats.cnot_depth_counted,
        },
    }
    _write_outputs(config, doc, circ)
    return RunResult(
        report=report,
        report_doc=doc,
        circuit=circ,
        state=psi,
        target=target,
        residual_history=stack.residual_history,
    )


def _write_outputs(config: RunConfig, doc: dict, circ: Circuit) -> None:
    if config.report_path:
        with open(config.report_path, "w") as fh:
            if config.out_format == "json":
                json.dump(doc, fh, indent=2)
                fh.write("\n")
            else:
                fh.write(_report_csv(doc))
    if config.circuit_path:
        fmt = "qasm_like" if config.circuit_path.endswith((".qasm", ".txt")) else "json"
        with open(config.circuit_path, "w") as fh:
            fh.write(export_circuit(circ, fmt))


def _report_csv(doc: dict) -> str:
    cols = SWEEP_COLUMNS[2:-1]  # chi .. cnot_depth_analytic
    met, cfg = doc["metrics"], doc["config"]
    row = [
        2 ** cfg["num_layers"],
        cfg["num_layers"],
        met["kl_divergence"],
        met["classical_fidelity"],
        met["meyer_wallach_q"],
        met["truncation_error"],
        met["residual_infidelity"],
        doc["gate_stats"]["cnot_depth_analytic"],
    ]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def run(config: RunConfig) -> MetricsReport:
    """Spec-level entry point: execute and return the metrics report."""
    return run_full(config).report


def _derived_config(base: RunConfig, key: str, value: int) -> RunConfig:
    kw = dict(
        dist=base.dist,
        grid=base.grid,
        n_qubits=base.n_qubits,
        method=base.method,
        num_layers=base.num_layers,
        chi_work=base.chi_work,
        report_path=None,
        circuit_path=None,
        out_format=base.out_format,
        seed=base.seed,
    )
    if key == "bond_dims":
        kw["num_layers"] = int(math.log2(value))
    elif key == "layer_counts":
        kw["num_layers"] = value
    else:
        kw["n_qubits"] = value
        kw["grid"] = Grid(base.grid.min, base.grid.max, value, base.grid.convention)
    return RunConfig(**kw)


def sweep_full(config: SweepConfig):
    """Run every point; per-point failures become rows with an error note.

    Returns (reports, rows): reports holds a MetricsReport per successful
    point, rows one CSV-ready dict per point in vary order.
    """
    reports = []
    rows = []
    for value in config.vary_values:
        row = {c: "" for c in SWEEP_COLUMNS}
        row["varied_param"] = config.vary_key
        row["value"] = value
        try:
            cfg = _derived_config(config.base, config.vary_key, value)
            res = run_full(cfg)
            rep = res.report
            reports.append(rep)
            row.update(
                chi=2**cfg.num_layers,
                num_layers=cfg.num_layers,
                kl=rep.kl_divergence,
                fidelity=rep.classical_fidelity,
                q_measure=rep.meyer_wallach_q,
                truncation_error=rep.truncation_error,
                residual=rep.residual_infidelity,
                cnot_depth_analytic=rep.gate_stats.cnot_depth_analytic,
            )
        except (ConfigError, PipelineError, ValueError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    return reports, rows


def sweep(config: SweepConfig):
    """Spec-level entry point: list of reports, CSV written if configured."""
    reports, rows = sweep_full(config)
    if config.base.report_path:
        with open(config.base.report_path, "w") as fh:
            fh.write(rows_to_csv(rows))
    return reports


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([_csv_cell(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
