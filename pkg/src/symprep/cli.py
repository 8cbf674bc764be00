"""Command-line interface.

Subcommands: run (single pipeline execution), sweep (parameter sweeps with a
CSV summary), export (circuit export), inspect-mps (decompose the encoded
state and report bond structure). Exit codes: 0 success, 2 config/validation
error, 1 runtime error.

The pipeline itself is deterministic; --seed is recorded in report metadata
only (it exists so reports produced alongside seeded property tests are
self-describing).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .circuit import export_circuit
from .dist import amplitudes, left_half, sample_pdf
from .mps import is_left_canonical, mps_from_statevector, mps_to_json
from .pipeline import (
    ConfigError,
    PipelineError,
    RunConfig,
    SweepConfig,
    parse_config,
    rows_to_csv,
    run_full,
    sweep_full,
)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="symprep",
        description="Compile reflection-symmetric distributions into low-depth "
        "state-preparation circuits and verify them classically.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats, default_format):
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", default=default_format, choices=formats)
        p.add_argument("--seed", type=int, default=None,
                       help="recorded in report metadata; the pipeline is deterministic")
        p.add_argument("--assume-symmetric", action="store_true",
                       help="treat a tabulated distribution as mirror symmetric")

    common(sub.add_parser("run", help="execute one pipeline run"), ("json", "csv"), "json")
    common(sub.add_parser("sweep", help="run a parameter sweep"), ("csv", "json"), "csv")
    common(sub.add_parser("export", help="export the preparation circuit"),
           ("json", "qasm_like"), "json")
    common(sub.add_parser("inspect-mps", help="bond structure of the encoded state"),
           ("json",), "json")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _need_run_config(cfg, command: str) -> RunConfig:
    if not isinstance(cfg, RunConfig):
        raise ConfigError(f"'{command}' needs a run config, got a sweep config")
    return cfg


def _cmd_run(args) -> int:
    cfg = _need_run_config(parse_config(args.config, assume_symmetric=args.assume_symmetric), "run")
    cfg = dataclasses.replace(
        cfg,
        report_path=args.out or cfg.report_path,
        out_format=args.format,
        seed=args.seed if args.seed is not None else cfg.seed,
    )
    res = run_full(cfg)
    if cfg.report_path:
        print(f"report written to {cfg.report_path}")
    elif args.format == "csv":
        from .pipeline import _report_csv

        sys.stdout.write(_report_csv(res.report_doc))
    else:
        print(json.dumps(res.report_doc, indent=2))
    return 0


def _cmd_sweep(args) -> int:
    cfg = parse_config(args.config, assume_symmetric=args.assume_symmetric)
    if not isinstance(cfg, SweepConfig):
        raise ConfigError("'sweep' needs a sweep config (a 'vary' section)")
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, base=dataclasses.replace(cfg.base, seed=args.seed))
    _, rows = sweep_full(cfg)
    if args.format == "json":
        _emit(json.dumps({"rows": rows}, indent=2), args.out or cfg.base.report_path)
    else:
        _emit(rows_to_csv(rows), args.out or cfg.base.report_path)
    return 0


def _cmd_export(args) -> int:
    cfg = _need_run_config(parse_config(args.config, assume_symmetric=args.assume_symmetric), "export")
    res = run_full(dataclasses.replace(cfg, report_path=None, circuit_path=None))
    _emit(export_circuit(res.circuit, args.format), args.out or cfg.circuit_path)
    return 0


def _cmd_inspect(args) -> int:
    cfg = _need_run_config(parse_config(args.config, assume_symmetric=args.assume_symmetric), "inspect-mps")
    try:
        target = sample_pdf(cfg.dist, cfg.grid)
        encode = left_half(target) if cfg.method == "symmetry" else target
        m = mps_from_statevector(amplitudes(encode))
    except ConfigError:
        raise
    except Exception as exc:
        raise PipelineError(f"inspect-mps: {exc}") from exc
    summary = {
        "n_qubits": m.n_qubits,
        "bond_dims": m.bond_dims,
        "canonical": is_left_canonical(m),
        "method": cfg.method,
    }
    print(json.dumps(summary, indent=2))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(mps_to_json(m))
        print(f"mps written to {args.out}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "export": _cmd_export,
    "inspect-mps": _cmd_inspect,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # domain validation surfaced before the pipeline wrapped it
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # unexpected runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
