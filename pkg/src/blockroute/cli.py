"""Command line entry point: ``blockroute <mode> [--config FILE] [flags]``.

Exit codes: 0 success, 2 config error, 3 generation/placement failure,
4 routing/quotient error, 5 budget infeasible.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, fields

import yaml

from . import experiments as ex
from .errors import BlockRouteError, ConfigError


def _fmt(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def to_csv(rows: list[dict], schema: str) -> str:
    buf = io.StringIO()
    buf.write(f"# {schema}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def _flatten(prefix: str, obj, out: list[dict]):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append({"item": prefix, "value": obj})


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise ConfigError(f"{path}: expected a flat key-value document")
    return data


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockroute", description=__doc__.splitlines()[0])
    parser.add_argument("mode", choices=ex.MODES)
    parser.add_argument("--config", help="flat YAML/JSON key-value file; flags override it")
    parser.add_argument("--seed", dest="base_seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"))
    parser.add_argument("--parallelism", type=int)
    parser.add_argument("--n", dest="n_vertices", type=int)
    parser.add_argument("--d-prime", type=int)
    parser.add_argument("--d-prime-list", type=_int_list)
    parser.add_argument("--r", type=int)
    parser.add_argument("--d-c", type=int)
    parser.add_argument("--d-c-list", type=_int_list)
    parser.add_argument("--n-l", type=int)
    parser.add_argument("--guard", type=int)
    parser.add_argument("--p-phys", type=float)
    parser.add_argument("--p-phys-rows", type=_float_list)
    parser.add_argument("--p-target", type=float)
    parser.add_argument("--c-circ", type=float)
    parser.add_argument("--timing", action="store_true", default=None,
                        help="include wall_time_ms (makes output non-reproducible)")
    return parser


def resolve_config(argv: list[str]) -> ex.ExperimentConfig:
    args = build_parser().parse_args(argv)
    data = load_config(args.config)
    data["mode"] = args.mode
    names = {f.name for f in fields(ex.ExperimentConfig)}
    for k, v in vars(args).items():
        if k in names and v is not None:
            data[k] = v
    try:
        cfg = ex.ExperimentConfig.from_mapping(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def render(cfg: ex.ExperimentConfig) -> str:
    json_out = cfg.output_format == "json"
    if cfg.mode == "simulate":
        records, agg = ex.run_simulate(cfg)
        rows = [asdict(r) for r in records]
        if not cfg.timing:
            for row in rows:
                row.pop("wall_time_ms")
        if json_out:
            return json.dumps({"schema": ex.SCHEMA, "records": rows, "aggregate": agg}, indent=2) + "\n"
        return to_csv(rows, ex.SCHEMA) + to_csv([agg], "blockroute.aggregate/1")
    if cfg.mode == "sweep":
        rows, schema = ex.run_sweep(cfg), "blockroute.sweep/1"
    elif cfg.mode == "regime":
        rows, schema = ex.run_regime(cfg.d_c_list, cfg.r), "blockroute.regime/1"
    elif cfg.mode == "decompose":
        rows, schema = ex.run_decompose(cfg), "blockroute.decompose/1"
    else:
        report = ex.run_ft_budget(cfg)
        if json_out:
            return json.dumps({"schema": "blockroute.ft-budget/1", **report}, indent=2) + "\n"
        flat: list[dict] = []
        _flatten("", report, flat)
        return to_csv(flat, "blockroute.ft-budget/1")
    if json_out:
        return json.dumps({"schema": schema, "rows": rows}, indent=2) + "\n"
    return to_csv(rows, schema)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = resolve_config(argv)
        text = render(cfg)
    except BlockRouteError as exc:
        print(f"blockroute: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
