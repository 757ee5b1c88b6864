"""Command-line driver for the benchmark problems.

Exit codes: 0 success, 1 invalid configuration, 2 solver failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import importlib
import io
import math
import sys
import warnings
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .diagnostics import evaluation_points
from .problems import REFERENCE_TABLES, Example, ExampleRun, get_example, run_example

__all__ = ["RunConfig", "ConfigError", "load_config_file", "run", "reproduce_tables",
           "read_grid_csv", "main", "GRID_HEADER"]

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3
GRID_HEADER = ["n_or_x", "k", "m", "t", "s", "u_approx", "u_exact", "abs_err"]
EMIT_CHOICES = ("table", "grid", "slice")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    example: str = "1"
    M: int = 50
    L: int = 20
    n_max: int = 8
    q: int | None = None
    j0: int = 5
    T: float | None = None
    emit: str = "table"
    slice_spec: str | None = None
    out: str | None = None
    factory: str | None = None
    compare_paper: bool = False

    def validate(self):
        if self.example != "custom":
            try:
                get_example(self.example)
            except KeyError as exc:
                raise ConfigError(exc.args[0]) from None
        elif not self.factory:
            raise ConfigError("example = custom needs factory = module:attribute")
        for name in ("M", "L", "n_max", "j0"):
            if getattr(self, name) < 1 and not (name == "j0" and self.j0 == 0):
                raise ConfigError(f"{name} must be positive")
        if self.q is not None and self.q < 1:
            raise ConfigError("q must be at least 1")
        if self.T is not None and not self.T > 0:
            raise ConfigError("T must be positive")
        if self.emit not in EMIT_CHOICES:
            raise ConfigError(f"emit must be one of {EMIT_CHOICES}")
        if self.slice_spec is not None:
            parse_slice(self.slice_spec)
        return self


_KEY_ALIASES = {"nmax": "n_max", "n_max": "n_max", "slice": "slice_spec",
                "compare-paper": "compare_paper", "compare_paper": "compare_paper"}
_FIELD_TYPES = {"M": int, "L": int, "n_max": int, "q": int, "j0": int, "T": float}


def _coerce(key, raw):
    if key == "compare_paper":
        low = raw.strip().lower()
        if low not in ("1", "0", "true", "false", "yes", "no"):
            raise ConfigError(f"compare_paper: not a boolean: {raw!r}")
        return low in ("1", "true", "yes")
    conv = _FIELD_TYPES.get(key)
    if conv is None:
        return raw
    try:
        return conv(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config_file(path) -> dict:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def parse_number(text: str) -> float:
    """Float literal, optionally written as a fraction and with ``pi`` (``pi/4``, ``3*pi/2``)."""
    expr = text.strip().lower().replace(" ", "")

    def atom(tok):
        if not tok:
            raise ConfigError(f"bad number {text!r}")
        val = 1.0
        for factor in tok.split("*"):
            if factor == "pi":
                val *= math.pi
            else:
                try:
                    val *= float(factor)
                except ValueError:
                    raise ConfigError(f"bad number {text!r}") from None
        return val

    num, _, den = expr.partition("/")
    value = atom(num)
    if den:
        d = atom(den)
        if d == 0:
            raise ConfigError(f"division by zero in {text!r}")
        value /= d
    return value


def parse_slice(spec: str):
    axis, sep, raw = spec.partition("=")
    axis = axis.strip()
    if not sep or axis not in ("t", "s", "x"):
        raise ConfigError(f"slice must look like t=0.5, s=0.5 or x=pi/4, got {spec!r}")
    return axis, parse_number(raw)


def _resolve_example(config: RunConfig) -> Example:
    if config.example != "custom":
        return get_example(config.example)
    module, _, attr = config.factory.partition(":")
    try:
        obj = getattr(importlib.import_module(module), attr)
    except (ImportError, AttributeError) as exc:
        raise ConfigError(f"cannot load factory {config.factory!r}: {exc}") from None
    ex = obj() if callable(obj) and not isinstance(obj, Example) else obj
    if not isinstance(ex, Example):
        raise ConfigError("factory must yield an ultraparabolic.problems.Example")
    return ex


def _solve(config: RunConfig) -> ExampleRun:
    ex = _resolve_example(config)
    return run_example(ex, config.M, L=config.L, q=config.q, n_max=config.n_max,
                       j0=config.j0, T=config.T)


def _fmt(v) -> str:
    return f"{v:.17g}"


def _sci(v) -> str:
    return f"{v:.8E}"


def summary_line(result: ExampleRun, compare: bool = False) -> str:
    err = result.error
    q = "-" if err.q is None else str(err.q)
    j0 = "-" if err.q is None else str(err.j0)
    line = (f"example={result.example.id} M={err.M} L={err.L} q={q} j0={j0} "
            f"l2={_sci(err.l2)} linf={_sci(err.linf)}")
    if compare:
        ref = result.example.reference(err.M, err.q)
        if ref is None:
            line += " published=n/a"
        else:
            line += (f" published_l2={_sci(ref[0])} published_linf={_sci(ref[1])}"
                     f" rel_dev_l2={err.l2 / ref[0] - 1:+.4f}"
                     f" rel_dev_linf={err.linf / ref[1] - 1:+.4f}")
    return line


def write_grid(result: ExampleRun, stream, L: int):
    """All (L+1) M^2 evaluation points, k-major then m then x."""
    field, exact = result.field, result.example.exact
    xs, _ = evaluation_points(field.grid, L)
    vals = field.values(xs)
    nodes = field.grid.nodes
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(GRID_HEADER)
    M = field.grid.M
    for k in range(1, M + 1):
        for m in range(1, M + 1):
            ue = np.broadcast_to(exact(xs, nodes[k], nodes[m]), xs.shape)
            for j, x in enumerate(xs):
                ua = vals[j, k, m]
                writer.writerow([_fmt(x), k, m, _fmt(nodes[k]), _fmt(nodes[m]), _fmt(ua),
                                 _fmt(ue[j]), _fmt(abs(ue[j] - ua))])


def write_slice(result: ExampleRun, stream, L: int, axis: str, value: float):
    """Figure-style 2-D slice: fixed t or s gives an (x, other time) surface; fixed x a (t, s) one."""
    field, exact = result.field, result.example.exact
    grid = field.grid
    nodes = grid.nodes
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(GRID_HEADER)
    M = grid.M
    if axis == "x":
        if not 0.0 <= value <= math.pi:
            raise ConfigError("x slice must lie in [0, pi]")
        vals = field.values([value])[0]
        for k in range(1, M + 1):
            for m in range(1, M + 1):
                ue = float(exact(value, nodes[k], nodes[m]))
                writer.writerow([_fmt(value), k, m, _fmt(nodes[k]), _fmt(nodes[m]),
                                 _fmt(vals[k, m]), _fmt(ue), _fmt(abs(ue - vals[k, m]))])
        return
    try:
        fixed = grid.index_of(value)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if fixed == 0:
        raise ConfigError("slice time must be positive")
    xs, _ = evaluation_points(grid, L)
    vals = field.values(xs)
    for other in range(1, M + 1):
        k, m = (fixed, other) if axis == "t" else (other, fixed)
        ue = np.broadcast_to(exact(xs, nodes[k], nodes[m]), xs.shape)
        for j, x in enumerate(xs):
            ua = vals[j, k, m]
            writer.writerow([_fmt(x), k, m, _fmt(nodes[k]), _fmt(nodes[m]), _fmt(ua),
                             _fmt(ue[j]), _fmt(abs(ue[j] - ua))])


def read_grid_csv(path):
    """Read a grid or slice CSV back as a dict of column arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != GRID_HEADER:
            raise ValueError(f"unexpected header {header}")
        rows = list(reader)
    cols = {}
    for i, name in enumerate(GRID_HEADER):
        conv = int if name in ("k", "m") else float
        cols[name] = np.array([conv(r[i]) for r in rows])
    return cols


def _table_row_csv(result: ExampleRun, compare: bool) -> str:
    err = result.error
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    head = ["example", "q", "M", "L", "j0", "l2", "linf"]
    row = [result.example.id, "" if err.q is None else err.q, err.M, err.L,
           "" if err.q is None else err.j0, _sci(err.l2), _sci(err.linf)]
    if compare:
        head += ["published_l2", "published_linf", "rel_dev_l2", "rel_dev_linf"]
        ref = result.example.reference(err.M, err.q)
        if ref is None:
            row += ["", "", "", ""]
        else:
            row += [_sci(ref[0]), _sci(ref[1]), f"{err.l2 / ref[0] - 1:.6E}",
                    f"{err.linf / ref[1] - 1:.6E}"]
    writer.writerow(head)
    writer.writerow(row)
    return buf.getvalue()


def _write_text(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    """Solve one configured problem and emit the requested output."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        config.validate()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = _solve(config)
        for w in caught:
            print(f"warning: {w.message}", file=stderr)
    except ConfigError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=stderr)
        return EXIT_SOLVER

    summary = summary_line(result, config.compare_paper)
    try:
        if config.emit == "table":
            print(summary, file=stdout)
            if config.out:
                _write_text(config.out, _table_row_csv(result, config.compare_paper))
            return EXIT_OK
        buf = io.StringIO()
        if config.emit == "grid":
            write_grid(result, buf, config.L)
        else:
            spec = config.slice_spec
            axis, value = (parse_slice(spec) if spec
                           else (result.example.slice_axis, result.example.slice_value))
            write_slice(result, buf, config.L, axis, value)
        if config.out:
            _write_text(config.out, buf.getvalue())
            print(summary, file=stdout)
        else:
            stdout.write(buf.getvalue())
            print(summary, file=stderr)
    except ConfigError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O failure: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


def _column_label(q, M):
    return f"M={M}" if q is None else f"q={q},M={M}"


def table_csv(example_id: int, results) -> str:
    """Wide table: one column per (q, M) cell, computed and published rows."""
    ref = REFERENCE_TABLES[example_id]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row"] + [_column_label(q, M) for q, M, _, _ in ref])
    l2 = [r.error.l2 for r in results]
    linf = [r.error.linf for r in results]
    writer.writerow(["l2"] + [_sci(v) for v in l2])
    writer.writerow(["linf"] + [_sci(v) for v in linf])
    writer.writerow(["published_l2"] + [_sci(r[2]) for r in ref])
    writer.writerow(["published_linf"] + [_sci(r[3]) for r in ref])
    writer.writerow(["rel_dev_l2"] + [f"{a / r[2] - 1:.6E}" for a, r in zip(l2, ref)])
    writer.writerow(["rel_dev_linf"] + [f"{a / r[3] - 1:.6E}" for a, r in zip(linf, ref)])
    return buf.getvalue()


def reproduce_tables(which, out_dir, L: int = 20, n_max: int = 8, j0: int = 5,
                     stdout=None) -> list[Path]:
    """Recompute the published error tables; writes ``table<N>.csv`` per entry."""
    stdout = sys.stdout if stdout is None else stdout
    out_dir = Path(out_dir)
    paths = []
    for example_id in sorted(set(int(w) for w in which)):
        if example_id not in REFERENCE_TABLES or not REFERENCE_TABLES[example_id]:
            raise ConfigError(f"no reference table for example {example_id}")
        results = [run_example(example_id, M, L=L, q=q, n_max=n_max, j0=j0)
                   for q, M, _, _ in REFERENCE_TABLES[example_id]]
        text = table_csv(example_id, results)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"table{example_id}.csv"
        _write_text(path, text)
        paths.append(path)
        print(f"table {example_id} -> {path}", file=stdout)
        for r in results:
            print("  " + summary_line(r, compare=True), file=stdout)
    return paths


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ultraparabolic",
                description="Spectral-characteristic solver for u_t + u_s + Lu = f(u, t, s).")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--example", help="registry problem 1-4")
    src.add_argument("--problem", metavar="FILE", help="key = value configuration file")
    p.add_argument("--M", type=int, help="time steps per axis")
    p.add_argument("--L", type=int, help="spatial intervals of the evaluation grid")
    p.add_argument("--nmax", type=int, dest="n_max", help="number of modes")
    p.add_argument("--q", type=int, help="Picard iterations (nonlinear problems)")
    p.add_argument("--j0", type=int, help="last index of the Gauss rule (j0 + 1 points)")
    p.add_argument("--T", type=float, help="time horizon override")
    p.add_argument("--emit", choices=EMIT_CHOICES)
    p.add_argument("--slice", dest="slice_spec", metavar="AXIS=VALUE")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--tables", metavar="LIST", help="comma-separated table numbers, e.g. 1,2,3,4")
    p.add_argument("--compare-paper", action="store_true", default=None,
                   dest="compare_paper", help="append published values and deviations")
    return p


def _parse_tables(text: str) -> list[int]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        which = [int(t) for t in items]
    except ValueError:
        raise ConfigError(f"--tables expects integers, got {text!r}") from None
    bad = [w for w in which if w not in REFERENCE_TABLES]
    if bad:
        raise ConfigError(f"unknown tables {bad}")
    return which


def main(argv=None) -> int:
    stdout, stderr = sys.stdout, sys.stderr
    try:
        args = build_parser().parse_args(argv)
        values = {}
        if args.problem:
            values.update(load_config_file(args.problem))
        for f in fields(RunConfig):
            v = getattr(args, f.name, None)
            if v is not None:
                values[f.name] = v
        config = replace(RunConfig(), **values)
        if args.tables is not None:
            which = _parse_tables(args.tables)
            reproduce_tables(which, config.out or ".", L=config.L, n_max=config.n_max,
                             j0=config.j0, stdout=stdout)
            return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O failure: {exc}", file=stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=stderr)
        return EXIT_SOLVER
    return run(config, stdout=stdout, stderr=stderr)


if __name__ == "__main__":
    sys.exit(main())
