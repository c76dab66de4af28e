"""Command-line front end.

Subcommands: score an image pair, render an entropy map, evaluate a manifest
against MOS, sweep window/level/stride parameters, and benchmark the engines.

Exit codes: 0 success, 2 bad arguments, 3 I/O or decode failure, 4 dimension
mismatch (including a window larger than the image), 5 zero scorable rows,
6 engine disagreement during benchmarking.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import bench as bench_mod
from . import harness, metrics
from .entropy import DEFAULT_SPEC, GRAY_MODES, WindowSpec
from .errors import (
    DecodeError,
    DimensionError,
    EngineMismatchError,
    ManifestError,
    WindowError,
)
from .imgio import load_gray, save_gray

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIMENSION = 4
EXIT_NO_ROWS = 5
EXIT_ENGINE_MISMATCH = 6


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# Output formatting.  JSON is the canonical machine format; CSV mirrors it
# column-for-column; text is for humans and not schema-stable.  Infinities
# serialize as the string "inf" and undefined values as null / "undefined".
# ---------------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _cell(value):
    if value is None:
        return "undefined"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _human_cell(value):
    if isinstance(value, float) and math.isfinite(value):
        return f"{value:.6g}"
    return _cell(value)


def _json_doc(doc):
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, list):
            return [clean(v) for v in obj]
        return _jsonable(obj)

    return json.dumps(clean(doc), indent=2) + "\n"


def _csv_table(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in header])
    return buf.getvalue()


def _text_table(rows):
    if not rows:
        return "(none)\n"
    header = list(rows[0])
    cells = [[_human_cell(row.get(col)) for col in header] for row in rows]
    widths = [max(len(col), *(len(r[i]) for r in cells)) for i, col in enumerate(header)]
    lines = ["  ".join(col.ljust(w) for col, w in zip(header, widths)).rstrip()]
    for r in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _write_output(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _emit_record(record, fmt, out):
    """One flat record: a JSON object, a one-row CSV, or key = value lines."""
    if fmt == "json":
        _write_output(_json_doc(record), out)
    elif fmt == "csv":
        _write_output(_csv_table([record]), out)
    else:
        lines = "".join(f"{key} = {_human_cell(value)}\n" for key, value in record.items())
        _write_output(lines, out)


def _emit_tables(tables, fmt, out):
    """Named tables: one JSON document, CSV file(s), or titled text tables.

    With --out, a single table goes to that file; multiple tables make it a
    directory holding one <name>.csv each.  On stdout, CSV tables are
    separated by "# <name>" comment lines.
    """
    if fmt == "json":
        doc = {name: rows for name, rows in tables}
        _write_output(_json_doc(doc), out)
        return
    if fmt == "csv":
        if out is None:
            parts = [f"# {name}\n{_csv_table(rows)}" for name, rows in tables]
            sys.stdout.write("\n".join(parts))
        elif len(tables) == 1:
            _write_output(_csv_table(tables[0][1]), out)
        else:
            out_dir = Path(out)
            out_dir.mkdir(parents=True, exist_ok=True)
            for name, rows in tables:
                (out_dir / f"{name}.csv").write_text(_csv_table(rows), encoding="utf-8")
        return
    parts = [f"{name}\n{_text_table(rows)}" for name, rows in tables]
    _write_output("\n".join(parts), out)


# ---------------------------------------------------------------------------
# Argument plumbing.
# ---------------------------------------------------------------------------


def _add_spec_flags(sub, window=DEFAULT_SPEC.win_h, levels=DEFAULT_SPEC.levels):
    sub.add_argument("--window", type=int, default=window, metavar="N", help="square window size (default %(default)s)")
    sub.add_argument("--levels", type=int, default=levels, metavar="L", help="quantization levels (default %(default)s)")
    sub.add_argument("--stride", default="window", metavar="N|window", help="window stride; 'window' means equal to the window size (default)")


def _add_io_flags(sub):
    sub.add_argument("--engine", choices=("naive", "fast"), default="fast", help="entropy engine (default %(default)s)")
    sub.add_argument("--gray", choices=GRAY_MODES, default="luma", dest="gray", help="RGB-to-gray conversion (default %(default)s)")
    sub.add_argument("--format", choices=("json", "csv", "text"), default="text", help="output format (default %(default)s)")
    sub.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")


def _spec_from_args(args):
    if args.stride == "window":
        stride = args.window
    else:
        try:
            stride = int(args.stride)
        except ValueError:
            raise ValueError(f"--stride must be an integer or 'window', got {args.stride!r}") from None
    return WindowSpec(args.window, args.window, stride, args.levels)


def _parse_metric_names(text, builtin_only):
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ValueError("no metric names given")
    if builtin_only:
        unknown = [n for n in names if n not in metrics.BUILTIN_METRICS]
        if unknown:
            raise ValueError(
                f"unknown metric(s) {', '.join(unknown)}; available: {', '.join(metrics.BUILTIN_METRICS)}"
            )
    return names


def _parse_int_list(text, what):
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ".." in token:
            lo, _, hi = token.partition("..")
            try:
                values.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise ValueError(f"bad {what} range {token!r}") from None
        else:
            try:
                values.append(int(token))
            except ValueError:
                raise ValueError(f"bad {what} value {token!r}") from None
    if not values:
        raise ValueError(f"empty {what} list")
    return values


def _parse_size(text):
    try:
        w_text, _, h_text = text.lower().partition("x")
        width, height = int(w_text), int(h_text)
        if width < 1 or height < 1:
            raise ValueError
    except ValueError:
        raise ValueError(f"--size must look like 2040x1356, got {text!r}") from None
    return height, width


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_score(args):
    try:
        names = _parse_metric_names(args.metrics, builtin_only=True)
        spec = _spec_from_args(args)
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        test = load_gray(args.test, args.gray)
        ref = load_gray(args.ref, args.gray)
    except DecodeError as exc:
        return _fail(EXIT_IO, exc)
    try:
        scores = {name: metrics.compute_metric(name, test, ref, spec, args.engine) for name in names}
    except (DimensionError, WindowError) as exc:
        return _fail(EXIT_DIMENSION, f"{args.test} vs {args.ref}: {exc}")
    record = {
        "test_path": args.test,
        "ref_path": args.ref,
        "window": spec.win_h,
        "stride": spec.stride,
        "levels": spec.levels,
        "engine": args.engine,
    }
    for name in names:
        record[name] = scores[name].value
    _emit_record(record, args.format, args.out)
    return EXIT_OK


def cmd_map(args):
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        img = load_gray(args.image, args.gray)
    except DecodeError as exc:
        return _fail(EXIT_IO, exc)
    engine = metrics._map_engine(args.engine)
    try:
        emap = engine(img, spec)
    except WindowError as exc:
        return _fail(EXIT_DIMENSION, f"{args.image}: {exc}")
    rendering = metrics.map_to_image(emap)
    out_png = args.out or str(Path(args.image).with_suffix(".entropy.png"))
    try:
        save_gray(out_png, rendering)
    except OSError as exc:
        return _fail(EXIT_IO, f"{out_png}: {exc}")
    record = {
        "image": args.image,
        "out": out_png,
        "rows": emap.rows,
        "cols": emap.cols,
        "window": spec.win_h,
        "stride": spec.stride,
        "levels": spec.levels,
        "engine": args.engine,
    }
    # --out names the PNG, so the record itself always goes to stdout
    _emit_record(record, args.format, None)
    return EXIT_OK


def _score_table_rows(table, names):
    rows = []
    for scored in table.rows:
        row = {
            "row": scored.row,
            "test_path": str(scored.entry.test_path),
            "ref_path": str(scored.entry.ref_path),
            "method": scored.entry.method,
            "category": scored.entry.category,
            "mos": scored.entry.mos,
        }
        for name in names:
            row[name] = scored.scores.get(name)
        rows.append(row)
    return rows


def cmd_eval(args):
    try:
        names = _parse_metric_names(args.metrics, builtin_only=False)
        spec = _spec_from_args(args)
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        entries = harness.load_manifest(args.manifest)
    except ManifestError as exc:
        return _fail(EXIT_IO, exc)
    table = harness.score_dataset(entries, spec, names, args.engine, args.gray, workers=args.workers)
    report_rows = []
    if table.rows:
        report_rows = [
            {
                "metric": rep.metric_name,
                "group": rep.group_key,
                "n": rep.n,
                "srcc": rep.srcc,
                "plcc": rep.plcc,
                "mean_score": rep.mean_score,
            }
            for rep in harness.aggregate(table)
        ]
    failure_rows = [
        {"row": f.row, "test_path": f.test_path, "message": f.message} for f in table.failures
    ]
    _emit_tables(
        [
            ("scores", _score_table_rows(table, names)),
            ("reports", report_rows),
            ("failures", failure_rows),
        ],
        args.format,
        args.out,
    )
    if not table.rows:
        print("error: no rows could be scored", file=sys.stderr)
        return EXIT_NO_ROWS
    return EXIT_OK


def cmd_sweep(args):
    try:
        windows = _parse_int_list(args.windows, "window")
        if args.levels_arg.strip().lower() == "full":
            levels = list(range(2, 81))
        else:
            levels = _parse_int_list(args.levels_arg, "levels")
        if args.strides.strip().lower() == "window":
            strides = [None]
        else:
            strides = _parse_int_list(args.strides, "stride")
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        entries = harness.load_manifest(args.manifest)
    except ManifestError as exc:
        return _fail(EXIT_IO, exc)
    points = harness.grid_sweep(
        entries, windows, levels, strides, args.engine, args.gray, workers=args.workers
    )
    categories = sorted({cat for p in points for cat in p.srcc_by_category})
    rows = []
    for p in points:
        row = {
            "window": p.spec.win_h,
            "stride": p.spec.stride,
            "levels": p.spec.levels,
            "n": p.n,
            "srcc_all": p.srcc_all,
        }
        for cat in categories:
            row[f"srcc_{cat}"] = p.srcc_by_category.get(cat)
        rows.append(row)
    _emit_tables([("sweep", rows)], args.format, args.out)
    return EXIT_OK


def cmd_bench(args):
    if args.reps < bench_mod.MIN_REPS:
        return _fail(EXIT_USAGE, f"--reps must be at least {bench_mod.MIN_REPS}, got {args.reps}")
    try:
        spec = _spec_from_args(args)
        shape = _parse_size(args.size)
    except ValueError as exc:
        return _fail(EXIT_USAGE, exc)
    img = bench_mod.bench_image(shape, args.seed)
    try:
        results = bench_mod.run_bench(img, spec, args.reps)
    except WindowError as exc:
        return _fail(EXIT_DIMENSION, exc)
    except EngineMismatchError as exc:
        return _fail(EXIT_ENGINE_MISMATCH, exc)
    _emit_tables([("bench", bench_mod.results_as_rows(results))], args.format, args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rdie",
        description="Regional differential information entropy: image quality scoring and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score a test image against a reference")
    p_score.add_argument("test", help="test image (PNG)")
    p_score.add_argument("ref", help="reference image (PNG)")
    p_score.add_argument("--metrics", default="rdie", help="comma-separated metric names (default %(default)s)")
    _add_spec_flags(p_score)
    _add_io_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_map = sub.add_parser("map", help="render an image's entropy map as a PNG")
    p_map.add_argument("image", help="input image (PNG)")
    _add_spec_flags(p_map)
    _add_io_flags(p_map)
    p_map.set_defaults(func=cmd_map)

    p_eval = sub.add_parser("eval", help="score a manifest and correlate against MOS")
    p_eval.add_argument("manifest", help="manifest CSV")
    p_eval.add_argument("--metrics", default="rdie", help="comma-separated metric names; non-built-ins are read from manifest extras")
    p_eval.add_argument("--workers", type=int, default=None, help="concurrent scoring threads")
    _add_spec_flags(p_eval)
    _add_io_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="sweep window/levels/stride and report rank correlations")
    p_sweep.add_argument("manifest", help="manifest CSV")
    p_sweep.add_argument("--windows", default="2..16", help="window sizes, e.g. 4,5 or 2..16 (default %(default)s)")
    p_sweep.add_argument(
        "--levels",
        dest="levels_arg",
        default=",".join(str(v) for v in harness.DEFAULT_SWEEP_LEVELS),
        help="quantization levels, e.g. 32 or 2..80 or 'full' (default %(default)s)",
    )
    p_sweep.add_argument("--strides", default="window", help="strides, e.g. 1..5, or 'window' (default)")
    p_sweep.add_argument("--workers", type=int, default=None, help="concurrent sweep threads")
    _add_io_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_bench = sub.add_parser("bench", help="time the naive and fast engines")
    p_bench.add_argument("--size", default="2040x1356", help="benchmark image size WxH (default %(default)s)")
    p_bench.add_argument("--reps", type=int, default=bench_mod.MIN_REPS, help="timed repetitions per op (default %(default)s)")
    p_bench.add_argument("--seed", type=int, default=bench_mod.DEFAULT_BENCH_SEED, help="benchmark image seed (default %(default)s)")
    _add_spec_flags(p_bench, window=bench_mod.DEFAULT_BENCH_SPEC.win_h, levels=bench_mod.DEFAULT_BENCH_SPEC.levels)
    _add_io_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
