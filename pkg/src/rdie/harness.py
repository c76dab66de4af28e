"""Dataset scoring against opinion scores.

Covers manifest parsing, rank/linear correlation with tie handling, per-group
aggregation, and the (window, levels, stride) parameter sweep.
"""

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .entropy import DEFAULT_SPEC, WindowSpec, entropy_map_fast, entropy_map_naive
from .errors import (
    DecodeError,
    ManifestError,
    RdieError,
    UndefinedCorrelationError,
)
from .imgio import load_gray

REQUIRED_COLUMNS = ("test_path", "ref_path", "method", "category", "mos")

DEFAULT_SWEEP_WINDOWS = tuple(range(2, 17))
# Coarse ladder over 2..80; pass the full range explicitly for an exhaustive sweep.
DEFAULT_SWEEP_LEVELS = (2, 4, 8, 16, 24, 32, 48, 64, 80)


@dataclass(frozen=True)
class ManifestEntry:
    """One (test image, reference image, method, category, MOS) dataset row."""

    test_path: Path
    ref_path: Path
    method: str
    category: str
    mos: float
    extra_metrics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScoredRow:
    row: int
    entry: ManifestEntry
    scores: dict


@dataclass(frozen=True)
class RowFailure:
    row: int
    test_path: str
    message: str


@dataclass(frozen=True)
class ScoredTable:
    rows: list
    failures: list


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation of one metric against MOS within one group of rows."""

    metric_name: str
    group_key: str
    n: int
    srcc: float | None
    plcc: float | None
    mean_score: float


@dataclass(frozen=True)
class SweepPoint:
    """Rank correlations of the entropy score at one parameter triple."""

    spec: WindowSpec
    n: int
    srcc_all: float | None
    srcc_by_category: dict


def load_manifest(path) -> list:
    """Parse a manifest CSV into entries.

    The header must contain test_path, ref_path, method, category and mos;
    any further columns are kept as pre-computed metric scores.  Paths are
    resolved relative to the manifest's directory.  Malformed rows are
    collected and reported together, numbered from 1 at the first data row.
    """
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"{path}: {exc.strerror or exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise ManifestError(f"{path}: manifest is empty")
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ManifestError(f"{path}: missing required column(s): {', '.join(missing)}")
        extra_names = [c for c in header if c is not None and c not in REQUIRED_COLUMNS]
        base = path.parent
        entries = []
        problems = []
        for row_num, row in enumerate(reader, start=1):
            test_p = (row.get("test_path") or "").strip()
            ref_p = (row.get("ref_path") or "").strip()
            if not test_p or not ref_p:
                problems.append((row_num, "empty test_path or ref_path"))
                continue
            try:
                mos = float(row.get("mos") or "")
            except ValueError:
                problems.append((row_num, f"unparsable mos value {row.get('mos')!r}"))
                continue
            if not math.isfinite(mos):
                problems.append((row_num, f"non-finite mos value {row.get('mos')!r}"))
                continue
            extras = {}
            bad_extra = None
            for name in extra_names:
                raw = (row.get(name) or "").strip()
                if not raw:
                    continue
                try:
                    extras[name] = float(raw)
                except ValueError:
                    bad_extra = (row_num, f"unparsable value {raw!r} in column {name!r}")
                    break
            if bad_extra:
                problems.append(bad_extra)
                continue
            entries.append(
                ManifestEntry(
                    test_path=base / test_p,
                    ref_path=base / ref_p,
                    method=(row.get("method") or "").strip(),
                    category=(row.get("category") or "").strip(),
                    mos=mos,
                    extra_metrics=extras,
                )
            )
        if problems:
            raise ManifestError(f"{path}: {len(problems)} malformed row(s)", problems)
    return entries


def _average_ranks(values):
    """Ranks 1..n with tied values sharing the mean of their positions."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    new_group = np.empty(n, dtype=bool)
    new_group[0] = True
    new_group[1:] = sorted_vals[1:] != sorted_vals[:-1]
    group = np.cumsum(new_group) - 1
    counts = np.bincount(group)
    ends = np.cumsum(counts)
    starts = ends - counts
    group_rank = (starts + ends + 1) / 2.0
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = group_rank[group]
    return ranks


def plcc(a, b) -> float:
    """Pearson linear correlation coefficient."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"inputs must be 1-D and equally long, got shapes {a.shape} and {b.shape}")
    if a.size < 2:
        raise UndefinedCorrelationError("need at least two samples")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise UndefinedCorrelationError("inputs contain non-finite values")
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float((da * da).sum()) * float((db * db).sum()))
    if denom == 0.0:
        raise UndefinedCorrelationError("an input has zero variance")
    r = float((da * db).sum()) / denom
    return min(1.0, max(-1.0, r))


def srcc(a, b) -> float:
    """Spearman rank correlation: Pearson correlation of average-rank vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"inputs must be 1-D and equally long, got shapes {a.shape} and {b.shape}")
    if a.size < 2:
        raise UndefinedCorrelationError("need at least two samples")
    return plcc(_average_ranks(a), _average_ranks(b))


def _default_workers():
    return min(8, os.cpu_count() or 1)


def score_dataset(
    entries,
    spec=DEFAULT_SPEC,
    metric_names=("rdie",),
    engine="fast",
    gray_mode="luma",
    workers=None,
) -> ScoredTable:
    """Score every entry with the requested metrics.

    Built-in names (rdie, mse, psnr, ssim) are computed from the image pair;
    any other name is copied from the entry's pre-computed extras.  Decode or
    size problems fail the affected row only.  Rows are scored concurrently
    but returned in manifest order.
    """
    metric_names = list(metric_names)
    builtin = [m for m in metric_names if m in metrics.BUILTIN_METRICS]
    external = [m for m in metric_names if m not in metrics.BUILTIN_METRICS]

    def score_one(item):
        row_num, entry = item
        try:
            scores = {}
            for name in external:
                if name not in entry.extra_metrics:
                    raise RdieError(f"metric {name!r} is not present in the manifest extras")
                scores[name] = entry.extra_metrics[name]
            if builtin:
                test = load_gray(entry.test_path, gray_mode)
                ref = load_gray(entry.ref_path, gray_mode)
                for name in builtin:
                    scores[name] = metrics.compute_metric(name, test, ref, spec, engine).value
            return ScoredRow(row_num, entry, scores), None
        except (RdieError, ValueError) as exc:
            return None, RowFailure(row_num, str(entry.test_path), str(exc))

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        outcomes = list(pool.map(score_one, enumerate(entries, start=1)))
    rows = [scored for scored, failure in outcomes if scored is not None]
    failures = [failure for scored, failure in outcomes if failure is not None]
    return ScoredTable(rows=rows, failures=failures)


def _correlations(values, moses, lower_is_better):
    oriented = -values if lower_is_better else values
    try:
        s = srcc(oriented, moses)
    except UndefinedCorrelationError:
        s = None
    try:
        p = plcc(oriented, moses)
    except UndefinedCorrelationError:
        p = None
    return s, p


def aggregate(table: ScoredTable) -> list:
    """Correlate each metric against MOS for the whole set, per category and per method.

    Lower-is-better metrics are negated before correlating, so a perfect
    metric always reports +1.  Group keys are prefixed "category:" or
    "method:", with "all" for the whole dataset.  Mean scores are of the raw
    (unnegated) values.  Undefined correlations are reported as None.
    """
    rows = table.rows
    if not rows:
        raise ValueError("nothing to aggregate: no scored rows")
    metric_names = sorted({name for row in rows for name in row.scores})
    reports = []
    for name in metric_names:
        scored = [row for row in rows if name in row.scores]
        groups = [("all", scored)]
        for cat in sorted({row.entry.category for row in scored}):
            groups.append((f"category:{cat}", [r for r in scored if r.entry.category == cat]))
        for meth in sorted({row.entry.method for row in scored}):
            groups.append((f"method:{meth}", [r for r in scored if r.entry.method == meth]))
        lower = not metrics.higher_is_better(name)
        for key, members in groups:
            values = np.array([m.scores[name] for m in members], dtype=np.float64)
            moses = np.array([m.entry.mos for m in members], dtype=np.float64)
            s, p = _correlations(values, moses, lower)
            reports.append(
                CorrelationReport(
                    metric_name=name,
                    group_key=key,
                    n=len(members),
                    srcc=s,
                    plcc=p,
                    mean_score=float(values.mean()),
                )
            )
    return reports


def _rms_map_difference(test_map, ref_map):
    diff = test_map.values - ref_map.values
    return float(np.sqrt(np.mean(diff * diff)))


def grid_sweep(
    entries,
    windows=DEFAULT_SWEEP_WINDOWS,
    levels=DEFAULT_SWEEP_LEVELS,
    strides=(None,),
    engine="fast",
    gray_mode="luma",
    workers=None,
) -> list:
    """Entropy-score rank correlation against MOS over a parameter grid.

    One point per (window, levels, stride) triple, iterated with windows
    outermost and strides innermost; a stride of None means "equal to the
    window".  Images are decoded once and shared across all points.  Entries
    whose images cannot be decoded, or are smaller than a point's window, are
    left out of that point's correlation (n says how many were scored).
    """
    windows = list(windows)
    levels = list(levels)
    strides = list(strides)
    if not windows or not levels or not strides:
        raise ValueError("sweep ranges must be non-empty")
    compute = entropy_map_fast if engine == "fast" else entropy_map_naive

    cache = {}
    usable = []
    for entry in entries:
        try:
            for path in (entry.test_path, entry.ref_path):
                if path not in cache:
                    cache[path] = load_gray(path, gray_mode)
            if cache[entry.test_path].shape != cache[entry.ref_path].shape:
                continue
            usable.append(entry)
        except DecodeError:
            continue

    specs = [
        WindowSpec(w, w, w if st is None else st, lv)
        for w in windows
        for lv in levels
        for st in strides
    ]

    def run_point(spec):
        values, moses, cats = [], [], []
        for entry in usable:
            test = cache[entry.test_path]
            if test.shape[0] < spec.win_h or test.shape[1] < spec.win_w:
                continue
            test_map = compute(test, spec)
            ref_map = compute(cache[entry.ref_path], spec)
            values.append(_rms_map_difference(test_map, ref_map))
            moses.append(entry.mos)
            cats.append(entry.category)
        values = np.asarray(values, dtype=np.float64)
        moses = np.asarray(moses, dtype=np.float64)
        overall, _ = _correlations(values, moses, lower_is_better=True)
        by_category = {}
        for cat in sorted(set(cats)):
            members = np.array([c == cat for c in cats])
            cat_s, _ = _correlations(values[members], moses[members], lower_is_better=True)
            by_category[cat] = cat_s
        return SweepPoint(spec=spec, n=len(moses), srcc_all=overall, srcc_by_category=by_category)

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        return list(pool.map(run_point, specs))
