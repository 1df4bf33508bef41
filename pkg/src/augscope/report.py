"""Stats/plot-data emission and comparison against shipped reference tables.

The reference tables are published summary statistics for three similarity
studies (overall real/synthetic comparison, per-batch synthetic comparison,
and the three augmentation techniques). They ship as CSV assets and are
reference data: users who hold a comparable dataset can check their own
runs against them, with explicit tolerances.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import IoError, UnknownComparison
from .similarity import DistributionStats

REFERENCE_TABLE_NAMES = ("table2", "table3", "table4")

STATS_CSV_COLUMNS = ("comparison", "name", "class", "sample_size", "mean", "sd", "skewness")


@dataclass(frozen=True)
class ReferenceRow:
    name: str
    display: str
    sample_size: int | None
    mean: float
    sd: float
    skewness: float


@dataclass(frozen=True)
class Tolerances:
    mean: float = 0.01
    sd: float = 0.01
    skewness: float = 0.05


@dataclass(frozen=True)
class FieldCheck:
    field: str
    computed: float
    reference: float
    delta: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class RowReport:
    name: str
    checks: tuple[FieldCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


@dataclass(frozen=True)
class StatsRow:
    comparison: str
    name: str
    class_: str
    sample_size: int
    mean: float
    sd: float
    skewness: float


def load_reference_table(table: str) -> dict[str, ReferenceRow]:
    """Rows of one shipped reference table, keyed by comparison name."""
    if table not in REFERENCE_TABLE_NAMES:
        raise UnknownComparison(
            f"unknown reference table {table!r} (have {', '.join(REFERENCE_TABLE_NAMES)})")
    text = resources.files("augscope").joinpath(f"data/{table}.csv").read_text(encoding="utf-8")
    rows: dict[str, ReferenceRow] = {}
    for rec in csv.DictReader(io.StringIO(text)):
        rows[rec["name"]] = ReferenceRow(
            name=rec["name"],
            display=rec["display"],
            sample_size=int(rec["sample_size"]) if rec["sample_size"] else None,
            mean=float(rec["mean"]),
            sd=float(rec["sd"]),
            skewness=float(rec["skewness"]),
        )
    return rows


def lookup_reference(table: str, name: str) -> ReferenceRow:
    rows = load_reference_table(table)
    if name not in rows:
        raise UnknownComparison(
            f"no comparison {name!r} in {table} (have {', '.join(sorted(rows))})")
    return rows[name]


def compare_to_reference(stats: DistributionStats, ref: ReferenceRow,
                         tolerances: Tolerances = Tolerances()) -> RowReport:
    """Field-by-field pass/fail of computed stats against one reference row.

    mean/sd/skewness pass when |computed - reference| <= tolerance; the
    sample size, when the reference table carries one, must match exactly.
    """
    checks = []
    if ref.sample_size is not None:
        delta = stats.sample_size - ref.sample_size
        checks.append(FieldCheck("sample_size", float(stats.sample_size),
                                 float(ref.sample_size), float(delta), 0.0, delta == 0))
    for fieldname, computed, reference, tol in (
        ("mean", stats.mean, ref.mean, tolerances.mean),
        ("sd", stats.sd, ref.sd, tolerances.sd),
        ("skewness", stats.skewness, ref.skewness, tolerances.skewness),
    ):
        delta = computed - reference
        checks.append(FieldCheck(fieldname, computed, reference, delta, tol, abs(delta) <= tol))
    return RowReport(name=ref.name, checks=tuple(checks))


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_stats_csv(rows: list[StatsRow], path: str | Path) -> None:
    """Write stats rows: comparison,name,class,sample_size,mean,sd,skewness."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(STATS_CSV_COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join([
                    row.comparison, row.name, row.class_, str(row.sample_size),
                    _fmt(row.mean), _fmt(row.sd), _fmt(row.skewness),
                ]) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write stats CSV {path}: {exc}") from exc


def parse_stats_csv(path: str | Path) -> list[StatsRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(StatsRow(
                comparison=rec["comparison"],
                name=rec["name"],
                class_=rec["class"],
                sample_size=int(rec["sample_size"]),
                mean=float(rec["mean"]),
                sd=float(rec["sd"]),
                skewness=float(rec["skewness"]),
            ))
    return rows


def emit_histogram_json(comparison: str, bins: list[tuple[float, float, int]],
                        path: str | Path) -> None:
    """Write histogram plot data: {comparison, bins: [{lo, hi, count}]}."""
    payload = {
        "comparison": comparison,
        "bins": [{"lo": lo, "hi": hi, "count": count} for lo, hi, count in bins],
    }
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write histogram JSON {path}: {exc}") from exc
