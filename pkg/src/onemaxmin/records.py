"""Trial records and their CSV/JSON forms."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional

CSV_COLUMNS = ("algorithm", "n", "k", "trial", "seed", "evals_first_pareto",
               "evals_full_coverage", "censored", "wall_ms")


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    n: int
    k: int
    trial: int
    seed: int
    evals_first_pareto: Optional[int]
    evals_full_coverage: Optional[int]
    censored: bool
    wall_ms: Optional[float] = None
    evaluations: int = 0
    violations: int = 0

    def __post_init__(self):
        a, b = self.evals_first_pareto, self.evals_full_coverage
        if a is not None and b is not None and a > b:
            raise ValueError(f"first-point count {a} exceeds full-coverage count {b}")
        if self.censored != (b is None):
            raise ValueError("a record is censored exactly when full coverage is missing")

    def with_trial(self, trial: int, wall_ms: Optional[float]) -> "TrialRecord":
        d = asdict(self)
        d.update(trial=trial, wall_ms=wall_ms)
        return TrialRecord(**d)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        lines.append(",".join(_cell(getattr(rec, c)) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _opt_int(text: str) -> Optional[int]:
    return int(text) if text != "" else None


def records_from_csv(text: str) -> list[TrialRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(TrialRecord(
            algorithm=row["algorithm"], n=int(row["n"]), k=int(row["k"]), trial=int(row["trial"]),
            seed=int(row["seed"]), evals_first_pareto=_opt_int(row["evals_first_pareto"]),
            evals_full_coverage=_opt_int(row["evals_full_coverage"]),
            censored=row["censored"] == "true",
            wall_ms=float(row["wall_ms"]) if row["wall_ms"] else None))
    return out


def records_to_json(records: Iterable[TrialRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2) + "\n"


def records_from_json(text: str) -> list[TrialRecord]:
    names = {f.name for f in fields(TrialRecord)}
    return [TrialRecord(**{key: val for key, val in item.items() if key in names})
            for item in json.loads(text)]


def _format(path: Path, fmt: Optional[str]) -> str:
    fmt = fmt or path.suffix.lstrip(".").lower() or "csv"
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported format {fmt!r}")
    return fmt


def write_records(records: Iterable[TrialRecord], path, fmt: Optional[str] = None) -> Path:
    path = Path(path)
    text = records_to_csv(records) if _format(path, fmt) == "csv" else records_to_json(records)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write records to {path}: {exc}") from exc
    return path


def read_records(path, fmt: Optional[str] = None) -> list[TrialRecord]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read records from {path}: {exc}") from exc
    return records_from_csv(text) if _format(path, fmt) == "csv" else records_from_json(text)
