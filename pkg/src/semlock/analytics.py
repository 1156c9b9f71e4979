"""Start/end-point heatmaps and login usability metrics."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import AttemptEvent, PasswordRecord, PatternRecord
from .engine import apply_moves
from .errors import EmptyInput, PlacementError
from .model import GridSpec

PATTERN_GRID = (3, 3)


@dataclass(frozen=True)
class Heatmap:
    """Per-cell percentages (rows x cols, row-major); they sum to 100."""

    cols: int
    rows: int
    pct: tuple[tuple[float, ...], ...]

    def at(self, col: int, row: int) -> float:
        return self.pct[row][col]

    def to_csv(self) -> str:
        lines = ["col,row,pct"]
        for row in range(self.rows):
            for col in range(self.cols):
                lines.append(f"{col},{row},{self.pct[row][col]!r}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {"cols": self.cols, "rows": self.rows,
                "pct": [list(row) for row in self.pct]}


def heatmap_from_cells(cells: Sequence[tuple[int, int]], cols: int, rows: int) -> Heatmap:
    if not cells:
        raise EmptyInput("no cells to aggregate")
    counts = [[0] * cols for _ in range(rows)]
    for col, row in cells:
        if not (0 <= col < cols and 0 <= row < rows):
            raise ValueError(f"cell ({col}, {row}) outside {cols}x{rows} grid")
        counts[row][col] += 1
    total = len(cells)
    pct = tuple(tuple(100.0 * c / total for c in row) for row in counts)
    return Heatmap(cols=cols, rows=rows, pct=pct)


def pattern_cell(node: int) -> tuple[int, int]:
    """3x3 node number (1..9, row-major from top-left) to (col, row)."""
    return ((node - 1) % 3, (node - 1) // 3)


def endpoint_heatmap(records: Sequence, grid: GridSpec | None, which: str) -> Heatmap:
    """Start- or end-cell percentages for pattern or password records.

    Pattern records live on the 3x3 node grid.  Password records use the
    board: the start cell is where the first dragged icon rested before
    the password began; the end cell is where the last dragged icon came
    to rest, found by replaying the moves geometrically.  Records whose
    move sequence is infeasible from the default layout are skipped.
    """
    if which not in ("start", "end"):
        raise ValueError(f"which must be 'start' or 'end', got {which!r}")
    if not records:
        raise EmptyInput("no records")
    first = records[0]
    if isinstance(first, PatternRecord):
        cells = [pattern_cell(r.nodes[0] if which == "start" else r.nodes[-1])
                 for r in records]
        return heatmap_from_cells(cells, *PATTERN_GRID)
    if isinstance(first, PasswordRecord):
        if grid is None:
            raise ValueError("password heatmaps need the grid")
        if which == "start":
            cells = [grid.placement[r.password.moves[0].moved.id] for r in records]
        else:
            cells, _ = password_end_cells(records, grid)
            if not cells:
                raise EmptyInput("no geometrically feasible records")
        return heatmap_from_cells(cells, grid.cols, grid.rows)
    raise TypeError(f"unsupported record type {type(first).__name__}")


def password_end_cells(records: Iterable[PasswordRecord],
                       grid: GridSpec) -> tuple[list[tuple[int, int]], int]:
    """Resting cell of each record's last moved icon, plus skip count."""
    cells = []
    skipped = 0
    for rec in records:
        try:
            positions = apply_moves(grid, rec.password.moves)
        except PlacementError:
            skipped += 1
            continue
        cells.append(positions[rec.password.moves[-1].moved.id])
    return cells, skipped


@dataclass(frozen=True)
class TechniqueMetrics:
    technique: str
    attempts: int
    successes: int
    mean_pre_login_delay_ms: float | None
    mean_login_speed_ms: float | None
    error_rate_pct: float

    def to_json_dict(self) -> dict:
        return {
            "technique": self.technique,
            "attempts": self.attempts,
            "successes": self.successes,
            "mean_pre_login_delay_ms": self.mean_pre_login_delay_ms,
            "mean_login_speed_ms": self.mean_login_speed_ms,
            "error_rate_pct": self.error_rate_pct,
        }


def usability_metrics(events: Sequence[AttemptEvent]) -> dict[str, TechniqueMetrics]:
    """Per-technique pre-login delay, login speed and error rate.

    Delay (first touch minus ready) averages over all attempts; speed
    (completion minus first touch) averages over successful attempts
    only; error rate is failed / total attempts as a percentage.
    """
    if not events:
        raise EmptyInput("no events")
    by_tech: dict[str, list[AttemptEvent]] = defaultdict(list)
    for event in events:
        by_tech[event.tech].append(event)
    out = {}
    for tech in sorted(by_tech):
        group = by_tech[tech]
        delays = [e.touch - e.ready for e in group
                  if e.ready is not None and e.touch is not None]
        speeds = [e.done - e.touch for e in group
                  if e.ok and e.touch is not None and e.done is not None]
        failures = sum(1 for e in group if not e.ok)
        out[tech] = TechniqueMetrics(
            technique=tech,
            attempts=len(group),
            successes=len(group) - failures,
            mean_pre_login_delay_ms=sum(delays) / len(delays) if delays else None,
            mean_login_speed_ms=sum(speeds) / len(speeds) if speeds else None,
            error_rate_pct=100.0 * failures / len(group),
        )
    return out


def metrics_to_csv(metrics: dict[str, TechniqueMetrics]) -> str:
    lines = ["technique,attempts,successes,mean_pre_login_delay_ms,mean_login_speed_ms,error_rate_pct"]
    for tech in sorted(metrics):
        m = metrics[tech]
        delay = "" if m.mean_pre_login_delay_ms is None else repr(m.mean_pre_login_delay_ms)
        speed = "" if m.mean_login_speed_ms is None else repr(m.mean_login_speed_ms)
        lines.append(f"{m.technique},{m.attempts},{m.successes},{delay},{speed},{m.error_rate_pct!r}")
    return "\n".join(lines) + "\n"
