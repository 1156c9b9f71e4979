"""Corpus ingestion, validation and seeded synthesis.

Four record kinds, all JSON Lines (one record per line):

  pairs      {"pid": ..., "first": ..., "second": ..., "session": ...}
  passwords  {"pid": ..., "canonical": "a>b:R|..."}
  patterns   {"pid": ..., "nodes": [...]}
  events     {"pid": ..., "tech": ..., "session": ..., "ready": ...,
              "touch": ..., "done": ..., "ok": ...}   (optional "id")

Loading never silently drops a record: invalid lines come back in a
rejection report with their line number and reason.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import model
from .errors import InvalidProfile, IoFailure, MalformedLine, SemlockError
from .model import GridSpec, IconId, Move, SemanticPassword, Side

#: The 40-icon base catalog used for pairing studies.
STAGE1_ICON_IDS = (
    "anchor", "apple", "arrow", "ball", "bell", "board", "book", "bottle",
    "box", "brush", "bulb", "cap", "car", "chair", "cheese", "clock",
    "cloud", "coin", "cup", "dice", "door", "drum", "fish", "flag",
    "fork", "glass", "globe", "hammer", "house", "key", "kite", "ladder",
    "leaf", "lock", "moon", "pen", "person", "phone", "ring", "star",
)

TECHNIQUES = ("PIN", "PATTERN", "SEMANTIC")

PATTERN_MIN_NODES = 3
PATTERN_NODE_RANGE = (1, 9)


@dataclass(frozen=True)
class PairObservation:
    pid: str
    first: str
    second: str
    session: int

    def to_dict(self) -> dict:
        return {"pid": self.pid, "first": self.first, "second": self.second,
                "session": self.session}


@dataclass(frozen=True)
class PasswordRecord:
    pid: str
    password: SemanticPassword

    def to_dict(self) -> dict:
        return {"pid": self.pid, "canonical": self.password.canonical}


@dataclass(frozen=True)
class PatternRecord:
    pid: str
    nodes: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"pid": self.pid, "nodes": list(self.nodes)}


@dataclass(frozen=True)
class AttemptEvent:
    pid: str
    tech: str
    session: int
    ready: int | None
    touch: int | None
    done: int | None
    ok: bool
    event_id: str | None = None

    def to_dict(self) -> dict:
        d = {"pid": self.pid, "tech": self.tech, "session": self.session,
             "ready": self.ready, "touch": self.touch, "done": self.done,
             "ok": self.ok}
        if self.event_id is not None:
            d["id"] = self.event_id
        return d


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str


def _require(obj: dict, key: str):
    if key not in obj:
        raise ValueError(f"missing field {key!r}")
    return obj[key]


def parse_pair(obj: dict, icons: Sequence[str]) -> PairObservation:
    first = str(_require(obj, "first"))
    second = str(_require(obj, "second"))
    if first == second:
        raise ValueError(f"pair of {first!r} with itself")
    for icon in (first, second):
        if icon not in icons:
            raise ValueError(f"icon {icon!r} not in the pairing icon set")
    return PairObservation(pid=str(_require(obj, "pid")), first=first, second=second,
                           session=int(_require(obj, "session")))


def parse_password(obj: dict, grid: GridSpec) -> PasswordRecord:
    canonical = str(_require(obj, "canonical"))
    try:
        password = model.parse_canonical(canonical, grid.icons)
    except SemlockError as exc:
        raise ValueError(f"bad canonical {canonical!r}: {exc}") from exc
    return PasswordRecord(pid=str(_require(obj, "pid")), password=password)


def parse_pattern(obj: dict) -> PatternRecord:
    nodes = _require(obj, "nodes")
    if not isinstance(nodes, list) or not all(isinstance(n, int) for n in nodes):
        raise ValueError("nodes must be a list of integers")
    if len(nodes) < PATTERN_MIN_NODES:
        raise ValueError(f"pattern has {len(nodes)} nodes, minimum length is {PATTERN_MIN_NODES}")
    lo, hi = PATTERN_NODE_RANGE
    for n in nodes:
        if not lo <= n <= hi:
            raise ValueError(f"node {n} outside {lo}..{hi}")
    if len(set(nodes)) != len(nodes):
        raise ValueError("pattern repeats a node")
    return PatternRecord(pid=str(_require(obj, "pid")), nodes=tuple(nodes))


def parse_event(obj: dict) -> AttemptEvent:
    tech = str(_require(obj, "tech"))
    if tech not in TECHNIQUES:
        raise ValueError(f"technique {tech!r} not one of {TECHNIQUES}")
    stamps = {}
    for key in ("ready", "touch", "done"):
        value = obj.get(key)
        if value is not None:
            value = int(value)
            if value < 0:
                raise ValueError(f"{key} timestamp must be >= 0")
        stamps[key] = value
    if stamps["ready"] is not None and stamps["touch"] is not None and stamps["ready"] > stamps["touch"]:
        raise ValueError("first touch precedes ready mark")
    if stamps["touch"] is not None and stamps["done"] is not None and stamps["touch"] > stamps["done"]:
        raise ValueError("completion precedes first touch")
    ok = _require(obj, "ok")
    if not isinstance(ok, bool):
        raise ValueError("ok must be a boolean")
    event_id = obj.get("id")
    return AttemptEvent(pid=str(_require(obj, "pid")), tech=tech,
                        session=int(_require(obj, "session")),
                        ready=stamps["ready"], touch=stamps["touch"], done=stamps["done"],
                        ok=ok, event_id=str(event_id) if event_id is not None else None)


CORPUS_KINDS = ("pairs", "passwords", "patterns", "events")


def parse_record(obj: dict, kind: str, *, icons: Sequence[str] | None = None,
                 grid: GridSpec | None = None):
    if kind == "pairs":
        return parse_pair(obj, icons if icons is not None else STAGE1_ICON_IDS)
    if kind == "passwords":
        return parse_password(obj, grid if grid is not None else model.default_grid())
    if kind == "patterns":
        return parse_pattern(obj)
    if kind == "events":
        return parse_event(obj)
    raise ValueError(f"unknown corpus kind {kind!r}")


def load_corpus_lines(lines: Iterable[str], kind: str, *, strict: bool = False,
                      icons: Sequence[str] | None = None,
                      grid: GridSpec | None = None) -> tuple[list, list[Rejection]]:
    records = []
    rejections = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            if strict:
                raise MalformedLine(f"line {lineno}: {exc}") from exc
            rejections.append(Rejection(lineno, f"not valid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            rejections.append(Rejection(lineno, "record is not a JSON object"))
            continue
        try:
            records.append(parse_record(obj, kind, icons=icons, grid=grid))
        except (ValueError, SemlockError) as exc:
            rejections.append(Rejection(lineno, str(exc)))
    return records, rejections


def load_corpus(path: str | Path, kind: str, *, strict: bool = False,
                icons: Sequence[str] | None = None,
                grid: GridSpec | None = None) -> tuple[list, list[Rejection]]:
    """Load and validate a JSON Lines corpus; never silently drops records."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read corpus {path}: {exc}") from exc
    return load_corpus_lines(text.splitlines(), kind, strict=strict, icons=icons, grid=grid)


def dump_corpus(records: Iterable) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in records)


def save_corpus(path: str | Path, records: Iterable) -> None:
    try:
        Path(path).write_text(dump_corpus(records), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write corpus {path}: {exc}") from exc


# --- seeded synthesis ------------------------------------------------------

@dataclass(frozen=True)
class SynthProfile:
    """Weighted move model for generating password records.

    Icons are drawn by `icon_weights` (anchor re-drawn among the
    remaining icons), sides by `side_weights`.
    """

    count: int
    icon_weights: dict[str, float]
    side_weights: dict[Side, float]
    moves_per_password: int = 2
    grid: GridSpec = field(default_factory=model.default_grid)

    def validate(self) -> None:
        if self.count < 0:
            raise InvalidProfile("record count must be >= 0")
        if self.moves_per_password < 1:
            raise InvalidProfile("passwords need at least one move")
        if set(self.icon_weights) != set(self.grid.icon_ids):
            raise InvalidProfile("icon weights must cover exactly the grid icon set")
        if set(self.side_weights) != set(Side):
            raise InvalidProfile("side weights must cover all four sides")
        for w in list(self.icon_weights.values()) + list(self.side_weights.values()):
            if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
                raise InvalidProfile(f"weight {w!r} must be positive and finite")


def uniform_profile(count: int, moves_per_password: int = 2,
                    grid: GridSpec | None = None) -> SynthProfile:
    grid = grid if grid is not None else model.default_grid()
    return SynthProfile(
        count=count,
        icon_weights={icon_id: 1.0 for icon_id in grid.icon_ids},
        side_weights={side: 1.0 for side in Side},
        moves_per_password=moves_per_password,
        grid=grid,
    )


def biased_profile(count: int, moves_per_password: int = 2,
                   grid: GridSpec | None = None) -> SynthProfile:
    """Uniform icon choice with resting positions tilted toward top/right,
    the drift typical of right-handed drag input."""
    grid = grid if grid is not None else model.default_grid()
    return SynthProfile(
        count=count,
        icon_weights={icon_id: 1.0 for icon_id in grid.icon_ids},
        side_weights={Side.LEFT: 0.20, Side.TOP: 0.30, Side.RIGHT: 0.30, Side.BOTTOM: 0.20},
        moves_per_password=moves_per_password,
        grid=grid,
    )


PROFILES = {"uniform": uniform_profile, "biased": biased_profile}


def _weighted_choice(rng: random.Random, items: list, weights: list[float]):
    return rng.choices(items, weights=weights, k=1)[0]


def synthesize_corpus(seed: int, profile: SynthProfile) -> list[PasswordRecord]:
    """Deterministic password records for a fixed (seed, profile)."""
    profile.validate()
    rng = random.Random(seed)
    icons = {icon.id: icon for icon in profile.grid.icons}
    icon_ids = sorted(profile.icon_weights)
    icon_w = [profile.icon_weights[i] for i in icon_ids]
    sides = list(Side)
    side_w = [profile.side_weights[s] for s in sides]
    records = []
    for i in range(profile.count):
        moves = []
        for _ in range(profile.moves_per_password):
            moved = _weighted_choice(rng, icon_ids, icon_w)
            rest_ids = [x for x in icon_ids if x != moved]
            rest_w = [profile.icon_weights[x] for x in rest_ids]
            anchor = _weighted_choice(rng, rest_ids, rest_w)
            side = _weighted_choice(rng, sides, side_w)
            moves.append(Move(icons[moved], icons[anchor], side))
        records.append(PasswordRecord(pid=f"s{i:06d}", password=SemanticPassword(tuple(moves))))
    return records


def synthesize_pairs(seed: int, count: int,
                     icons: Sequence[str] = STAGE1_ICON_IDS,
                     hot_pairs: int = 30, hot_weight: float = 25.0,
                     pairs_per_participant: int = 10) -> list[PairObservation]:
    """Pair observations where a seeded handful of pairs is far more popular.

    Mimics a relatedness study: most pairs are background noise, a few
    strongly associated pairs dominate.
    """
    if count < 0:
        raise InvalidProfile("record count must be >= 0")
    if not (math.isfinite(hot_weight) and hot_weight > 0):
        raise InvalidProfile("hot pair weight must be positive and finite")
    rng = random.Random(seed)
    icons = sorted(set(icons))
    if len(icons) < 2:
        raise InvalidProfile("need at least 2 icons to form pairs")
    all_pairs = [(a, b) for i, a in enumerate(icons) for b in icons[i + 1:]]
    hot = set(rng.sample(range(len(all_pairs)), min(hot_pairs, len(all_pairs))))
    weights = [hot_weight if i in hot else 1.0 for i in range(len(all_pairs))]
    observations = []
    for i in range(count):
        first, second = _weighted_choice(rng, all_pairs, weights)
        observations.append(PairObservation(
            pid=f"p{i // pairs_per_participant:04d}",
            first=first, second=second,
            session=i // pairs_per_participant,
        ))
    return observations


def synthesize_patterns(seed: int, count: int,
                        start_weights: dict[int, float] | None = None,
                        min_len: int = PATTERN_MIN_NODES, max_len: int = 9,
                        patterns_per_participant: int = 10) -> list[PatternRecord]:
    """3x3 unlock patterns with a configurable start-node bias.

    After the start node, remaining nodes are drawn uniformly without
    repetition.
    """
    if count < 0:
        raise InvalidProfile("record count must be >= 0")
    lo, hi = PATTERN_NODE_RANGE
    nodes = list(range(lo, hi + 1))
    if start_weights is None:
        start_weights = {n: 1.0 for n in nodes}
    if set(start_weights) != set(nodes):
        raise InvalidProfile("start weights must cover nodes 1..9")
    for w in start_weights.values():
        if not (math.isfinite(w) and w > 0):
            raise InvalidProfile(f"start weight {w!r} must be positive and finite")
    if not (PATTERN_MIN_NODES <= min_len <= max_len <= len(nodes)):
        raise InvalidProfile(f"pattern length bounds {min_len}..{max_len} invalid")
    rng = random.Random(seed)
    start_w = [start_weights[n] for n in nodes]
    records = []
    for i in range(count):
        length = rng.randint(min_len, max_len)
        start = _weighted_choice(rng, nodes, start_w)
        rest = [n for n in nodes if n != start]
        rng.shuffle(rest)
        records.append(PatternRecord(
            pid=f"p{i // patterns_per_participant:04d}",
            nodes=tuple([start] + rest[: length - 1]),
        ))
    return records
