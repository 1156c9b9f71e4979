"""Replay a recorded drag-event session and print the committed canonical.

Usage: python -m semlock.replay [--layout layout.json] session.jsonl

The session file is JSON Lines of drag events; the optional layout file
is the same JSON manifest the service returns from /api/layout (grid,
icon placements, snap radius).  Prints the canonical string of the
committed moves, or an empty line when nothing was committed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import DEFAULT_SNAP_RADIUS, events_from_jsonl, replay
from .model import GridSpec, IconId, default_grid


def grid_from_manifest(manifest: dict) -> tuple[GridSpec, float]:
    icons = []
    placement = {}
    for i, entry in enumerate(manifest["icons"]):
        icons.append(IconId(entry["id"], int(entry.get("ordinal", i))))
        placement[entry["id"]] = (int(entry["col"]), int(entry["row"]))
    grid = GridSpec(
        cols=int(manifest["grid"]["cols"]),
        rows=int(manifest["grid"]["rows"]),
        icons=tuple(icons),
        placement=placement,
    )
    radius = float(manifest.get("snap", {}).get("radius", DEFAULT_SNAP_RADIUS))
    return grid, radius


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="semlock-replay", description=__doc__)
    parser.add_argument("session", help="JSON Lines drag-event recording")
    parser.add_argument("--layout", help="layout manifest JSON (default: stock board)")
    args = parser.parse_args(argv)

    if args.layout:
        grid, radius = grid_from_manifest(json.loads(Path(args.layout).read_text(encoding="utf-8")))
    else:
        grid, radius = default_grid(), DEFAULT_SNAP_RADIUS

    events = events_from_jsonl(Path(args.session).read_text(encoding="utf-8"))
    state = replay(grid, events, snap_radius=radius)
    if state.committed:
        print(state.capture().canonical)
    else:
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
