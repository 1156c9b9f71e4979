"""Shared test utilities: random drag-session generation."""

import random

from semlock import model
from semlock.engine import DragEvent, PlacementState


def random_session_events(rng: random.Random, grid=None, drags=None) -> list[DragEvent]:
    """A plausible recorded session: a few drags, each with jittery moves.

    Drops land anywhere on the board, so sessions mix snapped commits
    with snap-backs.
    """
    grid = grid or model.default_grid()
    state = PlacementState(grid)
    events = []
    t = 0.0
    for _ in range(drags if drags is not None else rng.randint(1, 3)):
        icon_id = rng.choice([icon.id for icon in state.occupancy.values()])
        start = next(cell for cell, icon in state.occupancy.items() if icon.id == icon_id)
        events.append(DragEvent(t=t, ev="begin", icon=icon_id,
                                x=start[0] + 0.5, y=start[1] + 0.5))
        t += rng.uniform(5, 40)
        for _ in range(rng.randint(0, 4)):
            events.append(DragEvent(t=t, ev="move",
                                    x=rng.uniform(0, grid.cols), y=rng.uniform(0, grid.rows)))
            t += rng.uniform(5, 40)
        drop = (rng.uniform(0, grid.cols), rng.uniform(0, grid.rows))
        events.append(DragEvent(t=t, ev="end", x=drop[0], y=drop[1]))
        t += rng.uniform(5, 40)
        # keep the driver's state in sync so icon choices stay valid
        state.begin_drag(icon_id)
        state.end_drag(drop)
    return events
