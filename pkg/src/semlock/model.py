"""Icons, grids, moves, passwords and the theoretical password space.

A password is an ordered sequence of moves.  Each move drags one icon to
the left, top, right or bottom side of another, stationary icon.  The
canonical serialization of a password is ``moved>anchor:side`` segments
joined by ``|``, with the side encoded as a single letter (L/T/R/B).
"""

from __future__ import annotations

import enum
import itertools
import re
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    InvalidMove,
    InvalidSide,
    ParseError,
    SpaceTooLarge,
    UnknownIcon,
)

ICON_ID_RE = re.compile(r"[a-z0-9_]{1,16}$")

#: Default ceiling on materialized password spaces.
DEFAULT_SPACE_CAP = 10_000_000


class Side(enum.Enum):
    """Resting position of a moved icon relative to its anchor.

    Declaration order (LEFT < TOP < RIGHT < BOTTOM) is the tie-break
    order used everywhere a deterministic choice between sides is needed.
    """

    LEFT = "L"
    TOP = "T"
    RIGHT = "R"
    BOTTOM = "B"

    @property
    def order(self) -> int:
        return _SIDE_ORDER[self]

    @property
    def offset(self) -> tuple[int, int]:
        """(dcol, drow) of the side cell; rows grow downward."""
        return _SIDE_OFFSET[self]

    @classmethod
    def from_char(cls, ch: str) -> "Side":
        try:
            return cls(ch)
        except ValueError:
            raise InvalidSide(f"invalid side code {ch!r}, expected one of L, T, R, B") from None


_SIDE_ORDER = {side: i for i, side in enumerate(Side)}
_SIDE_OFFSET = {
    Side.LEFT: (-1, 0),
    Side.TOP: (0, -1),
    Side.RIGHT: (1, 0),
    Side.BOTTOM: (0, 1),
}


@dataclass(frozen=True, order=True)
class IconId:
    """An icon identity: short ASCII id plus its display ordinal."""

    id: str
    ordinal: int

    def __post_init__(self):
        if not ICON_ID_RE.match(self.id):
            raise UnknownIcon(f"icon id {self.id!r} must match [a-z0-9_]{{1,16}}")
        if self.ordinal < 0:
            raise ValueError(f"icon ordinal must be >= 0, got {self.ordinal}")


@dataclass(frozen=True)
class Move:
    """One drag action: ``moved`` comes to rest at ``side`` of ``anchor``."""

    moved: IconId
    anchor: IconId
    side: Side

    def __post_init__(self):
        if self.moved.id == self.anchor.id:
            raise InvalidMove(f"icon {self.moved.id!r} cannot anchor on itself")

    @property
    def token(self) -> str:
        return f"{self.moved.id}>{self.anchor.id}:{self.side.value}"


@dataclass(frozen=True)
class SemanticPassword:
    """An ordered, nonempty sequence of moves."""

    moves: tuple[Move, ...]

    def __post_init__(self):
        if not isinstance(self.moves, tuple):
            object.__setattr__(self, "moves", tuple(self.moves))
        if len(self.moves) < 1:
            raise InvalidMove("a password needs at least one move")

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    @property
    def canonical(self) -> str:
        return canonicalize(self)

    @property
    def tokens(self) -> list[str]:
        return [m.token for m in self.moves]


@dataclass(frozen=True)
class GridSpec:
    """Grid dimensions, icon set and the default placement of every icon."""

    cols: int
    rows: int
    icons: tuple[IconId, ...]
    placement: Mapping[str, tuple[int, int]]

    def __post_init__(self):
        if self.cols < 2 or self.rows < 2:
            raise ValueError("grid needs at least 2 columns and 2 rows")
        ids = [icon.id for icon in self.icons]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate icon ids in grid icon set")
        if len(self.icons) > self.cols * self.rows:
            raise ValueError("more icons than grid cells")
        if set(self.placement) != set(ids):
            raise ValueError("placement must cover exactly the icon set")
        cells = list(self.placement.values())
        if len(set(cells)) != len(cells):
            raise ValueError("icons placed on the same cell")
        for cell in cells:
            if not self.in_bounds(cell):
                raise ValueError(f"placement {cell} outside {self.cols}x{self.rows} grid")

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        c, r = cell
        return 0 <= c < self.cols and 0 <= r < self.rows

    def icon(self, icon_id: str) -> IconId:
        for ic in self.icons:
            if ic.id == icon_id:
                return ic
        raise UnknownIcon(f"icon {icon_id!r} not in grid icon set")

    @property
    def icon_ids(self) -> list[str]:
        return [icon.id for icon in self.icons]


def default_icon_set(n: int) -> list[IconId]:
    """n generic icons whose id order matches their ordinal order."""
    if n < 2:
        raise ValueError("need at least 2 icons")
    if n <= 26:
        names = string.ascii_lowercase[:n]
    else:
        names = [f"i{i:04d}" for i in range(n)]
    return [IconId(name, i) for i, name in enumerate(names)]


def default_grid() -> GridSpec:
    """The stock 9x6 board with six icons spread over two rows."""
    icons = (
        IconId("cup", 0),
        IconId("person", 1),
        IconId("board", 2),
        IconId("bottle", 3),
        IconId("cheese", 4),
        IconId("leaf", 5),
    )
    placement = {
        "cup": (1, 1),
        "person": (4, 1),
        "board": (7, 1),
        "bottle": (1, 4),
        "cheese": (4, 4),
        "leaf": (7, 4),
    }
    return GridSpec(cols=9, rows=6, icons=icons, placement=placement)


def canonicalize(password: SemanticPassword) -> str:
    """Serialize a password to its canonical string.

    The encoding is injective over valid passwords: segment structure is
    fixed and neither ``>`` nor ``:`` may appear in an icon id.
    """
    parts = []
    for move in password.moves:
        if move.moved.id == move.anchor.id:
            raise InvalidMove(f"icon {move.moved.id!r} cannot anchor on itself")
        parts.append(move.token)
    return "|".join(parts)


def parse_canonical(s: str, icons: Iterable[IconId]) -> SemanticPassword:
    """Parse a canonical string against an icon set.

    Raises ParseError (with the byte offset of the offending move),
    UnknownIcon, InvalidSide or InvalidMove.
    """
    icon_map = {icon.id: icon for icon in icons}
    if not s:
        raise ParseError(0, "empty password string")
    moves = []
    offset = 0
    for segment in s.split("|"):
        moves.append(_parse_move(segment, offset, icon_map))
        offset += len(segment) + 1
    return SemanticPassword(tuple(moves))


def _parse_move(segment: str, base: int, icon_map: Mapping[str, IconId]) -> Move:
    gt = segment.find(">")
    if gt < 1:
        raise ParseError(base, f"expected 'moved>anchor:side', got {segment!r}")
    colon = segment.find(":", gt + 1)
    if colon < gt + 2:
        raise ParseError(base, f"missing ':side' in {segment!r}")
    moved_id = segment[:gt]
    anchor_id = segment[gt + 1 : colon]
    side_code = segment[colon + 1 :]
    for name, raw in (("moved", moved_id), ("anchor", anchor_id)):
        if not ICON_ID_RE.match(raw):
            raise ParseError(base, f"bad {name} icon id {raw!r}")
    if len(side_code) != 1:
        raise ParseError(base + colon + 1, f"side must be one letter, got {side_code!r}")
    side = Side.from_char(side_code)
    for raw in (moved_id, anchor_id):
        if raw not in icon_map:
            raise UnknownIcon(f"icon {raw!r} not in icon set")
    return Move(icon_map[moved_id], icon_map[anchor_id], side)


def theoretical_space(n: int, k: int) -> int:
    """Size of the full password space: (4*n*(n-1))**k, exact.

    Python integers are unbounded, so the count never wraps or
    overflows; it is returned exactly for any n, k.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 icons, got {n}")
    if k < 1:
        raise ValueError(f"need k >= 1 moves, got {k}")
    return (4 * n * (n - 1)) ** k


def move_alphabet(icons: Sequence[IconId]) -> list[Move]:
    """All 4*n*(n-1) single moves over an icon set, sorted by token."""
    moves = [
        Move(a, b, side)
        for a, b in itertools.permutations(icons, 2)
        for side in Side
    ]
    moves.sort(key=lambda m: m.token)
    return moves


def enumerate_space(
    n: int,
    k: int,
    cap: int = DEFAULT_SPACE_CAP,
    icons: Sequence[IconId] | None = None,
) -> list[SemanticPassword]:
    """Materialize every length-k password over n icons, in canonical order.

    `icons` defaults to a generic a, b, c, ... set.  Raises SpaceTooLarge
    when the space exceeds `cap`.
    """
    if icons is None:
        icons = default_icon_set(n)
    elif len(icons) != n:
        raise ValueError(f"icon set size {len(icons)} does not match n={n}")
    total = theoretical_space(n, k)
    if total > cap:
        raise SpaceTooLarge(f"space of {total} passwords exceeds cap {cap}")
    alphabet = move_alphabet(icons)
    # Tokens are prefix-free, so tuple order over sorted tokens equals
    # lexicographic order of the joined canonical strings.
    return [SemanticPassword(combo) for combo in itertools.product(alphabet, repeat=k)]


def enumerate_space_for(
    icons: Sequence[IconId], k: int, cap: int = DEFAULT_SPACE_CAP
) -> list[SemanticPassword]:
    """enumerate_space over an explicit icon set."""
    return enumerate_space(len(icons), k, cap=cap, icons=icons)
