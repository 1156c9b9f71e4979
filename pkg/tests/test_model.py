import pytest
from hypothesis import given, strategies as st

from semlock import model
from semlock.errors import InvalidMove, InvalidSide, ParseError, SpaceTooLarge, UnknownIcon
from semlock.model import IconId, Move, SemanticPassword, Side


def mk_password(*triples):
    icons = {}
    moves = []
    for moved, anchor, side in triples:
        for name in (moved, anchor):
            if name not in icons:
                icons[name] = IconId(name, len(icons))
        moves.append(Move(icons[moved], icons[anchor], side))
    return SemanticPassword(tuple(moves))


class TestCanonicalize:
    def test_reference_two_move(self, reference_password):
        assert reference_password.canonical == "cup>person:R|board>cup:R"

    def test_single_move(self):
        assert mk_password(("a", "b", Side.LEFT)).canonical == "a>b:L"

    def test_self_anchor_rejected(self):
        a = IconId("a", 0)
        with pytest.raises(InvalidMove):
            Move(a, a, Side.LEFT)

    def test_injective_over_full_space(self):
        space = model.enumerate_space(6, 2)
        canonicals = {p.canonical for p in space}
        assert len(canonicals) == 14400


class TestTheoreticalSpace:
    def test_reference_count(self):
        assert model.theoretical_space(6, 2) == 14400

    def test_minimal(self):
        assert model.theoretical_space(2, 1) == 8

    def test_matches_enumeration(self):
        assert model.theoretical_space(6, 1) == len(model.enumerate_space(6, 1)) == 120

    def test_power_identity(self):
        for n in range(2, 7):
            base = model.theoretical_space(n, 1)
            assert base == 4 * n * (n - 1)
            for k in range(1, 4):
                assert model.theoretical_space(n, k) == base ** k

    def test_validation(self):
        with pytest.raises(ValueError):
            model.theoretical_space(1, 1)
        with pytest.raises(ValueError):
            model.theoretical_space(2, 0)

    def test_huge_space_is_exact(self):
        # Arbitrary-precision integers: no wraparound at any magnitude.
        assert model.theoretical_space(100, 20) == (4 * 100 * 99) ** 20


class TestEnumerateSpace:
    def test_two_icons_one_move(self):
        got = [p.canonical for p in model.enumerate_space(2, 1)]
        assert got == ["a>b:B", "a>b:L", "a>b:R", "a>b:T",
                       "b>a:B", "b>a:L", "b>a:R", "b>a:T"]

    def test_size_matches_formula(self):
        for n in range(2, 7):
            for k in range(1, 4):
                expected = model.theoretical_space(n, k)
                if expected > 200_000:
                    continue
                space = model.enumerate_space(n, k)
                assert len(space) == expected
                assert len({p.canonical for p in space}) == expected

    def test_canonically_sorted(self):
        canonicals = [p.canonical for p in model.enumerate_space(4, 2)]
        assert canonicals == sorted(canonicals)

    def test_cap(self):
        with pytest.raises(SpaceTooLarge):
            model.enumerate_space(6, 2, cap=100)


class TestParseCanonical:
    def test_single(self, grid):
        p = model.parse_canonical("cup>person:L", grid.icons)
        assert p.moves[0].moved.id == "cup"
        assert p.moves[0].anchor.id == "person"
        assert p.moves[0].side is Side.LEFT

    def test_reference(self, grid, reference_password):
        assert model.parse_canonical("cup>person:R|board>cup:R", grid.icons) == reference_password

    def test_self_anchor(self, grid):
        with pytest.raises(InvalidMove):
            model.parse_canonical("cup>cup:L", grid.icons)

    def test_unknown_icon(self, grid):
        with pytest.raises(UnknownIcon):
            model.parse_canonical("cup>zebra:L", grid.icons)

    def test_invalid_side(self, grid):
        with pytest.raises(InvalidSide):
            model.parse_canonical("cup>person:X", grid.icons)

    def test_parse_error_offsets(self, grid):
        with pytest.raises(ParseError) as exc:
            model.parse_canonical("", grid.icons)
        assert exc.value.offset == 0
        with pytest.raises(ParseError) as exc:
            model.parse_canonical("cup>person:R|garbage", grid.icons)
        assert exc.value.offset == 13


def _password_strategy():
    icons = model.default_grid().icons
    pairs = st.tuples(st.sampled_from(icons), st.sampled_from(icons)).filter(
        lambda ab: ab[0].id != ab[1].id)
    move = st.builds(lambda ab, s: Move(ab[0], ab[1], s), pairs, st.sampled_from(list(Side)))
    return st.lists(move, min_size=1, max_size=4).map(lambda ms: SemanticPassword(tuple(ms)))


@given(_password_strategy())
def test_parse_roundtrip(password):
    grid = model.default_grid()
    assert model.parse_canonical(password.canonical, grid.icons) == password
