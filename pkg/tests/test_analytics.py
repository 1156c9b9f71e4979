import random

import pytest

from semlock import corpus, model
from semlock.analytics import (
    endpoint_heatmap,
    heatmap_from_cells,
    metrics_to_csv,
    pattern_cell,
    password_end_cells,
    usability_metrics,
)
from semlock.corpus import AttemptEvent, PatternRecord
from semlock.errors import EmptyInput


def event(tech="SEMANTIC", ready=0, touch=500, done=1300, ok=True, pid="p", session=1):
    return AttemptEvent(pid=pid, tech=tech, session=session,
                        ready=ready, touch=touch, done=done, ok=ok)


class TestHeatmap:
    def test_all_same_start_node(self):
        records = [PatternRecord("p", (1, 2, 3)) for _ in range(4)]
        hm = endpoint_heatmap(records, None, "start")
        assert hm.at(0, 0) == 100.0
        assert sum(sum(row) for row in hm.pct) == pytest.approx(100.0, abs=1e-9)

    def test_pattern_cells(self):
        assert pattern_cell(1) == (0, 0)
        assert pattern_cell(3) == (2, 0)
        assert pattern_cell(5) == (1, 1)
        assert pattern_cell(9) == (2, 2)

    def test_end_uses_last_node(self):
        records = [PatternRecord("p", (1, 2, 9))]
        hm = endpoint_heatmap(records, None, "end")
        assert hm.at(2, 2) == 100.0

    def test_percentages_sum_to_100(self):
        rng = random.Random(6)
        cells = [(rng.randrange(5), rng.randrange(4)) for _ in range(137)]
        hm = heatmap_from_cells(cells, 5, 4)
        assert sum(sum(row) for row in hm.pct) == pytest.approx(100.0, abs=1e-9)

    def test_permutation_equivariance(self):
        rng = random.Random(9)
        cells = [(rng.randrange(3), rng.randrange(3)) for _ in range(200)]
        hm = heatmap_from_cells(cells, 3, 3)
        flipped = heatmap_from_cells([(2 - c, r) for c, r in cells], 3, 3)
        for row in range(3):
            for col in range(3):
                assert flipped.at(2 - col, row) == hm.at(col, row)

    def test_password_start_heatmap(self, grid):
        records = corpus.synthesize_corpus(14, corpus.uniform_profile(500))
        hm = endpoint_heatmap(records, grid, "start")
        assert hm.cols == grid.cols and hm.rows == grid.rows
        assert sum(sum(row) for row in hm.pct) == pytest.approx(100.0, abs=1e-9)
        # starts can only be at the six initial cells
        nonzero = {(c, r) for r in range(hm.rows) for c in range(hm.cols) if hm.at(c, r) > 0}
        assert nonzero <= set(grid.placement.values())

    def test_password_end_heatmap_skips_infeasible(self, grid):
        bad = corpus.PasswordRecord(
            "p", model.parse_canonical("cup>person:R|cheese>person:R", grid.icons))
        good = corpus.PasswordRecord(
            "p", model.parse_canonical("cup>person:R|board>cup:R", grid.icons))
        cells, skipped = password_end_cells([bad, good], grid)
        assert skipped == 1
        assert cells == [(6, 1)]
        hm = endpoint_heatmap([bad, good], grid, "end")
        assert hm.at(6, 1) == 100.0

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            endpoint_heatmap([], None, "start")
        with pytest.raises(EmptyInput):
            heatmap_from_cells([], 3, 3)

    def test_csv(self):
        hm = heatmap_from_cells([(0, 0), (1, 1)], 2, 2)
        lines = hm.to_csv().strip().splitlines()
        assert lines[0] == "col,row,pct"
        assert lines[1] == "0,0,50.0"
        assert len(lines) == 5


class TestUsabilityMetrics:
    def test_single_success(self):
        metrics = usability_metrics([event()])
        m = metrics["SEMANTIC"]
        assert m.mean_pre_login_delay_ms == 500
        assert m.mean_login_speed_ms == 800
        assert m.error_rate_pct == 0.0

    def test_error_rate_half(self):
        metrics = usability_metrics([event(), event(ok=False, done=None)])
        assert metrics["SEMANTIC"].error_rate_pct == 50.0

    def test_speed_ignores_failures(self):
        base = [event(touch=500, done=1300), event(touch=400, done=1000)]
        with_failure = base + [event(ok=False, touch=100, done=5000)]
        speed_base = usability_metrics(base)["SEMANTIC"].mean_login_speed_ms
        speed_more = usability_metrics(with_failure)["SEMANTIC"].mean_login_speed_ms
        assert speed_base == speed_more == 700

    def test_delay_counts_failures_too(self):
        metrics = usability_metrics([event(touch=500), event(ok=False, touch=100, done=None)])
        assert metrics["SEMANTIC"].mean_pre_login_delay_ms == 300

    def test_grouped_by_technique(self):
        metrics = usability_metrics([event(), event(tech="PIN", touch=200, done=400)])
        assert set(metrics) == {"PIN", "SEMANTIC"}
        assert metrics["PIN"].mean_login_speed_ms == 200

    def test_no_successes_speed_is_none(self):
        metrics = usability_metrics([event(ok=False, done=None)])
        assert metrics["SEMANTIC"].mean_login_speed_ms is None
        assert metrics["SEMANTIC"].error_rate_pct == 100.0

    def test_empty(self):
        with pytest.raises(EmptyInput):
            usability_metrics([])

    def test_csv(self):
        text = metrics_to_csv(usability_metrics([event()]))
        assert text.splitlines()[0].startswith("technique,attempts,")
        assert "SEMANTIC,1,1,500" in text
