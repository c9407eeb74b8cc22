import csv
import io

import pytest

from repeaterplan import NetworkPlanner
from repeaterplan.exceptions import InvalidParameterError
from repeaterplan.hexgrid import centered_hex_number, rings_needed
from repeaterplan.sensitivity import CSV_HEADER, sweep

BASE = NetworkPlanner(users=1000, area_radius=40, coverage_cap=5)


def non_increasing(xs):
    return all(b <= a for a, b in zip(xs, xs[1:]))


def non_decreasing(xs):
    return all(b >= a for a, b in zip(xs, xs[1:]))


def test_radius_sweep_cell_counts():
    result = sweep(BASE, "R", [20, 40, 80])
    assert result.metric("cells") == [37, 91, 331]
    assert non_decreasing(result.metric("repeaters"))


def test_radius_cliff_is_reported_not_raised():
    result = sweep(BASE, "R", [40, 60, 80, 120])
    feasible = [p.feasible for p in result.points]
    assert feasible[0] and not feasible[-1]
    last = result.points[-1]
    assert last.constraint == "tones"
    assert last.cells == centered_hex_number(rings_needed(120, 5)) == 631
    assert last.clusters is None


def test_height_sweep_repeaters_non_increasing():
    result = sweep(BASE, "H", [5, 10, 15, 25, 40, 80])
    repeaters = result.metric("repeaters")
    assert non_increasing(repeaters)
    assert repeaters[0] > repeaters[-1]


def test_delta_f_sweep_channels():
    result = sweep(BASE, "delta_f", [0.1, 0.2])
    assert result.metric("channels") == [24, 12]
    wide = sweep(BASE, "delta_f", [0.05, 0.1, 0.15, 0.2, 0.3])
    assert non_increasing(wide.metric("channels"))
    assert non_decreasing(wide.metric("clusters_required"))


def test_users_sweep():
    result = sweep(BASE, "users", [100, 500, 1000, 1296])
    assert non_decreasing(result.metric("clusters_required"))
    assert all(p.feasible for p in result.points)


def test_parallel_sweep_matches_serial():
    values = [20, 30, 40, 50, 60]
    assert sweep(BASE, "R", values, n_jobs=3) == sweep(BASE, "R", values)


def test_csv_output():
    text = sweep(BASE, "R", [20, 40]).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_HEADER
    assert rows[1][:3] == ["R", "20", "0"]
    assert rows[2][:5] == ["R", "40", "1", "91", "91"]


def test_base_estimator_untouched():
    sweep(BASE, "H", [10, 20])
    assert BASE.coverage_cap == 5 and BASE.antenna_height == 15.0


@pytest.mark.parametrize("param, values", [("X", [1]), ("R", []), ("R", [40, 20]), ("R", [40, 40])])
def test_sweep_rejects_bad_input(param, values):
    with pytest.raises(InvalidParameterError):
        sweep(BASE, param, values)
