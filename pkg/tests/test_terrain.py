import math

import numpy as np
import pytest

from repeaterplan.exceptions import InvalidParameterError
from repeaterplan.hexgrid import SQRT3, euclidean, tessellate
from repeaterplan.plan import load_plan, save_plan
from repeaterplan.terrain import (
    LARGE,
    NO_EFFECT,
    SMALL,
    AugmentationPlan,
    Obstacle,
    augment,
    blocked_links,
    classify,
    covered_cells,
    segment_disk_distance,
)

HIGH = 500.0  # meters, well above the 15 m masts


def crosses_disk(p, q, center, radius):
    """Segment-circle test by solving |p + t(q - p) - c|^2 = radius^2 for t in [0, 1]."""
    if math.dist(p, center) <= radius or math.dist(q, center) <= radius:
        return True
    dx, dy = q[0] - p[0], q[1] - p[1]
    fx, fy = p[0] - center[0], p[1] - center[1]
    a = dx * dx + dy * dy
    b = 2 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - radius * radius
    disc = b * b - 4 * a * c
    if disc < 0:
        return False
    root = math.sqrt(disc)
    return any(0 <= t <= 1 for t in ((-b - root) / (2 * a), (-b + root) / (2 * a)))


def brute_blocked(plan, obstacle):
    cells = plan.tessellation.cells
    return {(a, b) for a, b in plan.tessellation.adjacent_pairs()
            if crosses_disk(cells[a].center, cells[b].center, obstacle.center, obstacle.radius)}


def midpoint(plan, a, b):
    pa, pb = plan.tessellation.cells[a].center, plan.tessellation.cells[b].center
    return ((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2)


def test_blocked_links_reference_obstacle(plan_1000):
    ob = Obstacle((10.0, 0.0), 6.0, HIGH)
    assert blocked_links(plan_1000, ob) == brute_blocked(plan_1000, ob)
    assert len(plan_1000.tessellation.adjacent_pairs()) == 240


def test_blocked_links_random_obstacles(plan_1000):
    rng = np.random.default_rng(11)
    for _ in range(300):
        ob = Obstacle(tuple(rng.uniform(-50, 50, 2)), float(rng.uniform(0.2, 15)), HIGH)
        assert blocked_links(plan_1000, ob) == brute_blocked(plan_1000, ob)


def test_tiny_obstacle_on_one_link(plan_1000):
    ob = Obstacle(midpoint(plan_1000, 0, 3), 0.1, HIGH)
    assert blocked_links(plan_1000, ob) == {(0, 3)}
    assert classify(plan_1000, ob) == SMALL


def test_segment_distance():
    assert segment_disk_distance((0, 0), (2, 0), (1, 1)) == pytest.approx(1)
    assert segment_disk_distance((0, 0), (2, 0), (3, 0)) == pytest.approx(1)
    assert segment_disk_distance((0, 0), (0, 0), (3, 4)) == pytest.approx(5)


def test_classify(plan_1000):
    big = Obstacle((4.33, 2.5), 5.1, HIGH)
    assert len(covered_cells(plan_1000, big)) == 3
    assert classify(plan_1000, big) == LARGE
    assert classify(plan_1000, Obstacle((100, 100), 5, HIGH)) == NO_EFFECT
    # lower than the antennas: blocks nothing
    assert classify(plan_1000, Obstacle((0, 0), 5, 10)) == NO_EFFECT


def test_obstacle_validation():
    with pytest.raises(InvalidParameterError):
        Obstacle((0, 0), 0, HIGH)
    with pytest.raises(InvalidParameterError):
        Obstacle((0, 0), 1, -5)


def test_mobile_small_adds_nothing(plan_1000):
    aug = augment(plan_1000, Obstacle(midpoint(plan_1000, 0, 3), 0.5, HIGH), "mobile")
    assert aug.case_label == "Mobile-Small"
    assert aug.added_repeaters == ()
    assert aug.affected_cells == {0, 3}


def test_emergency_small_adds_summit(plan_1000):
    ob = Obstacle(midpoint(plan_1000, 0, 3), 0.5, HIGH)
    aug = augment(plan_1000, ob, "emergency")
    assert aug.case_label == "Emergency-Small"
    (summit,) = aug.added_repeaters
    assert summit.position == ob.center
    reach = SQRT3 * plan_1000.tessellation.r
    near = [c for c in plan_1000.tessellation if euclidean(c.center, summit.position) <= reach]
    assert len(near) >= 2


def test_emergency_small_escalates_when_summit_is_isolated(plan_1000):
    ob = Obstacle((0.0, -45.5), 8.1, HIGH)
    assert classify(plan_1000, ob) == SMALL
    aug = augment(plan_1000, ob, "emergency")
    assert aug.case_label == "Emergency-Large"
    assert aug.warnings
    assert len(aug.added_repeaters) == len(tessellate(8.1, 2 * plan_1000.tessellation.r))


def test_emergency_large_inner_tessellation(plan_1000):
    ob = Obstacle((0.0, 0.0), 12.0, HIGH)
    aug = augment(plan_1000, ob, "emergency")
    assert aug.case_label == "Emergency-Large"
    inner = tessellate(12.0, 10.0)
    assert len(aug.added_repeaters) == len(inner) == 7
    displaced = {plan_1000.cluster_of_cell(i).id for i in covered_cells(plan_1000, ob)}
    for rep in aug.added_repeaters:
        assert rep.cluster in displaced
        assert rep.radius == 10.0
        assert rep.pl_tone == plan_1000.clusters[rep.cluster].pl_tone
        assert set(rep.channels) <= set(plan_1000.channel_table.channels)


def test_inner_scale_and_channel_cap(plan_1000):
    ob = Obstacle((0.0, 0.0), 12.0, HIGH)
    aug = augment(plan_1000, ob, "emergency", inner_scale=1.0, inner_channels=5)
    assert len(aug.added_repeaters) == len(tessellate(12.0, 5.0))
    assert all(len(r.channels) <= 5 for r in aug.added_repeaters)


def test_mobile_large_one_per_covered_cell(plan_1000):
    cell = plan_1000.tessellation.cells[12]
    ob = Obstacle(cell.center, 1.0, HIGH)
    aug = augment(plan_1000, ob, "mobile")
    assert aug.case_label == "Mobile-Large"
    (rep,) = aug.added_repeaters
    cluster = plan_1000.cluster_of_cell(12)
    assert rep.cluster == cluster.id and rep.pl_tone == cluster.pl_tone
    assert rep.channels == cluster.channels_in_use
    d = euclidean(rep.position, cell.center)
    assert d >= ob.radius
    apothem = cell.r * SQRT3 / 2
    assert apothem - 1e-9 <= d <= cell.r + 1e-9


def test_mobile_large_covering_several_cells(plan_1000):
    ob = Obstacle((4.33, 2.5), 5.1, HIGH)
    aug = augment(plan_1000, ob, "mobile")
    covered = covered_cells(plan_1000, ob)
    assert len(aug.added_repeaters) == len(covered) == 3
    for rep in aug.added_repeaters:
        assert euclidean(rep.position, ob.center) >= ob.radius - 1e-9


def test_augment_rejects_no_effect(plan_1000):
    with pytest.raises(InvalidParameterError):
        augment(plan_1000, Obstacle((100, 100), 5, HIGH), "mobile")
    with pytest.raises(InvalidParameterError):
        augment(plan_1000, Obstacle((0, 0), 5, HIGH), "flood")


def test_augment_is_deterministic(plan_1000):
    ob = Obstacle((0.0, 0.0), 12.0, HIGH)
    assert augment(plan_1000, ob, "emergency") == augment(plan_1000, ob, "emergency")


def test_augmentation_survives_save_and_load(plan_1000, tmp_path):
    aug = augment(plan_1000, Obstacle((4.33, 2.5), 5.1, HIGH), "mobile")
    path = tmp_path / "plan.json"
    save_plan(plan_1000.with_augmentation(aug), path)
    (again,) = load_plan(path).augmentations
    # positions are stored with six decimals
    assert again.case_label == aug.case_label
    assert again.affected_cells == aug.affected_cells
    for a, b in zip(again.added_repeaters, aug.added_repeaters):
        assert a.position == pytest.approx(b.position, abs=1e-6)
        assert (a.cluster, a.pl_tone, a.channels) == (b.cluster, b.pl_tone, b.channels)
    assert AugmentationPlan.from_dict(again.to_dict()) == again
