import json

import pytest

from repeaterplan.exceptions import UnknownUserError
from repeaterplan.plan import SCHEMA_VERSION, UserId, load_plan, plan_from_json, plan_to_json, save_plan


@pytest.mark.parametrize("fixture", ["plan_1000", "plan_10000"])
def test_round_trip(fixture, request, tmp_path):
    plan = request.getfixturevalue(fixture)
    path = tmp_path / "plan.json"
    save_plan(plan, path)
    again = load_plan(path)
    assert plan_to_json(again) == plan_to_json(plan)
    assert again.summary() == plan.summary()
    assert again.users == plan.users
    assert again.validate() == []


def test_schema_fields(plan_1000):
    doc = json.loads(plan_to_json(plan_1000))
    assert doc["version"] == SCHEMA_VERSION
    assert doc["mode"] == "cell"


def test_floats_are_fixed_precision(plan_1000):
    text = plan_to_json(plan_1000)
    assert "145.000000" in text
    assert "e-" not in text


def test_rejects_unknown_version(plan_1000):
    doc = json.loads(plan_to_json(plan_1000))
    doc["version"] = 99
    with pytest.raises(ValueError):
        plan_from_json(json.dumps(doc))


def test_user_id_text_round_trip(plan_10000):
    for u in plan_10000.users[:50]:
        assert UserId.parse(str(u)) == u
        assert plan_10000.user(str(u)) == u
    assert str(UserId(3, 12, 145.3)) == "gc3/pl12@145.300"
    assert str(UserId(None, 12, 145.3)) == "pl12@145.300"


def test_user_lookup(plan_1000):
    assert plan_1000.user(0) == plan_1000.users[0]
    assert plan_1000.user("5") == plan_1000.users[5]
    with pytest.raises(UnknownUserError):
        plan_1000.user(1000)
    with pytest.raises(UnknownUserError):
        plan_1000.user("pl53@145.000")
