"""Smoke tests for the python bindings against the bundled data."""

import os

import pytest

import brillo

DATA = os.environ.get("BRILLO_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def path(name: str) -> str:
    return os.path.join(DATA, name)


def test_expected_utility_closed_form():
    table = brillo.UtilityTable.defaults()
    probs = brillo.to_distribution(brillo.Intent.Order, 0.9)
    assert brillo.expected_utility("respond_Order", probs, table) == pytest.approx(0.8)
    assert brillo.select_action(probs, table) == "respond_Order"
    uniform = {str(i).split(".")[-1]: 0.1 for i in brillo.Intent.__members__.values()}
    assert brillo.select_action(uniform, table) == "AskRepeat"


def test_classification_and_slots():
    rules = brillo.RuleTable.load(path("rules.tsv"))
    intent, confidence = rules.classify_argmax("what's on the menu")
    assert intent == brillo.Intent.Menu
    assert confidence > 0.5

    graph = brillo.SemanticGraph.load(path("graph.tsv"))
    slots = brillo.extract_order_slots("a green power without mint", brillo.Intent.Order, graph)
    assert slots.product == "Green Power"
    assert [(m.ingredient, m.remove) for m in slots.modifications] == [("mint", True)]


def test_similarity_and_recommendation():
    graph = brillo.SemanticGraph.load(path("graph.tsv"))
    assert len(graph.drinks()) == 12
    assert graph.most_similar_drink("Green Power", True) == "Morning Glow"
    assert graph.shared_ingredients("Green Power", "Morning Glow") == 3

    store = brillo.LongTermStore.load(path("profiles.jsonl"))
    assert store.preferred_drink("uma") == "Green Power"

    ctx = brillo.RecommendationContext()
    ctx.user_id = "uma"
    ctx.persona = brillo.Persona.Worker
    ctx.known_user = True
    strategy, drink = brillo.recommend(ctx, store, graph)
    assert strategy == brillo.Strategy.PreferredDrink
    assert drink == "Green Power"


def test_confusion_channel_is_seeded():
    a = brillo.ConfusionChannel.with_default_recall(0)
    b = brillo.ConfusionChannel.with_default_recall(0)
    draws_a = [a.corrupt_intent(brillo.Intent.Menu) for _ in range(50)]
    draws_b = [b.corrupt_intent(brillo.Intent.Menu) for _ in range(50)]
    assert draws_a == draws_b
    assert a.recall(brillo.Intent.Menu) == 0.5


def test_fsm_round_trip():
    state = brillo.InteractionState()
    state.user_id = "u"
    state.state = brillo.UserState.Ordering
    parked, changed, diag = brillo.transition(state, brillo.Trigger.UserLost)
    assert changed and parked.state == brillo.UserState.OutOfSight
    restored, changed, diag = brillo.transition(parked, brillo.Trigger.UserSeen)
    assert changed and restored.state == brillo.UserState.Ordering

    gone = brillo.InteractionState()
    gone.state = brillo.UserState.Gone
    after, changed, diag = brillo.transition(gone, brillo.Trigger.TurnGrant)
    assert after.state == brillo.UserState.Gone and not changed and diag


def test_scheduling_makespan():
    recipes = brillo.RecipeBook.load(path("recipes.tsv"))
    plan = brillo.plan_order("Green Power", recipes, "o1")
    assert len(plan) == 5
    timetable = brillo.schedule([plan], arms=2)
    assert timetable.makespan == pytest.approx(16.0)
    # A second identical order on two arms shares the blender, so it is
    # slower than a free-for-all but still beats full serialization.
    both = brillo.schedule([plan, brillo.plan_order("Green Power", recipes, "o2")], arms=2)
    serial = brillo.schedule([plan, brillo.plan_order("Green Power", recipes, "o2")], arms=1)
    assert both.makespan <= serial.makespan


def test_full_pipeline_is_deterministic():
    first = brillo.run_scenario(path("config.cfg"), path("scenarios/two_customers.scn"), seed=0)
    second = brillo.run_scenario(path("config.cfg"), path("scenarios/two_customers.scn"), seed=0)
    assert first == second
    report = brillo.report_text(first)
    assert "== users ==" in report
    assert "uma" in report
