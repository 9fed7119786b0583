"""Bartender interaction engine: decision, scheduling and simulation core.

The heavy lifting lives in the compiled ``brillo._core`` module; this
package re-exports its public surface.
"""

from ._core import (  # noqa: F401
    BasicAction,
    BrilloError,
    ConfusionChannel,
    EngagementEstimate,
    Intent,
    InteractionState,
    Lexicon,
    LongTermStore,
    OrderModification,
    OrderRequest,
    Persona,
    RecipeBook,
    RecommendationContext,
    RuleTable,
    SemanticGraph,
    Sentiment,
    Strategy,
    Timetable,
    Trigger,
    TurnPolicy,
    UserState,
    UtilityTable,
    VoiceMood,
    expected_utility,
    extract_order_slots,
    fuse,
    is_low_engagement,
    plan_order,
    recommend,
    report_text,
    run_scenario,
    schedule,
    select_action,
    select_active_user,
    to_distribution,
    transition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
