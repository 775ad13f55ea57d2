"""Search over binary labelings of an unlabeled pool, scored on a small
trusted set, plus the analytic cost model for why hardware speedups
rescale the sweep but never flatten its exponential growth."""

from .core import (
    EvalResult,
    Labeling,
    SearchOutcome,
    Task,
    TrustedSet,
    UnlabeledPool,
    evaluate_mu,
    labeling_from_array,
    labeling_from_word,
    load_task,
    save_task,
)
from .costmodel import (
    CostLedger,
    SpeedupRegime,
    accelerated_runtime,
    classical_runtime,
    grover_queries,
    ledger_total,
    perf_per_cost,
    regime_runtime,
    scaling_table,
)
from .harness import (
    ScalingReport,
    TaskSpec,
    conventional_pipeline,
    generate_task,
    scaling_experiment,
    self_training_baseline,
)
from .learners import LearnerState, fit, flip_update, predict, predict_points
from .search import (
    GrayCursor,
    HeuristicConfig,
    chance_hit_experiment,
    error_counts_for_words,
    exhaustive_search,
    gray_sequence,
    heuristic_search,
    mu_for_words,
)

__version__ = "0.1.0"

__all__ = [
    "CostLedger",
    "EvalResult",
    "GrayCursor",
    "HeuristicConfig",
    "Labeling",
    "LearnerState",
    "ScalingReport",
    "SearchOutcome",
    "SpeedupRegime",
    "Task",
    "TaskSpec",
    "TrustedSet",
    "UnlabeledPool",
    "accelerated_runtime",
    "chance_hit_experiment",
    "classical_runtime",
    "conventional_pipeline",
    "error_counts_for_words",
    "evaluate_mu",
    "exhaustive_search",
    "fit",
    "flip_update",
    "generate_task",
    "gray_sequence",
    "grover_queries",
    "heuristic_search",
    "labeling_from_array",
    "labeling_from_word",
    "ledger_total",
    "load_task",
    "mu_for_words",
    "perf_per_cost",
    "predict",
    "predict_points",
    "regime_runtime",
    "save_task",
    "scaling_experiment",
    "scaling_table",
    "self_training_baseline",
]
