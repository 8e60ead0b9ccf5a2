"""Risk-averse model-predictive control over priced timed automata."""

from .controller import ControllerMemory, RunTrace, StepOutcome, run_to_completion, step
from .formats import LoadError, builtin_path, load_automaton, load_scenario
from .model import (
    Automaton,
    EdgeRecord,
    ModelError,
    Path,
    RedundantPathRecord,
    StateRecord,
    are_equivalent_paths,
    end_parity,
    is_feasible_path,
    legal_states,
    out_degree_centrality,
)
from .objective import PathScore, RiskProfile, compare, score_path, uncertainty_ratio
from .planner import PlanRequest, PlanResult, enumerate_all_paths, plan
from .simulator import ScenarioScript, ScriptEvent, compare_profiles, run_scenario
from .update import EdsState, EffectiveView, UpdateError, active_redundant_paths, apply_update, classify_case

__version__ = "0.1.0"
