"""simax: distribution-sensitive planar maxima with verifiable certificates.

Two certified baselines (quadratic oracle, sort + sweep) plus a trainable
two-phase engine: a training phase learns where each input position tends to
land and compiles per-position search trees; the limiting phase then finds
the maxima of fresh inputs from the same distribution in near
entropy-optimal time, emitting the same certificate format as the baselines.
"""

from .distributions import (
    FiniteMixture,
    PointDistribution,
    PointMass,
    ScenarioError,
    ScenarioSpec,
    SeededRng,
    UniformRect,
    UniformSegment,
    build_scenario,
    dumps_scenario,
    load_scenario_file,
    loads_scenario,
    sample_input,
    scenario_from_dict,
    scenario_to_dict,
)
from .engine import (
    BucketQueue,
    EngineState,
    EntropyReport,
    RunStats,
    entropy_proxy,
    make_engine_state,
    run_maxima,
    search_step,
    update_step,
)
from .geometry import (
    BaselineStats,
    Certificate,
    CertificateIndexError,
    InputSet,
    Point,
    brute_force_maxima,
    check_certificate,
    dominates,
    sort_scan_maxima,
    verify_certificate,
)
from .learning import (
    FrequencyTable,
    SearchTree,
    SlabStructure,
    TrainedModel,
    TrainingConfig,
    build_search_tree,
    build_slab_structure,
    check_mu_reducing,
    collect_frequencies,
    load_model,
    locate_leaf_slab,
    save_model,
    simulate_restricted_search,
    train_model,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineStats",
    "BucketQueue",
    "Certificate",
    "CertificateIndexError",
    "EngineState",
    "EntropyReport",
    "FiniteMixture",
    "FrequencyTable",
    "InputSet",
    "Point",
    "PointDistribution",
    "PointMass",
    "RunStats",
    "ScenarioError",
    "ScenarioSpec",
    "SearchTree",
    "SeededRng",
    "SlabStructure",
    "TrainedModel",
    "TrainingConfig",
    "UniformRect",
    "UniformSegment",
    "brute_force_maxima",
    "build_scenario",
    "build_search_tree",
    "build_slab_structure",
    "check_certificate",
    "check_mu_reducing",
    "collect_frequencies",
    "dominates",
    "dumps_scenario",
    "entropy_proxy",
    "load_model",
    "load_scenario_file",
    "loads_scenario",
    "locate_leaf_slab",
    "make_engine_state",
    "run_maxima",
    "sample_input",
    "save_model",
    "scenario_from_dict",
    "scenario_to_dict",
    "search_step",
    "simulate_restricted_search",
    "sort_scan_maxima",
    "train_model",
    "update_step",
    "verify_certificate",
]
