"""Training: slab structure, per-point frequencies, and partial search trees.

Training draws a small number of inputs to build a global slab decomposition
of the x-axis, then estimates where each input position tends to land and
compiles one weighted-median search tree per position.  Tree size adapts to
each position's empirical entropy; regions a position rarely visits are left
to a plain binary search fallback, which caps total space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import ScenarioSpec, SeededRng, sample_input, scenario_from_dict, scenario_to_dict
from .geometry import InputSet

MODEL_FORMAT = "simax-model"
MODEL_VERSION = 1


class SlabStructure:
    """Partition of the x-axis into half-open slabs between sorted boundaries.

    With boundaries b_0 < ... < b_{m-1} the leaf slabs are
    (-inf, b_0), [b_0, b_1), ..., [b_{m-1}, +inf), indexed 0..m.  A boundary
    value belongs to the slab on its right.
    """

    __slots__ = ("boundaries", "_blist")

    def __init__(self, boundaries):
        b = np.asarray(boundaries, dtype=np.float64)
        if b.ndim != 1 or b.size == 0:
            raise ValueError("boundaries must be a nonempty 1-d array")
        if not np.isfinite(b).all():
            raise ValueError("boundaries must be finite")
        if not (np.diff(b) > 0).all():
            raise ValueError("boundaries must be strictly increasing")
        self.boundaries = b
        self._blist = [float(v) for v in b]  # plain floats for hot loops

    @property
    def num_slabs(self) -> int:
        return self.boundaries.size + 1

    def locate(self, x: float) -> int:
        return int(np.searchsorted(self.boundaries, x, side="right"))

    def locate_array(self, xs) -> np.ndarray:
        return np.searchsorted(self.boundaries, xs, side="right")

    def boundary_list(self) -> list[float]:
        return self._blist

    def __repr__(self) -> str:
        return f"SlabStructure(num_slabs={self.num_slabs})"


def build_slab_structure(inputs: Sequence[InputSet]) -> SlabStructure:
    """Build slabs from k training inputs: every k-th order statistic of the pooled x-values.

    Requires k >= ceil(log2 n) so that, under a product distribution, the
    expected number of fresh points falling in one slab stays O(1) with a
    bounded second moment.  Duplicate boundary values are merged.
    """
    if not inputs:
        raise ValueError("need at least one training input")
    n = inputs[0].n
    if any(inp.n != n for inp in inputs):
        raise ValueError("training inputs must all have the same size")
    k = len(inputs)
    need = max(1, math.ceil(math.log2(n)))
    if k < need:
        raise ValueError(f"need at least ceil(log2 n)={need} training inputs, got {k}")
    pooled = np.sort(np.concatenate([inp.xs for inp in inputs]))
    picks = pooled[0 : n * k : k]  # positions 0, k, 2k, ..., (n-1)k
    return SlabStructure(np.unique(picks))


def locate_leaf_slab(slabs: SlabStructure, x: float) -> int:
    """Index of the leaf slab containing x (boundary values go right)."""
    return slabs.locate(x)


@dataclass
class TrainingConfig:
    """Knobs for the training phase.

    epsilon trades space for limiting-phase optimality (more rounds, bigger
    trees); delta is the accuracy slack in the frequency estimates; c_rounds
    scales the round count; rounds_cap bounds it regardless.
    """

    epsilon: float = 0.5
    delta: float = 0.5
    c_rounds: float = 1.0
    rounds_cap: int = 10_000

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must be in (0, 1]")
        if not 0 < self.delta < 1:
            raise ValueError("delta must be in (0, 1)")
        if self.c_rounds <= 0:
            raise ValueError("c_rounds must be positive")
        if self.rounds_cap < 1:
            raise ValueError("rounds_cap must be >= 1")

    def slab_rounds(self, n: int) -> int:
        return max(1, math.ceil(math.log2(n)))

    def tree_rounds(self, n: int) -> int:
        raw = self.c_rounds * self.delta**-2 * n**self.epsilon * self.slab_rounds(n)
        return min(math.ceil(raw), self.rounds_cap)

    def leaf_threshold(self, n: int) -> int:
        return 5 * self.slab_rounds(n)


@dataclass
class FrequencyTable:
    """Per-position leaf-slab hit counts over a fixed number of training rounds."""

    counts: np.ndarray  # shape (n, num_slabs), unsigned ints
    rounds: int

    @property
    def n(self) -> int:
        return int(self.counts.shape[0])

    @property
    def num_slabs(self) -> int:
        return int(self.counts.shape[1])


def collect_frequencies(spec: ScenarioSpec, slabs: SlabStructure, rounds: int, rng: SeededRng) -> FrequencyTable:
    """Sample `rounds` fresh inputs and count leaf-slab hits per position."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    n = spec.n
    dtype = np.uint16 if rounds <= np.iinfo(np.uint16).max else np.uint32
    counts = np.zeros((n, slabs.num_slabs), dtype=dtype)
    rows = np.arange(n)
    for _ in range(rounds):
        inp = sample_input(spec, rng)
        # one hit per row per round, so plain fancy-index increment is safe
        counts[rows, slabs.locate_array(inp.xs)] += 1
    return FrequencyTable(counts=counts, rounds=rounds)


@dataclass
class SearchTree:
    """Partial weighted-median search tree over leaf-slab indices for one position.

    Parallel arrays describe nodes; node 0 is the root.  A node covers the
    inclusive slab interval [lo, hi].  split >= 0 marks an internal node that
    compares against the split slab: equal locates, smaller goes left, larger
    goes right.  split == -1 with lo == hi is a located leaf; with lo < hi it
    is a fallback region resolved by plain bisection on slab boundaries.
    Subtrees whose training mass fell below the leaf threshold are not
    expanded, which is what keeps total space near-linear.
    """

    num_slabs: int
    lo: list[int]
    hi: list[int]
    split: list[int]
    left: list[int]
    right: list[int]

    @property
    def node_count(self) -> int:
        return len(self.lo)

    def internal_nodes(self) -> list[int]:
        return [i for i, s in enumerate(self.split) if s >= 0]

    def max_search_steps(self) -> int:
        """Worst-case steps to locate any leaf slab (tree edges + bisection probes)."""

        def rec(nid: int) -> int:
            if self.split[nid] < 0:
                w = self.hi[nid] - self.lo[nid] + 1
                return 0 if w == 1 else math.ceil(math.log2(w))
            best = 1  # locating at the split slab costs this step alone
            for c in (self.left[nid], self.right[nid]):
                if c >= 0:
                    best = max(best, 1 + rec(c))
            return best

        return rec(0)


def build_search_tree(freq: FrequencyTable, i: int, leaf_threshold: int) -> SearchTree:
    """Compile the partial search tree for position i from its frequency row.

    Splits at the weighted median slab: the smallest slab index at which the
    prefix mass reaches half the node's mass.  Both children then carry at
    most half the parent's mass, so every non-split child is 2/3-reducing by
    construction.  Intervals whose mass is below leaf_threshold stay
    unexpanded fallback regions.
    """
    if leaf_threshold < 1:
        raise ValueError("leaf_threshold must be >= 1")
    row = freq.counts[i]
    prefix = np.zeros(row.size + 1, dtype=np.int64)
    np.cumsum(row, out=prefix[1:])
    lo_l: list[int] = []
    hi_l: list[int] = []
    split_l: list[int] = []
    left_l: list[int] = []
    right_l: list[int] = []

    def build(lo: int, hi: int) -> int:
        nid = len(lo_l)
        lo_l.append(lo)
        hi_l.append(hi)
        split_l.append(-1)
        left_l.append(-1)
        right_l.append(-1)
        count = int(prefix[hi + 1] - prefix[lo])
        if lo == hi or count < leaf_threshold:
            return nid
        target = int(prefix[lo]) + (count + 1) // 2
        lam = lo + int(np.searchsorted(prefix[lo + 1 : hi + 2], target, side="left"))
        split_l[nid] = lam
        if lam > lo:
            left_l[nid] = build(lo, lam - 1)
        if lam < hi:
            right_l[nid] = build(lam + 1, hi)
        return nid

    build(0, freq.num_slabs - 1)
    return SearchTree(num_slabs=freq.num_slabs, lo=lo_l, hi=hi_l, split=split_l, left=left_l, right=right_l)


def check_mu_reducing(tree: SearchTree, freq: FrequencyTable, i: int, mu: float) -> bool:
    """True iff every child subtree of every internal node carries at most mu times its parent's mass.

    The split slab itself is a completed search, not a subproblem, so it is
    exempt; left and right children are checked whether they were expanded
    into internal nodes or left as fallback regions.
    """
    row = freq.counts[i]
    prefix = np.zeros(row.size + 1, dtype=np.int64)
    np.cumsum(row, out=prefix[1:])

    def mass(nid: int) -> int:
        return int(prefix[tree.hi[nid] + 1] - prefix[tree.lo[nid]])

    for nid in tree.internal_nodes():
        parent = mass(nid)
        for c in (tree.left[nid], tree.right[nid]):
            if c >= 0 and mass(c) > mu * parent:
                return False
    return True


def search_steps_to_leaf(tree: SearchTree, leaf: int, interval: tuple[int, int] | None) -> int:
    """Steps a search for `leaf` takes; stops early once its current interval
    fits inside `interval` (inclusive slab index pair), or at the exact leaf
    when interval is None."""
    if not 0 <= leaf < tree.num_slabs:
        raise ValueError(f"leaf {leaf} out of range")
    if interval is not None:
        ilo, ihi = interval
        if not (0 <= ilo <= ihi < tree.num_slabs):
            raise ValueError(f"bad interval {interval!r}")
        if not ilo <= leaf <= ihi:
            raise ValueError(f"leaf {leaf} outside interval {interval!r}")
    steps = 0
    nid = 0
    lo, hi = tree.lo[0], tree.hi[0]
    fallback = tree.split[0] < 0
    while True:
        if interval is not None and interval[0] <= lo and hi <= interval[1]:
            return steps
        if lo == hi:
            return steps
        if fallback:
            steps += 1
            mid = (lo + hi) // 2
            if leaf <= mid:
                hi = mid
            else:
                lo = mid + 1
            continue
        s = tree.split[nid]
        steps += 1
        if leaf == s:
            lo = hi = s
            continue
        nid = tree.left[nid] if leaf < s else tree.right[nid]
        lo, hi = tree.lo[nid], tree.hi[nid]
        fallback = tree.split[nid] < 0


def simulate_restricted_search(
    tree: SearchTree,
    interval: tuple[int, int] | None,
    weights,
    trials: int,
    rng: SeededRng,
) -> float:
    """Mean step count over `trials` searches for leaves drawn from `weights`.

    weights is a nonnegative vector over all leaf slabs with positive total
    mass; when interval is given the support must lie inside it.  interval
    None means every search descends to its exact leaf slab.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (tree.num_slabs,):
        raise ValueError(f"weights must have length {tree.num_slabs}")
    if (w < 0).any() or not np.isfinite(w).all():
        raise ValueError("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValueError("weights must have positive total mass")
    if interval is not None:
        ilo, ihi = interval
        if not (0 <= ilo <= ihi < tree.num_slabs):
            raise ValueError(f"bad interval {interval!r}")
        outside = np.flatnonzero(w)
        if outside.size and (outside[0] < ilo or outside[-1] > ihi):
            raise ValueError("weights have support outside the interval")
    leaves = rng.generator.choice(tree.num_slabs, size=trials, p=w / total)
    total_steps = 0
    for leaf in leaves:
        total_steps += search_steps_to_leaf(tree, int(leaf), interval)
    return total_steps / trials


# ---------------------------------------------------------------------------
# trained model


@dataclass
class TrainedModel:
    """Everything the limiting phase needs, plus provenance for replay.

    frequencies is kept only when training is asked to retain it (for audits
    of the trees against their training counts); it is never serialized.
    """

    scenario: ScenarioSpec
    slabs: SlabStructure
    trees: list[SearchTree]
    epsilon: float
    delta: float
    seed: int
    slab_rounds: int
    tree_rounds: int
    leaf_threshold: int
    entropy_per_point: np.ndarray
    rng_algorithm: str = "pcg64"
    frequencies: FrequencyTable | None = None

    @property
    def n(self) -> int:
        return self.scenario.n

    @property
    def entropy_total(self) -> float:
        return float(self.entropy_per_point.sum())

    def total_nodes(self) -> int:
        return sum(t.node_count for t in self.trees)

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "rng_algorithm": self.rng_algorithm,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "slab_rounds": self.slab_rounds,
            "tree_rounds": self.tree_rounds,
            "leaf_threshold": self.leaf_threshold,
            "scenario": scenario_to_dict(self.scenario),
            "boundaries": [float(b) for b in self.slabs.boundaries],
            "trees": [
                {"lo": t.lo, "hi": t.hi, "split": t.split, "left": t.left, "right": t.right} for t in self.trees
            ],
            "entropy_per_point": [float(h) for h in self.entropy_per_point],
            "entropy_total": self.entropy_total,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TrainedModel":
        if not isinstance(obj, dict) or obj.get("format") != MODEL_FORMAT:
            raise ValueError("not a model file (bad or missing format tag)")
        if obj.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model version {obj.get('version')!r}")
        scenario = scenario_from_dict(obj["scenario"])
        slabs = SlabStructure(obj["boundaries"])
        trees = []
        for t in obj["trees"]:
            tree = SearchTree(
                num_slabs=slabs.num_slabs,
                lo=[int(v) for v in t["lo"]],
                hi=[int(v) for v in t["hi"]],
                split=[int(v) for v in t["split"]],
                left=[int(v) for v in t["left"]],
                right=[int(v) for v in t["right"]],
            )
            trees.append(tree)
        if len(trees) != scenario.n:
            raise ValueError(f"model has {len(trees)} trees for n={scenario.n}")
        return cls(
            scenario=scenario,
            slabs=slabs,
            trees=trees,
            epsilon=float(obj["epsilon"]),
            delta=float(obj["delta"]),
            seed=int(obj["seed"]),
            slab_rounds=int(obj["slab_rounds"]),
            tree_rounds=int(obj["tree_rounds"]),
            leaf_threshold=int(obj["leaf_threshold"]),
            entropy_per_point=np.asarray(obj["entropy_per_point"], dtype=np.float64),
            rng_algorithm=str(obj.get("rng_algorithm", "pcg64")),
        )


def train_model(
    spec: ScenarioSpec,
    config: TrainingConfig | None = None,
    seed: int = 0,
    keep_frequencies: bool = False,
) -> TrainedModel:
    """Run the whole training phase for one scenario.

    Consumes a single seeded stream in a fixed order: first slab_rounds(n)
    inputs for the slab structure, then tree_rounds(n) inputs for the
    frequency table.  The result is a pure function of (spec, config, seed).
    """
    config = config or TrainingConfig()
    n = spec.n
    rng = SeededRng(seed)
    k = config.slab_rounds(n)
    slabs = build_slab_structure([sample_input(spec, rng) for _ in range(k)])
    rounds = config.tree_rounds(n)
    freq = collect_frequencies(spec, slabs, rounds, rng)
    threshold = config.leaf_threshold(n)
    trees = [build_search_tree(freq, i, threshold) for i in range(n)]
    from .engine import entropy_proxy  # deferred: engine imports this module's types

    report = entropy_proxy(freq)
    return TrainedModel(
        scenario=spec,
        slabs=slabs,
        trees=trees,
        epsilon=config.epsilon,
        delta=config.delta,
        seed=int(seed),
        slab_rounds=k,
        tree_rounds=rounds,
        leaf_threshold=threshold,
        entropy_per_point=report.per_point,
        frequencies=freq if keep_frequencies else None,
    )


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"model file is not valid JSON: {e}") from None
    return TrainedModel.from_dict(obj)
