"""End-to-end harness: lattice -> set representation -> weight family -> order check.

For a validated join-semilattice the builder derives the set representation
T, indexes the universe V = union of all T(e) (ascending, so member v gets
function index v+1), builds a GLF family with one function per member, and
assigns each element the certified supremum over its set's members.

The order statement is verified at the weight level:

  * e1 <= e2: T(e1) is contained in T(e2), so the supremum over T(e1) is
    pointwise below the one over T(e2); checked exactly per segment and on
    random vectors through the sequence norms.
  * e1 not<= e2: pick the least v in T(e1) minus T(e2). Along every round
    selecting v's function, the exact ratio of prefix integrals against
    e2's supremum meets the bound q_i K_{i-1} / (K_{i-1} + 1) and grows,
    so no constant below the achieved maximum lets e2's basis dominate.

A finite run certifies a finite ratio only; the reports state the achieved
maximum and the per-round bounds rather than claiming unbounded growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import InputError, InsufficientRounds, InternalInvariantFailure, ThresholdNotMet
from .family import (
    GLFFamily,
    RatioReport,
    build_family,
    ratio_report,
    sup_weights,
)
from .glf import DEFAULT_DEPTH_BUDGET
from .lorentz import lorentz_norm, random_rational_vector, sample_weights
from .representation import (
    RepMap,
    build_representation,
    check_interval_identity,
    verify_representation,
)
from .semilattice import Enumeration, JoinTable, enumerate_elements, layer_decomposition

DEFAULT_ROUNDS = 12
DEFAULT_RATIO_THRESHOLD = Fraction(5)
DEFAULT_PAIR_ENUM = "round-robin"
DEFAULT_NORM_SAMPLES = 100


@dataclass(frozen=True)
class ModelReport:
    """Everything needed to audit one lattice model."""

    table: JoinTable
    enum: Enumeration
    rep: RepMap
    universe: tuple            # ascending members of V
    family: GLFFamily
    weights: dict              # element -> certified supremum weight
    theta_table: dict          # (e1, e2) -> "domination" | "incomparability"

    def members_of(self, element: str) -> frozenset:
        """Family indices (1-based positions in V) of the element's set."""
        pos = {v: k + 1 for k, v in enumerate(self.universe)}
        return frozenset(pos[v] for v in self.rep.sets[element])


@dataclass(frozen=True)
class PairVerdict:
    e1: str
    e2: str
    relation: str              # "le" or "incomparable" (direction e1 vs e2)
    verdict: str               # "domination" or "incomparability"
    pointwise: bool | None = None       # exact per-segment weight comparison
    norms_ok: bool | None = None        # random-vector norm comparisons
    vectors_checked: int = 0
    witness_member: int | None = None   # universe member in T(e1) - T(e2)
    ratios: RatioReport | None = None
    max_ratio: Fraction | None = None
    threshold_met: bool | None = None

    @property
    def consistent(self) -> bool:
        return (self.relation == "le") == (self.verdict == "domination")

    @property
    def ok(self) -> bool:
        if self.verdict == "domination":
            return bool(self.pointwise) and bool(self.norms_ok)
        return (
            bool(self.threshold_met)
            and self.ratios is not None
            and self.ratios.all_bounds_met
            and self.ratios.ratios_strictly_increase
        )


@dataclass(frozen=True)
class OrderIsoReport:
    verdicts: tuple
    threshold: Fraction
    seed: int
    norm_samples: int

    @property
    def passed(self) -> bool:
        return all(v.consistent and v.ok for v in self.verdicts)


def build_model(
    table: JoinTable,
    p_hint: int | None = None,
    rounds: int = DEFAULT_ROUNDS,
    eps_schedule=None,
    pair_enum=DEFAULT_PAIR_ENUM,
    tiebreak: str = "lex",
    family: GLFFamily | None = None,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
) -> ModelReport:
    """Build representation, family, and per-element weights for a lattice.

    ``family`` may supply a prebuilt family (its size must equal |V|);
    otherwise one is built with P = |V| functions. Every universe member
    must be selected at least once within the rounds played.
    """
    decomp = layer_decomposition(table)
    enum = enumerate_elements(decomp, tiebreak)
    rep, trace = build_representation(enum, table)
    rep_check = verify_representation(rep, table)
    if not rep_check.passed:
        raise InternalInvariantFailure(f"representation checks failed: {rep_check.failures}")
    identity = check_interval_identity(trace)
    if not identity.passed:
        raise InternalInvariantFailure(f"interval identity failed: {identity.failures}")

    universe = tuple(sorted(set().union(*rep.sets.values())))
    p_count = len(universe)
    if p_hint is not None:
        if p_hint < p_count:
            raise InputError(f"p_hint {p_hint} below required universe size {p_count}")
        p_count = p_hint

    if family is None:
        family = build_family(
            p_count,
            rounds,
            eps_schedule=eps_schedule,
            pair_enum=pair_enum,
            depth_budget=depth_budget,
        )
    elif family.size < len(universe):
        raise InputError(
            f"prebuilt family has {family.size} functions, need {len(universe)}"
        )

    selected = {rnd.p for rnd in family.rounds}
    pos = {v: k + 1 for k, v in enumerate(universe)}
    for v in universe:
        if pos[v] not in selected:
            raise InsufficientRounds(v, family.round_count)

    weights = {}
    for e in table.elements:
        members = frozenset(pos[v] for v in rep.sets[e])
        weights[e] = sup_weights(family, members, certify=True, depth_budget=depth_budget)

    theta = {}
    for e1 in table.elements:
        for e2 in table.elements:
            theta[(e1, e2)] = "domination" if table.leq(e1, e2) else "incomparability"

    return ModelReport(table, enum, rep, universe, family, weights, theta)


def verify_order_iso(
    model: ModelReport,
    ratio_threshold=DEFAULT_RATIO_THRESHOLD,
    seed: int = 0,
    norm_samples: int = DEFAULT_NORM_SAMPLES,
    norm_length: int = DEFAULT_NORM_SAMPLES,
) -> OrderIsoReport:
    """Certify that the weight order mirrors the lattice order, pair by pair."""
    ratio_threshold = Fraction(ratio_threshold)
    if ratio_threshold < 1:
        raise InputError("ratio threshold must be at least 1")
    table = model.table
    rng = Random(seed)
    n_max = min(norm_length, int(model.family.domain_end()))
    sampled = {e: sample_weights(w, n_max) for e, w in model.weights.items()}

    verdicts = []
    for e1 in table.elements:
        for e2 in table.elements:
            if e1 == e2:
                continue
            if table.leq(e1, e2):
                pointwise = model.weights[e1].pointwise_leq(model.weights[e2])
                norms_ok = True
                for _ in range(norm_samples):
                    a = random_rational_vector(rng, rng.randint(1, n_max))
                    if lorentz_norm(a, sampled[e1]) > lorentz_norm(a, sampled[e2]):
                        norms_ok = False
                        break
                verdicts.append(
                    PairVerdict(
                        e1, e2, "le", "domination",
                        pointwise=pointwise, norms_ok=norms_ok,
                        vectors_checked=norm_samples,
                    )
                )
            else:
                diff = sorted(model.rep.sets[e1] - model.rep.sets[e2])
                if not diff:
                    raise InternalInvariantFailure(
                        f"{e1!r} not below {e2!r} but its set is contained in the other"
                    )
                v = diff[0]
                p_prime = model.universe.index(v) + 1
                members = model.members_of(e2)
                report = ratio_report(model.family, members, p_prime)
                max_ratio = report.max_ratio
                verdicts.append(
                    PairVerdict(
                        e1, e2, "incomparable", "incomparability",
                        witness_member=v, ratios=report,
                        max_ratio=max_ratio,
                        threshold_met=max_ratio >= ratio_threshold,
                    )
                )
    report = OrderIsoReport(tuple(verdicts), ratio_threshold, seed, norm_samples)
    for v in report.verdicts:
        if v.verdict == "incomparability" and not v.threshold_met:
            raise ThresholdNotMet((v.e1, v.e2), v.max_ratio, ratio_threshold, report)
    return report
