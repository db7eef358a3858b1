"""Families of mutually incomparable GLFs built in rounds.

Round i picks a pair (p_i, q_i) and extends function p_i by a "high" block
of certified steps carrying mass at least q_i * K_{i-1}, where K_{i-1} is
the prefix integral of the pointwise maximum so far; every other function
gets a single "low" constant of mass below 1 and value at most the final
high value. All functions share the round breakpoints, so the pointwise
supremum over any index subset M is again a weight whose round-i block is
the high cascade when p_i is in M and the low constant otherwise.

Certified-by-construction: every candidate segment is certified against
every *realized pattern*, i.e. every distinct restriction of such a
supremum to the current domain (at most 2^P - 1 functions). Consequently
each function, the running maximum, and every subset supremum certify.

The growth bookkeeping per round: K_i >= (1 + q_i) * K_{i-1} >= 3 * K_{i-1}
with K_0 = 2, while along rounds with p_i = p' the prefix integral of
w_{p'} at the round end is at least q_i * K_{i-1} against at most
K_{i-1} + 1 for any supremum avoiding p', giving certified ratio growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    EmptySubset,
    InputError,
    InternalInvariantFailure,
    NoQualifyingRounds,
)
from .glf import (
    DEFAULT_DEPTH_BUDGET,
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_STEP_LIMIT,
    ONE,
    TWO,
    PiecewiseWeight,
    certify_glf,
    extend_high,
    extend_low,
)
from .serialize import frac_str, parse_frac

PairEnum = Callable[[int], Iterator[tuple[int, int]]]

BASE_END = TWO
BASE_MASS = TWO  # prefix integral of the unit head, K_0


def q_major_pairs(p_count: int) -> Iterator[tuple[int, int]]:
    """(1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...: ordered by q, then p."""
    if p_count < 1:
        raise InputError("need at least one function index")
    for q in count(2):
        for p in range(1, min(q, p_count + 1)):
            yield p, q


def round_robin_pairs(p_count: int) -> Iterator[tuple[int, int]]:
    """p cycles 1..P while q = round + 1 grows, reaching every p within P rounds."""
    if p_count < 1:
        raise InputError("need at least one function index")
    for i in count(1):
        yield (i - 1) % p_count + 1, i + 1


PAIR_ENUMERATIONS: dict[str, PairEnum] = {
    "q-major": q_major_pairs,
    "round-robin": round_robin_pairs,
}


def default_eps_schedule(rounds: int) -> list[Fraction]:
    return [Fraction(1, 2 ** i) for i in range(1, rounds + 1)]


@dataclass(frozen=True)
class FamilyRound:
    """Record of one construction round."""

    index: int                # i, 1-based
    p: int
    q: int
    k_prev: Fraction          # prefix integral of the pointwise max before the round
    eps: Fraction             # value cap requested for the round
    high_segments: tuple      # ((end, value), ...) cascade for function p
    low_value: Fraction       # constant for every other function
    end: Fraction             # round boundary N_i


@dataclass(frozen=True)
class GLFFamily:
    """P weight functions built over shared round breakpoints."""

    size: int
    rounds: tuple

    def __post_init__(self):
        if self.size < 2:
            raise InputError("a family needs at least two functions")

    @property
    def round_count(self) -> int:
        return len(self.rounds)

    def round_start(self, i: int) -> Fraction:
        """Left end of round i's interval (1-based)."""
        return BASE_END if i == 1 else self.rounds[i - 2].end

    def high_mass(self, i: int) -> Fraction:
        rnd = self.rounds[i - 1]
        start = self.round_start(i)
        total = Fraction(0)
        for seg_end, value in rnd.high_segments:
            total += value * (seg_end - start)
            start = seg_end
        return total

    def low_mass(self, i: int) -> Fraction:
        rnd = self.rounds[i - 1]
        return rnd.low_value * (rnd.end - self.round_start(i))

    def assemble(self, choices: Sequence[bool]) -> PiecewiseWeight:
        """Weight taking the high cascade on rounds with a True choice."""
        if len(choices) != self.round_count:
            raise InputError("need one high/low choice per round")
        segments = [(BASE_END, ONE)]
        for rnd, high in zip(self.rounds, choices):
            if high:
                segments.extend(rnd.high_segments)
            else:
                segments.append((rnd.end, rnd.low_value))
        return PiecewiseWeight.from_segments(segments)

    def choices_for(self, members: frozenset) -> tuple:
        return tuple(rnd.p in members for rnd in self.rounds)

    def function_weight(self, p: int) -> PiecewiseWeight:
        if not 1 <= p <= self.size:
            raise InputError(f"function index {p} outside 1..{self.size}")
        return self.assemble(self.choices_for(frozenset({p})))

    def max_weight(self) -> PiecewiseWeight:
        return self.assemble((True,) * self.round_count)

    def k_values(self) -> list[Fraction]:
        """[K_0, K_1, ..., K_I], prefix integrals of the pointwise max."""
        ks = [BASE_MASS]
        w = self.max_weight() if self.rounds else None
        for rnd in self.rounds:
            ks.append(w.integral_to(rnd.end))
        return ks

    def domain_end(self) -> Fraction:
        return self.rounds[-1].end if self.rounds else BASE_END

    def to_doc(self) -> dict:
        return {
            "size": self.size,
            "rounds": [
                {
                    "index": rnd.index,
                    "p": rnd.p,
                    "q": rnd.q,
                    "k_prev": frac_str(rnd.k_prev),
                    "eps": frac_str(rnd.eps),
                    "high_segments": [
                        [frac_str(end), frac_str(v)] for end, v in rnd.high_segments
                    ],
                    "low_value": frac_str(rnd.low_value),
                    "end": frac_str(rnd.end),
                }
                for rnd in self.rounds
            ],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "GLFFamily":
        rounds = tuple(
            FamilyRound(
                index=r["index"],
                p=r["p"],
                q=r["q"],
                k_prev=parse_frac(r["k_prev"]),
                eps=parse_frac(r["eps"]),
                high_segments=tuple(
                    (parse_frac(end), parse_frac(v)) for end, v in r["high_segments"]
                ),
                low_value=parse_frac(r["low_value"]),
                end=parse_frac(r["end"]),
            )
            for r in doc["rounds"]
        )
        return cls(size=doc["size"], rounds=rounds)


def _realized_patterns(
    subsets: Sequence[frozenset], rounds: Sequence[FamilyRound]
) -> list[tuple]:
    """Distinct high/low choice vectors of the tracked suprema over played rounds."""
    vectors = {tuple(rnd.p in members for rnd in rounds) for members in subsets}
    return sorted(vectors)


def _certified_subsets(p_count: int, certified_subsets) -> list[frozenset]:
    """Subsets whose suprema are certified at every construction step.

    "all" tracks every nonempty subset (the construction then certifies
    every possible supremum by induction); an iterable restricts tracking
    to the listed subsets plus all singletons and the full set, which keeps
    large families affordable.
    """
    if certified_subsets == "all":
        return [
            frozenset(p for p in range(1, p_count + 1) if mask >> (p - 1) & 1)
            for mask in range(1, 2 ** p_count)
        ]
    subsets = {frozenset({p}) for p in range(1, p_count + 1)}
    subsets.add(frozenset(range(1, p_count + 1)))
    for m in certified_subsets:
        members = frozenset(m)
        if not members:
            raise EmptySubset("cannot track the empty subset")
        if any(not 1 <= p <= p_count for p in members):
            raise InputError(f"subset {sorted(members)} outside 1..{p_count}")
        subsets.add(members)
    return sorted(subsets, key=sorted)


def build_family(
    p_count: int,
    rounds: int,
    eps_schedule: Sequence[Fraction] | None = None,
    pair_enum: str | PairEnum | Iterable[tuple[int, int]] = "q-major",
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
    step_limit: int = DEFAULT_STEP_LIMIT,
    clamp_square: bool = True,
    certified_subsets="all",
) -> GLFFamily:
    """Run ``rounds`` construction rounds for ``p_count`` functions."""
    if p_count < 2:
        raise InputError("p_count must be at least 2")
    if rounds < 1:
        raise InputError("rounds must be at least 1")
    if isinstance(pair_enum, str):
        try:
            pair_iter = PAIR_ENUMERATIONS[pair_enum](p_count)
        except KeyError:
            raise InputError(
                f"unknown pair enumeration {pair_enum!r}; expected one of {sorted(PAIR_ENUMERATIONS)}"
            ) from None
    elif callable(pair_enum):
        pair_iter = pair_enum(p_count)
    else:
        pair_iter = iter(pair_enum)
    pairs = []
    for _ in range(rounds):
        try:
            pairs.append(next(pair_iter))
        except StopIteration:
            raise InputError("pair enumeration ran out before the requested rounds") from None
    last_q: dict[int, int] = {}
    for p, q in pairs:
        if not (1 <= p <= p_count and p < q):
            raise InputError(f"bad pair ({p}, {q}): need 1 <= p <= {p_count} < .. and p < q")
        if last_q.get(p, 0) > q:
            raise InputError(f"q values must be nondecreasing per p, got ({p}, {q})")
        last_q[p] = q

    if eps_schedule is None:
        eps_list = default_eps_schedule(rounds)
    else:
        eps_list = [Fraction(e) for e in eps_schedule]
        if len(eps_list) < rounds:
            raise InputError("eps schedule shorter than the number of rounds")
        eps_list = eps_list[:rounds]
        for a, b in zip(eps_list, eps_list[1:]):
            if not a > b > 0:
                raise InputError("eps schedule must be positive and strictly decreasing")

    tracked = _certified_subsets(p_count, certified_subsets)
    done: list[FamilyRound] = []
    k_prev = BASE_MASS
    for i, (p, q) in enumerate(pairs, start=1):
        eps = eps_list[i - 1]
        patterns = [_assemble_partial(done, vec) for vec in _realized_patterns(tracked, done)]
        min_term = min(w.terminal_value for w in patterns)
        cap = eps if eps < min_term else min_term / 2
        high = extend_high(
            patterns,
            mass_target=q * k_prev,
            cap=cap,
            search_budget=search_budget,
            depth_budget=depth_budget,
            step_limit=step_limit,
            clamp_square=clamp_square,
        )
        end = high[-1][0]
        h_term = high[-1][1]
        low = extend_low(
            patterns,
            new_end=end,
            eps=min(ONE, h_term),
            search_budget=search_budget,
            depth_budget=depth_budget,
        )
        done.append(FamilyRound(i, p, q, k_prev, eps, tuple(high), low, end))
        family_so_far = GLFFamily(p_count, tuple(done))
        k_next = family_so_far.max_weight().integral_to(end)
        if k_next < 3 * k_prev:
            raise InternalInvariantFailure(
                f"round {i}: K grew from {k_prev} to {k_next}, below factor 3"
            )
        k_prev = k_next
    return GLFFamily(p_count, tuple(done))


def _assemble_partial(rounds: Sequence[FamilyRound], choices: Sequence[bool]) -> PiecewiseWeight:
    segments = [(BASE_END, ONE)]
    for rnd, high in zip(rounds, choices):
        if high:
            segments.extend(rnd.high_segments)
        else:
            segments.append((rnd.end, rnd.low_value))
    return PiecewiseWeight.from_segments(segments)


def sup_weights(
    family: GLFFamily,
    members: Iterable[int],
    certify: bool = True,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
) -> PiecewiseWeight:
    """Pointwise supremum over a nonempty subset of function indices."""
    members = frozenset(members)
    if not members:
        raise EmptySubset("supremum over the empty set is undefined")
    bad = [p for p in members if not 1 <= p <= family.size]
    if bad:
        raise InputError(f"function indices {bad} outside 1..{family.size}")
    weight = family.assemble(family.choices_for(members))
    if certify:
        result = certify_glf(weight, depth_budget)
        if not result.certified:
            raise InternalInvariantFailure(
                f"supremum over {sorted(members)} failed certification: {result.verdict}"
            )
    return weight


@dataclass(frozen=True)
class RatioRow:
    round_index: int
    q: int
    k_prev: Fraction
    end: Fraction
    s_single: Fraction     # prefix integral of w_{p'} at the round end
    s_sup: Fraction        # prefix integral of the subset supremum there
    ratio: Fraction
    bound: Fraction        # q * K_prev / (K_prev + 1)

    @property
    def bound_met(self) -> bool:
        return self.ratio >= self.bound


@dataclass(frozen=True)
class RatioReport:
    members: tuple
    p_prime: int
    rows: tuple

    @property
    def ratios_strictly_increase(self) -> bool:
        return all(a.ratio < b.ratio for a, b in zip(self.rows, self.rows[1:]))

    @property
    def all_bounds_met(self) -> bool:
        return all(row.bound_met for row in self.rows)

    @property
    def max_ratio(self) -> Fraction:
        return max(row.ratio for row in self.rows)


def ratio_report(family: GLFFamily, members: Iterable[int], p_prime: int) -> RatioReport:
    """Exact prefix-integral ratios at every round selecting p_prime.

    At each such round the single function's integral is at least
    q_i * K_{i-1} while the avoiding supremum's is at most K_{i-1} + 1.
    """
    members = frozenset(members)
    if p_prime in members:
        raise InputError(f"p_prime {p_prime} must lie outside the subset")
    if not members:
        raise EmptySubset("subset must be nonempty")
    single = family.function_weight(p_prime)
    sup = sup_weights(family, members, certify=False)
    rows = []
    for rnd in family.rounds:
        if rnd.p != p_prime:
            continue
        s_single = single.integral_to(rnd.end)
        s_sup = sup.integral_to(rnd.end)
        rows.append(
            RatioRow(
                round_index=rnd.index,
                q=rnd.q,
                k_prev=rnd.k_prev,
                end=rnd.end,
                s_single=s_single,
                s_sup=s_sup,
                ratio=s_single / s_sup,
                bound=Fraction(rnd.q) * rnd.k_prev / (rnd.k_prev + 1),
            )
        )
    if not rows:
        raise NoQualifyingRounds(
            f"function {p_prime} is never selected within {family.round_count} rounds"
        )
    return RatioReport(tuple(sorted(members)), p_prime, tuple(rows))


@dataclass(frozen=True)
class FamilyCheck:
    passed: bool
    failures: tuple


def verify_family(family: GLFFamily) -> FamilyCheck:
    """Exact bookkeeping checks; certification is separate (see certify_glf).

    Checks, per round i: high mass >= q_i * K_{i-1}; every segment value
    <= eps_i; low value <= final high value with low mass <= 1; round ends
    strictly increasing with length >= (q_i K_{i-1}) / eps_i; K_0 = 2 and
    K_i >= 3 K_{i-1}. The schedule of caps and masses also witnesses the
    infinite-domain tail behavior: values fall below every eps while
    per-round masses grow without bound.
    """
    failures = []
    ks = family.k_values()
    if ks[0] != BASE_MASS:
        failures.append(("k0", ks[0]))
    prev_end = BASE_END
    for rnd in family.rounds:
        i = rnd.index
        if rnd.k_prev != ks[i - 1]:
            failures.append(("k_prev_mismatch", i, rnd.k_prev, ks[i - 1]))
        if ks[i] < 3 * ks[i - 1]:
            failures.append(("k_growth", i, ks[i], ks[i - 1]))
        high_mass = family.high_mass(i)
        if high_mass < rnd.q * rnd.k_prev:
            failures.append(("high_mass", i, high_mass))
        if any(v > rnd.eps for _, v in rnd.high_segments) or rnd.low_value > rnd.eps:
            failures.append(("value_cap", i))
        h_term = rnd.high_segments[-1][1]
        if rnd.low_value > h_term:
            failures.append(("low_above_high", i))
        if family.low_mass(i) > 1:
            failures.append(("low_mass", i))
        if not rnd.end > prev_end:
            failures.append(("round_end", i))
        if rnd.end - prev_end < (rnd.q * rnd.k_prev) / rnd.eps:
            failures.append(("round_length", i))
        values = [v for _, v in rnd.high_segments]
        if any(a < b for a, b in zip(values, values[1:])):
            failures.append(("high_not_nonincreasing", i))
        prev_end = rnd.end
    return FamilyCheck(not failures, tuple(failures))
