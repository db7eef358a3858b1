"""Set representation of a finite join-semilattice.

Given an admissible enumeration (e_0, ..., e_{n-1}), the map T is built
step by step. Step 1 assigns T(e_0) = {0, 1}. Step beta+1 extends every
earlier element's set by {2*beta, 2*beta+1} and assigns

    T(e_beta) = intersection of T(z) over strict upper bounds z of e_beta
                already enumerated, plus {2*beta+1}.

The final map sends distinct elements to distinct nonempty subsets of
[0, 2n), turns joins into unions, and embeds the order into set inclusion.
Every intermediate snapshot is retained so the interval identity

    step b2 value of e_{b1} == step b1+1 value union [2*b1+2, 2*b2)

is directly testable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyIntersectionFamily, InternalInvariantFailure
from .semilattice import Enumeration, JoinTable


@dataclass(frozen=True)
class RepMap:
    """Final map element -> sorted set of naturals inside [0, universe_bound)."""

    sets: dict
    universe_bound: int

    def to_doc(self) -> dict:
        return {
            "universe_bound": self.universe_bound,
            "sets": {e: sorted(s) for e, s in self.sets.items()},
        }


@dataclass(frozen=True)
class RepTrace:
    """Snapshots T_1, ..., T_n; snapshot beta maps the first beta elements."""

    enum: Enumeration
    snapshots: tuple


@dataclass(frozen=True)
class RepReport:
    injective: bool
    join_preserving: bool
    order_embedding: bool
    failures: tuple

    @property
    def passed(self) -> bool:
        return self.injective and self.join_preserving and self.order_embedding


@dataclass(frozen=True)
class IdentityReport:
    failures: tuple       # (b1, b2, element) with 1 <= b1, stated range
    zero_failures: tuple  # same shape, for the b1 = 0 analogue (flagged, not failed)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def zero_case_holds(self) -> bool:
        return not self.zero_failures


def build_representation(enum: Enumeration, table: JoinTable) -> tuple[RepMap, RepTrace]:
    if set(enum.order) != set(table.elements):
        raise InternalInvariantFailure("enumeration and table cover different element sets")
    order = enum.order
    n = len(order)
    current = {order[0]: frozenset({0, 1})}
    snapshots = [dict(current)]
    for beta in range(1, n):
        e = order[beta]
        nxt = {x: s | {2 * beta, 2 * beta + 1} for x, s in current.items()}
        family = [current[z] for z in order[:beta] if table.lt(e, z)]
        if not family:
            # e_0 is the top, so every later element has it as a strict upper bound.
            raise EmptyIntersectionFamily(
                f"element {e!r} has no strict upper bound among earlier elements"
            )
        inter = frozenset.intersection(*family)
        nxt[e] = inter | {2 * beta + 1}
        current = nxt
        snapshots.append(dict(current))
    rep = RepMap({e: frozenset(s) for e, s in current.items()}, 2 * n)
    return rep, RepTrace(enum, tuple(snapshots))


def verify_representation(rep: RepMap, table: JoinTable) -> RepReport:
    """Check injectivity, join preservation, and both directions of the embedding."""
    sets = rep.sets
    failures = []

    injective = True
    seen = {}
    for e in table.elements:
        key = sets[e]
        if key in seen:
            injective = False
            failures.append(("injectivity", seen[key], e))
        else:
            seen[key] = e

    join_preserving = True
    for a, b in table.pairs():
        if sets[table.join(a, b)] != sets[a] | sets[b]:
            join_preserving = False
            failures.append(("join", a, b))

    order_embedding = True
    for a, b in table.pairs():
        if table.leq(a, b) != (sets[a] <= sets[b]):
            order_embedding = False
            failures.append(("order", a, b))

    return RepReport(injective, join_preserving, order_embedding, tuple(failures))


def check_interval_identity(trace: RepTrace) -> IdentityReport:
    """Compare every later snapshot of e_{b1} against its step-(b1+1) value.

    The stated range is 1 <= b1 < b2 <= n. The b1 = 0 analogue is checked as
    well but reported separately: deviations there are flagged, not failed.
    """
    order = trace.enum.order
    n = len(order)
    failures = []
    zero_failures = []
    for b1 in range(n):
        e = order[b1]
        # snapshots are 0-indexed: snapshots[k] holds the step-(k+1) map
        base = trace.snapshots[b1][e]
        for b2 in range(b1 + 1, n + 1):
            expected = base | frozenset(range(2 * b1 + 2, 2 * b2))
            actual = trace.snapshots[b2 - 1][e]
            if actual != expected:
                (zero_failures if b1 == 0 else failures).append((b1, b2, e))
    return IdentityReport(tuple(failures), tuple(zero_failures))


def max_universe_element(rep: RepMap) -> int:
    return max(max(s) for s in rep.sets.values())
