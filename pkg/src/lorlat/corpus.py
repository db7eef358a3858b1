"""Join-semilattice corpora: exhaustive small instances and seeded random ones.

Exhaustive generation enumerates transitive relations on {0..n-1} whose
identity labeling is a linear extension (every finite poset has one, so
nothing is missed up to isomorphism), filters those where every pair has a
least upper bound, and dedups by the minimal relabeled relation. Random
instances come from union-closed families of bitmasks, which are
join-semilattices under inclusion with join = bitwise or.
"""

from __future__ import annotations

from itertools import permutations
from random import Random

from .errors import InputError
from .semilattice import JoinTable, SemilatticeSpec, validate_join_semilattice

_IDS = "abcdefghijklmnopqrstuvwxyz"


def _table_from_relation(n: int, rel: frozenset) -> JoinTable:
    elements = tuple(_IDS[i] for i in range(n))
    pairs = tuple((_IDS[a], _IDS[b]) for a, b in sorted(rel))
    return validate_join_semilattice(SemilatticeSpec(elements, pairs))


def _is_join_semilattice(n: int, rel: frozenset) -> bool:
    leq = [[i == j or (i, j) in rel for j in range(n)] for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            ub = [k for k in range(n) if leq[a][k] and leq[b][k]]
            least = [k for k in ub if all(leq[k][m] for m in ub)]
            if len(least) != 1:
                return False
    return True


def _canonical(n: int, rel: frozenset) -> tuple:
    best = None
    for p in permutations(range(n)):
        key = tuple(sorted((p[a], p[b]) for a, b in rel))
        if best is None or key < best:
            best = key
    return best


def generate_corpus(max_size: int) -> list[JoinTable]:
    """All join-semilattices with 1..max_size elements, one per iso class."""
    if not 1 <= max_size <= 6:
        raise InputError("exhaustive corpus supports sizes 1..6")
    out = []
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        seen = set()
        for bits in range(1 << len(pairs)):
            rel = frozenset(pairs[k] for k in range(len(pairs)) if bits >> k & 1)
            if not all(
                (a, c) in rel
                for (a, b) in rel
                for (b2, c) in rel
                if b2 == b
            ):
                continue
            if not _is_join_semilattice(n, rel):
                continue
            key = _canonical(n, rel)
            if key in seen:
                continue
            seen.add(key)
            out.append(_table_from_relation(n, rel))
    return out


def random_semilattice(max_size: int, seed: int, universe_bits: int = 6) -> JoinTable:
    """Seeded union-closed family of bitmasks, at most max_size members."""
    if max_size < 1:
        raise InputError("max_size must be positive")
    rng = Random(seed)
    for _ in range(1000):
        k = rng.randint(1, 4)
        masks = {rng.getrandbits(universe_bits) for _ in range(k)}
        closure = set(masks)
        frontier = list(masks)
        while frontier:
            m = frontier.pop()
            for other in list(closure):
                u = m | other
                if u not in closure:
                    closure.add(u)
                    frontier.append(u)
            if len(closure) > max_size:
                break
        if 1 <= len(closure) <= max_size:
            ordered = sorted(closure)
            names = {m: f"e{i:02d}" for i, m in enumerate(ordered)}
            pairs = tuple(
                (names[a], names[b])
                for a in ordered
                for b in ordered
                if a != b and a & b == a
            )
            return validate_join_semilattice(
                SemilatticeSpec(tuple(names[m] for m in ordered), pairs)
            )
    raise InputError("could not draw a random semilattice within the size bound")


def random_corpus(count: int, max_size: int, seed: int) -> list[JoinTable]:
    return [random_semilattice(max_size, seed + i) for i in range(count)]
