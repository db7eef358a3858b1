"""Finite join-semilattices: parsing, validation, layer decomposition, enumeration.

A lattice file is JSON of the form

    {"elements": ["a", "b", ...], "le": [["a", "b"], ...]}

where the ``le`` pairs generate the partial order by reflexive-transitive
closure. Validation computes the closure, rejects cycles, and derives the
total join table, reporting the first pair without a least upper bound.

The layer decomposition strips maximal elements one generation at a time;
an enumeration lists the layers in order (ties broken by a configurable
total order on ids) and is checked to be admissible:

  * each element is minimal among itself and its predecessors, and
  * the join of two elements never appears later than either of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import (
    DuplicateId,
    InternalInvariantFailure,
    MalformedDocument,
    NotAJoinSemilattice,
    NotAPartialOrder,
    UnknownIdInPair,
)
from .serialize import load_json

TieBreak = Callable[[str], object]

TIEBREAKS: dict[str, str] = {
    "lex": "sort ids lexicographically",
    "input": "keep the order ids appear in the input",
}


@dataclass(frozen=True)
class SemilatticeSpec:
    """Parsed lattice document: element ids plus order generators."""

    elements: tuple[str, ...]
    le_pairs: tuple[tuple[str, str], ...]

    def to_doc(self) -> dict:
        return {
            "elements": list(self.elements),
            "le": [[a, b] for a, b in self.le_pairs],
        }


@dataclass(frozen=True)
class JoinTable:
    """Validated join-semilattice: closed order relation and total join map.

    ``elements`` fixes an index order (the input order); ``leq_matrix`` and
    ``join_matrix`` are indexed by it.
    """

    elements: tuple[str, ...]
    leq_matrix: tuple[tuple[bool, ...], ...]
    join_matrix: tuple[tuple[int, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, a: str) -> int:
        return self._index[a]

    def leq(self, a: str, b: str) -> bool:
        return self.leq_matrix[self._index[a]][self._index[b]]

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def join(self, a: str, b: str) -> str:
        return self.elements[self.join_matrix[self._index[a]][self._index[b]]]

    def top(self) -> str:
        maximal = [a for a in self.elements if not any(self.lt(a, b) for b in self.elements)]
        if len(maximal) != 1:
            raise InternalInvariantFailure(
                f"join-semilattice must have a unique maximal element, found {maximal}"
            )
        return maximal[0]

    def pairs(self) -> Iterable[tuple[str, str]]:
        for a in self.elements:
            for b in self.elements:
                yield a, b


@dataclass(frozen=True)
class LayerDecomposition:
    """Generations of maximal elements; layer 0 is the singleton top."""

    table: JoinTable
    layers: tuple[tuple[str, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class Enumeration:
    """Layer-compatible listing (e_0, ..., e_{n-1}) of all elements."""

    table: JoinTable
    order: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.order)})

    @property
    def beta0(self) -> int:
        return len(self.order)

    def index(self, a: str) -> int:
        return self._index[a]


def parse_lattice_spec(text: str) -> SemilatticeSpec:
    """Parse the JSON lattice format, preserving generators verbatim."""
    doc = load_json(text)
    if "elements" not in doc or "le" not in doc:
        raise MalformedDocument('lattice document needs "elements" and "le" keys')
    raw_elements = doc["elements"]
    raw_le = doc["le"]
    if not isinstance(raw_elements, list) or not all(
        isinstance(e, str) and e for e in raw_elements
    ):
        raise MalformedDocument('"elements" must be a list of nonempty strings')
    if not isinstance(raw_le, list):
        raise MalformedDocument('"le" must be a list of [lesser, greater] pairs')
    seen = set()
    for e in raw_elements:
        if e in seen:
            raise DuplicateId(f"duplicate element id {e!r}")
        seen.add(e)
    pairs = []
    for entry in raw_le:
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, str) for x in entry)):
            raise MalformedDocument(f'"le" entry {entry!r} is not a pair of ids')
        a, b = entry
        for x in (a, b):
            if x not in seen:
                raise UnknownIdInPair(f"id {x!r} in le pair {entry!r} is not declared")
        pairs.append((a, b))
    return SemilatticeSpec(tuple(raw_elements), tuple(pairs))


def validate_join_semilattice(spec: SemilatticeSpec) -> JoinTable:
    """Close the generators, check antisymmetry, and derive the join table."""
    elements = spec.elements
    n = len(elements)
    if n == 0:
        raise MalformedDocument("lattice must have at least one element")
    idx = {e: i for i, e in enumerate(elements)}

    # up[i] is the bitmask of everything >= i, built by transitive closure.
    up = [1 << i for i in range(n)]
    for a, b in spec.le_pairs:
        up[idx[a]] |= 1 << idx[b]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            m = acc
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True

    for i in range(n):
        for j in range(i + 1, n):
            if up[i] >> j & 1 and up[j] >> i & 1:
                raise NotAPartialOrder(
                    f"elements {elements[i]!r} and {elements[j]!r} lie on a cycle"
                )

    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            ub = up[i] & up[j]
            least = None
            m = ub
            while m:
                k = (m & -m).bit_length() - 1
                m &= m - 1
                if ub & ~up[k] == 0:  # everything in ub is >= k
                    least = k
                    break
            if least is None:
                raise NotAJoinSemilattice(elements[i], elements[j])
            join[i][j] = join[j][i] = least

    leq = tuple(tuple(bool(up[i] >> j & 1) for j in range(n)) for i in range(n))
    return JoinTable(elements, leq, tuple(tuple(row) for row in join))


def layer_decomposition(table: JoinTable) -> LayerDecomposition:
    """Strip maximal elements generation by generation until nothing is left."""
    remaining = list(table.elements)
    layers = []
    while remaining:
        maximal = [a for a in remaining if not any(table.lt(a, b) for b in remaining)]
        if not maximal:
            raise InternalInvariantFailure("no maximal element in a nonempty finite poset")
        layers.append(tuple(maximal))
        remaining = [a for a in remaining if a not in set(maximal)]
    if len(layers[0]) != 1:
        raise InternalInvariantFailure(
            f"layer 0 must be the singleton top, found {layers[0]}"
        )
    return LayerDecomposition(table, tuple(layers))


def _tiebreak_key(decomp: LayerDecomposition, tiebreak: str | TieBreak) -> TieBreak:
    if callable(tiebreak):
        return tiebreak
    if tiebreak == "lex":
        return lambda e: e
    if tiebreak == "input":
        order = {e: i for i, e in enumerate(decomp.table.elements)}
        return lambda e: order[e]
    raise MalformedDocument(f"unknown tiebreak {tiebreak!r}; expected one of {sorted(TIEBREAKS)}")


def enumerate_elements(
    decomp: LayerDecomposition, tiebreak: str | TieBreak = "lex"
) -> Enumeration:
    """Concatenate layers, each sorted by the tiebreak, and verify admissibility."""
    key = _tiebreak_key(decomp, tiebreak)
    order = []
    for layer in decomp.layers:
        order.extend(sorted(layer, key=key))
    enum = Enumeration(decomp.table, tuple(order))
    check_enumeration(enum)
    return enum


def check_enumeration(enum: Enumeration) -> None:
    """Assert both admissibility conditions; failure means a bug upstream."""
    table = enum.table
    order = enum.order
    for i, e in enumerate(order):
        for j in range(i):
            if table.lt(order[j], e):
                raise InternalInvariantFailure(
                    f"{order[j]!r} < {e!r} but is enumerated earlier: e_{i} not minimal"
                )
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            k = enum.index(table.join(a, b))
            if k > min(i, j):
                raise InternalInvariantFailure(
                    f"join({a!r},{b!r}) at position {k} > min({i},{j})"
                )
