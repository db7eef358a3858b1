"""Discrete Lorentz-sequence machinery.

A weight sampled at integer points gives a nonincreasing sequence
w(1) >= w(2) >= ... with w(1) = 1; the associated norm of a finite vector
is the dot product of the nonincreasing rearrangement of its absolute
values with the weight sequence. Norms are exact over rationals; a float
path exists for bulk randomized trials (comparisons then carry the
tolerance recorded in the report).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from random import Random
from typing import Sequence

from .errors import InputError, OutOfDomain, VectorTooLong
from .glf import PiecewiseWeight

FLOAT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LorentzSeq:
    """Finite nonincreasing weight sequence with exact prefix sums."""

    weights: tuple   # w(1) ... w(N), 1-based by position
    sums: tuple      # sums[n] = w(1) + ... + w(n), sums[0] = 0

    def __post_init__(self):
        if not self.weights or self.weights[0] != 1:
            raise InputError("sequence must start with w(1) = 1")
        for a, b in zip(self.weights, self.weights[1:]):
            if b > a or b <= 0:
                raise InputError("weights must be positive and nonincreasing")

    @classmethod
    def from_weights(cls, weights: Sequence[Fraction]) -> "LorentzSeq":
        ws = tuple(Fraction(w) for w in weights)
        sums = [Fraction(0)]
        for w in ws:
            sums.append(sums[-1] + w)
        return cls(ws, tuple(sums))

    def __len__(self) -> int:
        return len(self.weights)

    def weight(self, n: int) -> Fraction:
        return self.weights[n - 1]

    def prefix_sum(self, n: int) -> Fraction:
        return self.sums[n]

    def join(self, other: "LorentzSeq") -> "LorentzSeq":
        if len(self) != len(other):
            raise InputError("join needs sequences of equal length")
        return LorentzSeq.from_weights(
            tuple(max(a, b) for a, b in zip(self.weights, other.weights))
        )

    def pointwise_leq(self, other: "LorentzSeq") -> bool:
        return all(a <= b for a, b in zip(self.weights, other.weights))


def sample_weights(w: PiecewiseWeight, n_max: int) -> LorentzSeq:
    """Values of the weight at the integer points 1..n_max."""
    if n_max < 1:
        raise InputError("n_max must be positive")
    if n_max > w.domain_end:
        raise OutOfDomain(f"n_max {n_max} exceeds the weight domain (0, {w.domain_end}]")
    return LorentzSeq.from_weights(tuple(w.value_at(n) for n in range(1, n_max + 1)))


def lorentz_norm(a: Sequence, seq: LorentzSeq):
    """Sum of the nonincreasing rearrangement of |a| against the weights.

    Exact when every component is an int or Fraction; any float component
    switches the whole computation to floats.
    """
    if len(a) > len(seq):
        raise VectorTooLong(f"vector length {len(a)} exceeds sequence length {len(seq)}")
    exact = all(isinstance(x, (int, Fraction)) for x in a)
    if exact:
        rearranged = sorted((abs(Fraction(x)) for x in a), reverse=True)
        return sum(
            (x * w for x, w in zip(rearranged, seq.weights)), start=Fraction(0)
        )
    rearranged = sorted((abs(float(x)) for x in a), reverse=True)
    return sum(x * float(w) for x, w in zip(rearranged, seq.weights))


@dataclass(frozen=True)
class SubmultiplicativityResult:
    passed: bool
    constant: Fraction
    bound: int
    witness: tuple | None = None   # lexicographically least failing (m, n)


def check_submultiplicative(seq: LorentzSeq, constant, bound: int) -> SubmultiplicativityResult:
    """Brute force S(m*n) <= C * S(m) * S(n) over all m*n <= bound.

    Scans m ascending and n ascending within each m, so the first failure
    found is the lexicographically least witness. The comparison runs over
    integers after clearing denominators.
    """
    constant = Fraction(constant)
    if bound > len(seq):
        raise InputError(f"bound {bound} exceeds sequence length {len(seq)}")
    denom = 1
    for s in seq.sums[1 : bound + 1]:
        denom = lcm(denom, s.denominator)
    scaled = [0] * (bound + 1)
    for n in range(1, bound + 1):
        s = seq.sums[n]
        scaled[n] = s.numerator * (denom // s.denominator)
    c_num, c_den = constant.numerator, constant.denominator
    for m in range(1, bound + 1):
        sm = scaled[m]
        for n in range(1, bound // m + 1):
            # S(mn) <= C * S(m) * S(n), cleared: den_c * D * S(mn) <= num_c * S(m) * S(n)
            if c_den * denom * scaled[m * n] > c_num * sm * scaled[n]:
                return SubmultiplicativityResult(False, constant, bound, (m, n))
    return SubmultiplicativityResult(True, constant, bound, None)


def domination_ratio(seq1: LorentzSeq, seq2: LorentzSeq, n: int) -> Fraction:
    """max over k <= n of S1(k) / S2(k).

    Any constant below this ratio fails to bound the first sequence's
    partial sums by the second's, witnessed by the all-ones vectors.
    """
    if n > len(seq1) or n > len(seq2):
        raise InputError("n exceeds a sequence length")
    if n < 1:
        raise InputError("n must be positive")
    return max(seq1.sums[k] / seq2.sums[k] for k in range(1, n + 1))


@dataclass(frozen=True)
class JoinEquivalenceReport:
    trials: int
    min_ratio: Fraction
    max_ratio: Fraction
    failures: tuple
    exact: bool

    @property
    def passed(self) -> bool:
        return not self.failures


def join_equivalence_check(
    w1: PiecewiseWeight,
    w2: PiecewiseWeight,
    n_max: int,
    trials: int,
    seed: int = 0,
) -> JoinEquivalenceReport:
    """Check 1 <= (norm_w1(a) + norm_w2(a)) / norm_join(a) <= 2 on random vectors.

    With w = max(w1, w2) pointwise, each wi <= w <= w1 + w2, so each single
    norm is at most the join norm while their sum is at least it; the ratio
    therefore lies in [1, 2], and equals 2 whenever w1 = w2.
    """
    seq1 = sample_weights(w1, n_max)
    seq2 = sample_weights(w2, n_max)
    joined = seq1.join(seq2)
    rng = Random(seed)
    lo, hi = None, None
    failures = []
    for t in range(trials):
        a = random_rational_vector(rng, rng.randint(1, n_max))
        denom = lorentz_norm(a, joined)
        if denom == 0:
            continue
        r = (lorentz_norm(a, seq1) + lorentz_norm(a, seq2)) / denom
        lo = r if lo is None else min(lo, r)
        hi = r if hi is None else max(hi, r)
        if not 1 <= r <= 2:
            failures.append((t, tuple(a), r))
    return JoinEquivalenceReport(trials, lo, hi, tuple(failures), exact=True)


def random_rational_vector(rng: Random, length: int, denominator: int = 64) -> list:
    """Exact random vectors: uniform with sparsity, blocks, spikes, decay."""
    kind = rng.randrange(4)
    if kind == 0:  # uniform on [-1, 1] with a sparsity mask
        keep = rng.random()
        return [
            Fraction(rng.randint(-denominator, denominator), denominator)
            if rng.random() < keep
            else Fraction(0)
            for _ in range(length)
        ]
    if kind == 1:  # constant blocks
        out = []
        while len(out) < length:
            block = min(rng.randint(1, max(1, length // 2)), length - len(out))
            v = Fraction(rng.randint(-denominator, denominator), denominator)
            out.extend([v] * block)
        return out
    if kind == 2:  # a single spike
        out = [Fraction(0)] * length
        out[rng.randrange(length)] = Fraction(rng.randint(1, denominator), denominator)
        return out
    out = []  # geometric decay with sign flips
    v = Fraction(rng.randint(1, denominator), denominator)
    for _ in range(length):
        out.append(v if rng.random() < 0.5 else -v)
        v = v / 2
    return out
