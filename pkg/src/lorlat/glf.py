"""Piecewise-constant weights and the exact submultiplicativity certifier.

A *GLF* here is a weight w on (0, N] that equals 1 on (0, 2], is positive
and nonincreasing, and whose prefix integral S(x) = integral of w over
(0, x] satisfies

    S(x*y) <= S(x) * S(y)    whenever 1 <= x, y and x*y <= N.        (*)

All arithmetic is exact rational; "Certified" means (*) was established
for every admissible pair, not sampled.

Reduction. For min(x, y) <= 2 the condition is automatic: say x <= 2.
Then S(x) = x (unit value on (0, 2]), and since w is nonincreasing,

    S(x*y) <= S(y) + (x - 1) * y * w(y) <= S(y) + (x - 1) * S(y) = x * S(y),

using y * w(y) <= S(y). So only the region 2 <= x <= y, x*y <= N needs
search. That region is covered by adaptive box subdivision: a box
[x1, x2] x [y1, y2] is accepted once S(min(x2*y2, N)) <= S(x1) * S(y1)
(monotone bounds), otherwise a few exact points in it are probed for a
strict violation and the box is split on its multiplicatively longer side,
near the geometric mean. Values strictly below 1 after (0, 2] keep the
slack of (*) bounded away from zero on the closed region, so subdivision
terminates; w identically 1 is admitted only while the region is at most
a single point (N <= 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import (
    InputError,
    OutOfDomain,
    SearchBudgetExceeded,
    StepLimitExceeded,
)

ZERO = Fraction(0)
ONE = Fraction(1)
TWO = Fraction(2)

DEFAULT_DEPTH_BUDGET = 40
DEFAULT_SEARCH_BUDGET = 64
DEFAULT_STEP_LIMIT = 200


@dataclass(frozen=True)
class PiecewiseWeight:
    """Nonincreasing step function on (0, N] with unit head on (0, 2].

    ``breakpoints`` is (0, 2, ..., N) strictly increasing; ``values[j]`` is
    taken on (breakpoints[j], breakpoints[j+1]]. Prefix integrals at the
    breakpoints are precomputed once.
    """

    breakpoints: tuple
    values: tuple
    cums: tuple = None

    def __post_init__(self):
        bps, vals = self.breakpoints, self.values
        if len(bps) != len(vals) + 1 or len(vals) < 1:
            raise InputError("need k+1 breakpoints for k segment values")
        if bps[0] != 0 or bps[1] != 2 or vals[0] != 1:
            raise InputError("weight must start with value 1 on (0, 2]")
        for j in range(len(bps) - 1):
            if not bps[j] < bps[j + 1]:
                raise InputError("breakpoints must be strictly increasing")
        prev = None
        for v in vals:
            if not 0 < v <= 1:
                raise InputError("segment values must lie in (0, 1]")
            if prev is not None and v > prev:
                raise InputError("segment values must be nonincreasing")
            prev = v
        if any(v == 1 for v in vals[1:]) and bps[-1] > 4:
            # With unit values past 2 the slack of (*) vanishes on a region
            # of positive area and the certifier could not terminate.
            raise InputError("values after (0, 2] must be < 1 once the domain exceeds 4")
        if self.cums is None:
            acc = ZERO
            cums = [acc]
            for j, v in enumerate(vals):
                acc += v * (bps[j + 1] - bps[j])
                cums.append(acc)
            object.__setattr__(self, "cums", tuple(cums))

    @classmethod
    def from_segments(cls, segments: Iterable[tuple]) -> "PiecewiseWeight":
        """Build from (end, value) pairs; the first must be (2, 1)."""
        bps = [ZERO]
        vals = []
        for end, value in segments:
            bps.append(Fraction(end))
            vals.append(Fraction(value))
        return cls(tuple(bps), tuple(vals))

    @classmethod
    def unit(cls) -> "PiecewiseWeight":
        return cls((ZERO, TWO), (ONE,))

    @property
    def domain_end(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def terminal_value(self) -> Fraction:
        return self.values[-1]

    def segment_index(self, x: Fraction) -> int:
        """Index j with breakpoints[j] < x <= breakpoints[j+1]."""
        lo, hi = 0, len(self.values) - 1
        bps = self.breakpoints
        while lo < hi:
            mid = (lo + hi) // 2
            if x <= bps[mid + 1]:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def value_at(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 < x <= self.domain_end:
            raise OutOfDomain(f"{x} outside (0, {self.domain_end}]")
        return self.values[self.segment_index(x)]

    def integral_to(self, x) -> Fraction:
        """Exact S(x), the integral of the weight over (0, x]."""
        x = Fraction(x)
        if not 0 < x <= self.domain_end:
            raise OutOfDomain(f"{x} outside (0, {self.domain_end}]")
        j = self.segment_index(x)
        return self.cums[j] + self.values[j] * (x - self.breakpoints[j])

    def extended(self, value, new_end) -> "PiecewiseWeight":
        """Append one constant segment, reusing the cached prefix integrals."""
        value = Fraction(value)
        new_end = Fraction(new_end)
        if new_end <= self.domain_end:
            raise InputError("extension must lengthen the domain")
        cums = self.cums + (self.cums[-1] + value * (new_end - self.domain_end),)
        return PiecewiseWeight(
            self.breakpoints + (new_end,), self.values + (value,), cums
        )

    def restricted(self, new_end) -> "PiecewiseWeight":
        """Truncate the domain to (0, new_end]."""
        new_end = Fraction(new_end)
        if not TWO <= new_end <= self.domain_end:
            raise OutOfDomain(f"cannot restrict to (0, {new_end}]")
        j = self.segment_index(new_end)
        bps = self.breakpoints[: j + 1] + (new_end,)
        return PiecewiseWeight(bps, self.values[: j + 1])

    def pointwise_leq(self, other: "PiecewiseWeight") -> bool:
        """Exact pointwise comparison on the common (equal) domain."""
        if self.domain_end != other.domain_end:
            raise InputError("pointwise comparison needs equal domains")
        cuts = sorted(set(self.breakpoints) | set(other.breakpoints))
        for lo, hi in zip(cuts, cuts[1:]):
            if self.value_at(hi) > other.value_at(hi):
                return False
        return True


def pointwise_max(weights: Sequence[PiecewiseWeight]) -> PiecewiseWeight:
    ends = {w.domain_end for w in weights}
    if len(ends) != 1:
        raise InputError("pointwise max needs equal domains")
    cuts = sorted(set().union(*(w.breakpoints for w in weights)))
    segs = [(hi, max(w.value_at(hi) for w in weights)) for lo, hi in zip(cuts, cuts[1:])]
    merged = []
    for end, v in segs:
        if merged and merged[-1][1] == v:
            merged[-1] = (end, v)
        else:
            merged.append((end, v))
    return PiecewiseWeight.from_segments(merged)


def prefix_integral(w: PiecewiseWeight, x) -> Fraction:
    """Exact prefix integral S(x) for 0 < x <= domain end."""
    return w.integral_to(x)


@dataclass(frozen=True)
class CertificationResult:
    verdict: str                      # "certified" | "violated" | "undetermined"
    witness: tuple | None = None      # (x, y) with S(xy) > S(x)S(y), exact
    undetermined_box: tuple | None = None
    boxes_examined: int = 0
    max_depth: int = 0
    depth_budget: int = DEFAULT_DEPTH_BUDGET

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"


def _geometric_split(a: Fraction, b: Fraction) -> Fraction:
    """A rational point near sqrt(a*b), falling back to the midpoint."""
    t = a * b
    m = Fraction(isqrt(t.numerator // t.denominator))
    if a < m < b:
        return m
    return (a + b) / 2


def _violates(w: PiecewiseWeight, x: Fraction, y: Fraction) -> bool:
    return w.integral_to(x * y) > w.integral_to(x) * w.integral_to(y)


def _clip_box(x1, x2, y1, y2, hi, lo):
    """Shrink the box to the region x <= y, lo < x*y <= hi; None if empty."""
    x2 = min(x2, y2)
    y1 = max(y1, x1)
    if x1 > x2 or y1 > y2:
        return None
    if x1 * y1 > hi:
        return None
    y2 = min(y2, hi / x1)
    x2 = min(x2, hi / y1, y2)
    if x1 > x2 or y1 > y2:
        return None
    if x2 * y2 <= lo:
        return None
    y1 = max(y1, lo / x2)
    if y1 > y2:
        return None
    return x1, x2, y1, y2


def certify_glf(
    w: PiecewiseWeight,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
    min_product: Fraction = ZERO,
) -> CertificationResult:
    """Certify condition (*) on {1 <= x <= y, min_product < x*y <= N}.

    ``min_product`` restricts the check to pairs whose product exceeds it;
    callers extending an already certified weight pass the old domain end,
    since pairs with x*y inside the old domain only involve old values.
    Returns Certified, Violated with an exact witness, or Undetermined with
    the box on which the depth budget ran out.
    """
    hi = w.domain_end
    lo = max(Fraction(min_product), ZERO)
    boxes = 0
    max_depth = 0

    def probe(x, y):
        if x > y:
            x, y = y, x
        if x < 1 or x * y > hi or x * y <= lo:
            return None
        if _violates(w, x, y):
            return (x, y)
        return None

    start = _clip_box(TWO, hi / 2, TWO, hi / 2, hi, lo) if hi >= 4 else None
    stack = [(start, 0)] if start else []
    while stack:
        box, depth = stack.pop()
        x1, x2, y1, y2 = box
        boxes += 1
        max_depth = max(max_depth, depth)
        top = x2 * y2
        if w.integral_to(min(top, hi)) <= w.integral_to(x1) * w.integral_to(y1):
            continue
        if x1 == x2 and y1 == y2:
            hit = probe(x1, y1)
            if hit:
                return CertificationResult(
                    "violated", hit, None, boxes, max_depth, depth_budget
                )
            continue
        # exact spot checks before splitting: hyperbola corners and center
        for x, y in (
            (x1, min(y2, hi / x1)),
            (x2, min(y2, hi / x2)),
            (_geometric_split(x1, x2), min(_geometric_split(y1, y2), hi / _geometric_split(x1, x2))),
            (x1, y1),
        ):
            hit = probe(x, y)
            if hit:
                return CertificationResult(
                    "violated", hit, None, boxes, max_depth, depth_budget
                )
        if depth >= depth_budget:
            return CertificationResult(
                "undetermined", None, box, boxes, max_depth, depth_budget
            )
        if x2 * y1 >= x1 * y2:  # x side is multiplicatively longer
            m = _geometric_split(x1, x2)
            children = ((x1, m, y1, y2), (m, x2, y1, y2))
        else:
            m = _geometric_split(y1, y2)
            children = ((x1, x2, y1, m), (x1, x2, m, y2))
        for child in children:
            clipped = _clip_box(*child, hi, lo)
            if clipped:
                stack.append((clipped, depth + 1))
    return CertificationResult("certified", None, None, boxes, max_depth, depth_budget)


def _common_domain_end(weights: Sequence[PiecewiseWeight]) -> Fraction:
    ends = {w.domain_end for w in weights}
    if len(ends) != 1:
        raise InputError("weights must share a common domain")
    return ends.pop()


def extend_low(
    weights: Sequence[PiecewiseWeight],
    new_end,
    eps,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
) -> Fraction:
    """Find a constant c on (N, new_end] keeping every weight certified.

    The returned c satisfies 0 < c < min terminal value, c <= eps, and
    c * (new_end - N) < eps. Starting from
    min(eps / (2 * length), eps, min terminal / 2), c is halved until all
    extensions certify; the budget caps the number of halvings.
    """
    if not weights:
        raise InputError("need at least one weight to extend")
    n0 = _common_domain_end(weights)
    new_end = Fraction(new_end)
    eps = Fraction(eps)
    if new_end <= n0:
        raise InputError("new_end must exceed the current domain end")
    length = new_end - n0
    min_term = min(w.terminal_value for w in weights)
    c = min(eps / (2 * length), eps, min_term / 2)
    for _ in range(search_budget + 1):
        if 0 < c < min_term and c <= eps and c * length < eps:
            if all(
                certify_glf(w.extended(c, new_end), depth_budget, min_product=n0).certified
                for w in weights
            ):
                return c
        c = c / 2
    raise SearchBudgetExceeded(
        f"no admissible low extension after {search_budget} halvings (eps={eps})"
    )


def dyadic_floor(x: Fraction) -> Fraction:
    """Largest power of two not exceeding x (x > 0)."""
    if x <= 0:
        raise InputError("dyadic_floor needs a positive argument")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    candidate = Fraction(2) ** e
    if candidate > x:
        candidate /= 2
    return candidate


def dyadic_ceil_mult(x: Fraction, grain: int = 16) -> Fraction:
    """Round up to a multiple of 2^(floor(log2 x) - grain); keeps ends dyadic."""
    if x <= 0:
        raise InputError("dyadic_ceil_mult needs a positive argument")
    e = x.numerator.bit_length() - x.denominator.bit_length() - grain
    unit = Fraction(2) ** e
    q = x / unit
    k = q.numerator // q.denominator
    if k * q.denominator != q.numerator:
        k += 1
    return k * unit


def _admissible_value_estimate(w: PiecewiseWeight, cap: Fraction) -> Fraction:
    """Upper estimate for a constant extension value that can certify.

    Appending value v on (N, N + m/v] is squeezed hardest at balanced pairs
    x = y = X with X^2 landing in the new segment, where the condition
    reads v * (X^2 - N) <= S(X)^2 - S(N). Minimizing the right side over
    sample points X in (sqrt(N), N] (breakpoints plus segment midpoints)
    gives the estimate; certification remains the arbiter.
    """
    n = w.domain_end
    s_n = w.cums[-1]
    root = Fraction(isqrt(n.numerator // n.denominator))
    inside = [bp for bp in w.breakpoints if root < bp <= n]
    candidates = list(inside)
    candidates.extend((a + b) / 2 for a, b in zip(inside, inside[1:]))
    if root + 1 <= n:
        candidates.append(root + 1)
    best = cap
    for x in candidates:
        if x <= 2 or x <= root or x > n:
            continue
        denom = x * x - n
        if denom <= 0:
            continue
        g = (w.integral_to(x) ** 2 - s_n) / denom
        if 0 < g < best:
            best = g
    return best


def extend_high(
    weights: Sequence[PiecewiseWeight],
    mass_target,
    cap,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
    step_limit: int = DEFAULT_STEP_LIMIT,
    clamp_square: bool = True,
) -> list:
    """Accumulate at least ``mass_target`` beyond N via certified steps.

    Each step appends one constant segment whose mass is half the current
    minimum prefix integral over the extended set, at a value at most
    ``cap`` (the halving search starts from an analytic estimate of the
    admissible value and the interval stretches to keep the step's mass).
    With ``clamp_square`` each step stays within (N, N^2] for the current
    end N. Returns the appended (end, value) segments.
    """
    if not weights:
        raise InputError("need at least one weight to extend")
    mass_target = Fraction(mass_target)
    if mass_target <= 0:
        return []
    cap = Fraction(cap)
    n0 = _common_domain_end(weights)
    min_term = min(w.terminal_value for w in weights)
    if not 0 < cap < min_term:
        raise InputError(f"cap must lie strictly between 0 and {min_term}")
    current = list(weights)
    base_min = min(w.integral_to(n0) for w in current)
    segments = []
    cum = ZERO
    value_ceiling = cap
    for _ in range(step_limit):
        if cum >= mass_target:
            return segments
        n_cur = current[0].domain_end
        step_mass = (base_min + cum) / 2
        v = value_ceiling
        for w in current:
            v = min(v, _admissible_value_estimate(w, v))
        v = dyadic_floor(v)  # keeps every value, end, and mass dyadic
        for _ in range(search_budget + 1):
            length = dyadic_ceil_mult(step_mass / v)
            if clamp_square:
                length = min(length, n_cur * n_cur - n_cur)
            end = n_cur + length
            trial = [w.extended(v, end) for w in current]
            if all(
                certify_glf(t, depth_budget, min_product=n_cur).certified for t in trial
            ):
                break
            v = v / 2
        else:
            raise SearchBudgetExceeded(
                f"no certifiable step value after {search_budget} halvings at N={n_cur}"
            )
        current = trial
        segments.append((end, v))
        cum += v * length
        value_ceiling = v
    if cum >= mass_target:
        return segments
    raise StepLimitExceeded(
        f"accumulated {cum} < {mass_target} within {step_limit} steps"
    )
