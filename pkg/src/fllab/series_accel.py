"""Summation of slowly convergent series.

Alternating series use the Chebyshev-weighted scheme of Cohen, Rodriguez
Villegas and Zagier: with n terms the error falls like (3 + sqrt 8)^-n for
summands that are moments of a positive measure, which covers every
central-binomial series in this package.  Monotone series are summed
directly with a first-omitted-term tail bound, and ``raw_partial_sums`` /
``raw_oracle_sum`` give an untransformed reference path for cross-checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError, SignPatternError

__all__ = [
    "Method",
    "SeriesResult",
    "SignPattern",
    "TermGenerator",
    "cvz_sum",
    "raw_oracle_sum",
    "raw_partial_sums",
    "sum_alternating_accel",
    "sum_direct",
]

SIGN_CHECK_TERMS = 32
_MAX_ACCEL_ORDER = 256  # (3 + sqrt 8)^n overflows binary64 past n ~ 400


class SignPattern(str, enum.Enum):
    ALTERNATING = "alternating"
    POSITIVE = "positive"
    OSCILLATING = "oscillating"


class Method(str, enum.Enum):
    DIRECT = "direct"
    ALTERNATING_ACCEL = "alternating_accel"
    RAW_ORACLE = "raw_oracle"


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    method: Method
    tail_estimate: float
    converged: bool


@dataclass(frozen=True)
class TermGenerator:
    """Index -> summand map plus its declared sign pattern."""

    term: Callable[[int], float]
    pattern: SignPattern = SignPattern.ALTERNATING

    def __call__(self, k: int) -> float:
        return self.term(k)

    def terms(self, start: int, stop: int) -> list[float]:
        return [self.term(k) for k in range(start, stop)]


def cvz_sum(signed_terms: Sequence[float]) -> float:
    """Accelerated value of sum(signed_terms) for an alternating sequence.

    Uses all ``len(signed_terms)`` terms as the acceleration order.
    """
    n = len(signed_terms)
    if n == 0:
        return 0.0
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        # magnitudes a_k with sum (-1)^k a_k == sum of signed terms
        a_k = signed_terms[k] if k % 2 == 0 else -signed_terms[k]
        s += c * a_k
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1))
    return s / d


def _check_alternating(terms: Sequence[float]) -> None:
    prev = 0.0
    for k, t in enumerate(terms):
        if t != t:
            raise SignPatternError(f"NaN summand at offset {k}")
        if t != 0.0 and prev != 0.0 and (t > 0.0) == (prev > 0.0):
            raise SignPatternError(
                f"summands do not alternate (offset {k - 1} and {k} share a sign)"
            )
        prev = t


def sum_alternating_accel(
    g: TermGenerator,
    n: int = 20,
    *,
    tol: float = 1e-15,
    head: int = 0,
    max_order: int = _MAX_ACCEL_ORDER,
) -> SeriesResult:
    """Sum an alternating series with the Chebyshev-weighted accelerator.

    The first ``head`` terms are added directly (for series whose sign
    pattern only settles after a few terms); acceleration starts at index
    ``head``.  The order doubles from ``n`` until two successive orders
    agree to ``tol * max(1, |value|)``.
    """
    if g.pattern is not SignPattern.ALTERNATING:
        raise SignPatternError(f"acceleration needs an alternating series, got {g.pattern.value}")
    if n < 4:
        raise DomainError("acceleration order must be at least 4")
    head_sum = math.fsum(g.terms(0, head)) if head else 0.0

    cache: list[float] = g.terms(head, head + max(n, SIGN_CHECK_TERMS))
    _check_alternating(cache[:SIGN_CHECK_TERMS])

    def tail_value(order: int) -> float:
        if order > len(cache):
            cache.extend(g.terms(head + len(cache), head + order))
        return cvz_sum(cache[:order])

    order = n
    prev = tail_value(order)
    while True:
        nxt_order = 2 * order
        if nxt_order > max_order:
            value = head_sum + prev
            raise ConvergenceError(
                f"alternating acceleration did not converge by order {order}",
                SeriesResult(value, head + order, Method.ALTERNATING_ACCEL, math.inf, False),
            )
        cur = tail_value(nxt_order)
        value = head_sum + cur
        diff = abs(cur - prev)
        if diff <= tol * max(1.0, abs(value)):
            return SeriesResult(value, head + nxt_order, Method.ALTERNATING_ACCEL, diff, True)
        order, prev = nxt_order, cur


_GEOMETRIC_RATIO = 0.9


def _tail_bound(t: float, prev: float) -> float:
    # geometric decay: |t| r/(1-r); otherwise 10 |t| (algebraic decay)
    if prev != 0.0:
        r = abs(t / prev)
        if r < _GEOMETRIC_RATIO:
            return abs(t) * r / (1.0 - r)
    return 10.0 * abs(t)


def sum_direct(g: TermGenerator, tol: float = 1e-15, max_terms: int = 10**6) -> SeriesResult:
    """Plain summation with a tail bound.

    Stops once the tail estimate has been below tol*max(1, |S|) for three
    consecutive terms.  The estimate is ten times the last term, a safety
    factor over the first-omitted-term bound that is only asymptotic for
    algebraic decay; when successive terms shrink by a ratio r < 0.9 the
    geometric bound |t| r/(1-r) is used instead.
    """
    acc = 0.0
    comp = 0.0
    small = 0
    last = 0.0
    tail = math.inf
    for k in range(max_terms):
        t = g.term(k)
        if t != t:
            raise ConvergenceError(f"NaN summand at index {k}")
        # Kahan-Babuska summation; the order is fixed so results are reproducible
        s = acc + t
        if abs(acc) >= abs(t):
            comp += (acc - s) + t
        else:
            comp += (t - s) + acc
        acc = s
        total = acc + comp
        tail = _tail_bound(t, last) if k else math.inf
        last = t
        if tail <= tol * max(1.0, abs(total)):
            small += 1
            if small >= 3:
                return SeriesResult(total, k + 1, Method.DIRECT, tail, True)
        else:
            small = 0
    total = acc + comp
    raise ConvergenceError(
        f"direct summation exhausted max_terms={max_terms}",
        SeriesResult(total, max_terms, Method.DIRECT, tail, False),
    )


def raw_partial_sums(g: TermGenerator, N: int) -> list[float]:
    """[S_1, ..., S_N] accumulated left to right with no transformation."""
    if N < 1:
        raise DomainError("N must be at least 1")
    out = []
    s = 0.0
    for k in range(N):
        s += g.term(k)
        out.append(s)
    return out


def raw_oracle_sum(g: TermGenerator, N: int = 2000) -> SeriesResult:
    """Reference value from raw partial sums, extrapolated in N.

    Neighbouring partial sums are averaged (removing the leading alternating
    error), sampled at N, 2N, 4N, and an Aitken step in log N removes the
    remaining power-law tail.  The tail estimate is the size of that
    correction.
    """
    sums = raw_partial_sums(g, 4 * N + 1)

    def avg(m: int) -> float:
        return 0.5 * (sums[m - 1] + sums[m])

    t1, t2, t3 = avg(N), avg(2 * N), avg(4 * N)
    d1, d2 = t2 - t1, t3 - t2
    if d2 == 0.0 or d1 == d2:
        return SeriesResult(t3, 4 * N + 1, Method.RAW_ORACLE, abs(d2), True)
    r = d1 / d2
    if r <= 1.0:
        # not a shrinking power-law tail; report the plain average
        return SeriesResult(t3, 4 * N + 1, Method.RAW_ORACLE, abs(d2), False)
    correction = d2 / (r - 1.0)
    return SeriesResult(t3 + correction, 4 * N + 1, Method.RAW_ORACLE, abs(correction), True)
