"""Integral oracles, independent of every series path they are used to check.

* ``tanh_sinh``: double-exponential rule, robust to integrable endpoint
  singularities such as the log behaviour of K(x) at x -> 1.
* ``gauss_adaptive``: adaptive Gauss-Kronrod (7/15) for smooth integrands.
* ``periodic_trapezoid``: node-doubling trapezoid rule, spectrally accurate
  for smooth periodic integrands.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError

__all__ = ["QuadResult", "gauss_adaptive", "periodic_trapezoid", "tanh_sinh"]

Integrand = Callable[[float], float]


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err_estimate: float
    fn_evals: int
    converged: bool


def _checked(f: Integrand, x: float) -> float:
    y = f(x)
    if y != y:
        raise DomainError(f"integrand returned NaN at x = {x!r}")
    return y


_HALF_PI = 0.5 * math.pi
# u = (pi/2) sinh(t) reaches ~350 here, where 1 - tanh(u) underflows
_T_MAX = 6.1


def tanh_sinh(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    rel_tol: float = 0.0,
    max_level: int = 12,
    min_level: int = 3,
) -> QuadResult:
    """Integrate f over (a, b) with the tanh-sinh rule, halving h per level.

    Stops once two successive levels differ by at most
    ``max(tol, rel_tol * |I|)``.  f is never evaluated at a or b; nodes that
    round onto an endpoint are dropped.
    """
    if a == b:
        return QuadResult(0.0, 0.0, 0, True)
    if a > b:
        r = tanh_sinh(f, b, a, tol, rel_tol=rel_tol, max_level=max_level, min_level=min_level)
        return QuadResult(-r.value, r.abs_err_estimate, r.fn_evals, r.converged)

    half = 0.5 * (b - a)
    mid = a + half
    evals = 0

    def pair(t: float) -> float:
        nonlocal evals
        e = math.exp(-_HALF_PI * math.sinh(t))
        e2 = e * e
        comp = 2.0 * e2 / (1.0 + e2)  # 1 - tanh(u), no cancellation
        sech = 2.0 * e / (1.0 + e2)
        w = _HALF_PI * math.cosh(t) * sech * sech
        d = half * comp
        s = 0.0
        xl = a + d
        if xl != a:
            s += _checked(f, xl)
            evals += 1
        xr = b - d
        if xr != b:
            s += _checked(f, xr)
            evals += 1
        return w * s

    total = _HALF_PI * _checked(f, mid)
    evals += 1
    k = 1
    while k <= _T_MAX:
        total += pair(float(k))
        k += 1
    h = 1.0
    prev = half * h * total
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        t = h
        while t <= _T_MAX:
            total += pair(t)
            t += 2.0 * h
        cur = half * h * total
        err = abs(cur - prev)
        if level >= min_level and err <= max(tol, rel_tol * abs(cur)):
            return QuadResult(cur, err, evals, True)
        prev = cur
    raise ConvergenceError(
        f"tanh-sinh did not converge by level {max_level} (estimate {err:.3g})",
        QuadResult(prev, err, evals, False),
    )


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f: Integrand, a: float, b: float) -> tuple[float, float]:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = _checked(f, c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = h * _XGK[j]
        fs = _checked(f, c - dx) + _checked(f, c + dx)
        kron += _WGK[j] * fs
        if j % 2 == 1:
            gauss += _WG[j // 2] * fs
    return kron * h, abs((kron - gauss) * h)


def gauss_adaptive(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    max_depth: int = 60,
    max_intervals: int = 4000,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod 7/15 quadrature.

    The interval with the largest embedded-Gauss error estimate is bisected
    until the summed estimate drops below tol.  Mild endpoint singularities
    (log-type) are tolerated because the error there shrinks with width.
    """
    if a == b:
        return QuadResult(0.0, 0.0, 0, True)
    val, err = _gk15(f, a, b)
    evals = 15
    # heap entries: (-err, lo, hi, val, depth); lo/hi break ties deterministically
    heap = [(-err, a, b, val, 0)]
    total_err = err
    while total_err > tol:
        neg_err, lo, hi, v, depth = heapq.heappop(heap)
        if depth >= max_depth or len(heap) >= max_intervals:
            heapq.heappush(heap, (neg_err, lo, hi, v, depth))
            partial = math.fsum(e[3] for e in heap)
            raise ConvergenceError(
                f"gauss_adaptive exhausted subdivision (depth {depth}) near [{lo!r}, {hi!r}]",
                QuadResult(partial, total_err, evals, False),
            )
        m = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, m)
        v2, e2 = _gk15(f, m, hi)
        evals += 30
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, m, v1, depth + 1))
        heapq.heappush(heap, (-e2, m, hi, v2, depth + 1))
        if total_err < 0.0:
            total_err = math.fsum(-e[0] for e in heap)
    heap.sort(key=lambda e: e[1])
    value = math.fsum(e[3] for e in heap)
    return QuadResult(value, total_err, evals, True)


def periodic_trapezoid(
    f: Integrand, period: float, tol: float = 1e-13, *, max_nodes: int = 2**20
) -> QuadResult:
    """Integral of a smooth periodic f over one period [0, period)."""
    n = 8
    h = period / n
    s = math.fsum(_checked(f, k * h) for k in range(n))
    prev = h * s
    evals = n
    while n < max_nodes:
        s += math.fsum(_checked(f, (k + 0.5) * h) for k in range(n))
        evals += n
        n *= 2
        h *= 0.5
        cur = h * s
        err = abs(cur - prev)
        if err <= tol and n >= 16:
            return QuadResult(cur, err, evals, True)
        prev = cur
    raise ConvergenceError(
        f"periodic trapezoid did not converge with {max_nodes} nodes",
        QuadResult(prev, math.inf, evals, False),
    )
