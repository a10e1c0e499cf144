"""Generalized hypergeometric series and closed-form summation theorems."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PoleError
from .numerics import digamma, gamma_signed, rgamma_signed
from .series_accel import (
    Method,
    SeriesResult,
    SignPattern,
    TermGenerator,
    sum_alternating_accel,
)

__all__ = [
    "PFQSpec",
    "gauss_2f1",
    "gauss_second",
    "jacobi_moment_3f2",
    "pfq",
    "watson_3f2",
]

# integer-proximity threshold for nonpositive integer parameters
INT_EPS = 1e-9
LN_SQRT_PI = 0.57236494292470008707


def _nonpos_int(p: float) -> int | None:
    r = round(p)
    if r <= 0 and abs(p - r) <= INT_EPS:
        return int(-r)
    return None


@dataclass(frozen=True)
class PFQSpec:
    upper: tuple[float, ...]
    lower: tuple[float, ...]
    z: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))

    @property
    def terminating_degree(self) -> int | None:
        """n when an upper parameter equals -n (the series has n + 1 terms)."""
        degrees = [d for d in map(_nonpos_int, self.upper) if d is not None]
        return min(degrees) if degrees else None

    def classify(self) -> str:
        """'terminating', 'disk', 'unit_positive' or 'unit_alternating'.

        Raises PoleError for a nonpositive-integer lower parameter that is
        reached before the series terminates, DomainError for divergence.
        """
        n = self.terminating_degree
        for b in self.lower:
            d = _nonpos_int(b)
            if d is not None and (n is None or d < n):
                raise PoleError(f"lower parameter {b!r} is a nonpositive integer")
        if n is not None:
            return "terminating"
        z = self.z
        if abs(z) < 1.0:
            return "disk"
        excess = sum(self.lower) - sum(self.upper)
        if z == 1.0:
            if excess > 0.0:
                return "unit_positive"
            raise DomainError(f"series diverges at z = 1 (parameter excess {excess:g} <= 0)")
        if z == -1.0:
            if excess > -1.0:
                return "unit_alternating"
            raise DomainError(f"series diverges at z = -1 (parameter excess {excess:g} <= -1)")
        raise DomainError(f"|z| > 1 needs analytic continuation (z = {z!r})")

    def ratio(self, k: int) -> float:
        """t_{k+1} / t_k."""
        num = self.z / (k + 1)
        for a in self.upper:
            num *= a + k
        for b in self.lower:
            num /= b + k
        return num


def _terms(spec: PFQSpec, count: int) -> list[float]:
    out = [1.0]
    t = 1.0
    for k in range(count - 1):
        t *= spec.ratio(k)
        out.append(t)
    return out


def pfq(spec: PFQSpec, max_terms: int = 10**6, tol: float = 1e-16) -> SeriesResult:
    """Sum pFq(upper; lower; z) by forward term recurrence.

    Terminating series are summed exactly in n + 1 terms.  At z = -1 the
    series is handed to the alternating accelerator; elsewhere terms are
    added until three in a row drop below tol relative to the partial sum.
    """
    kind = spec.classify()
    if kind == "terminating":
        n = spec.terminating_degree
        terms = _terms(spec, n + 1)
        return SeriesResult(math.fsum(terms), n + 1, Method.DIRECT, 0.0, True)

    if kind == "unit_alternating":
        # the ratio is negative once every a_i + k and b_j + k is positive
        head = max([0] + [math.ceil(-p) + 1 for p in spec.upper + spec.lower if p < 0])
        cache: list[float] = []

        def term(k: int) -> float:
            if k >= len(cache):
                cache[:] = _terms(spec, max(2 * len(cache), k + 1, 64))
            return cache[k]

        g = TermGenerator(term, SignPattern.ALTERNATING)
        return sum_alternating_accel(g, 16, tol=max(tol, 1e-15), head=head, max_order=min(256, max_terms))

    acc = 0.0
    comp = 0.0
    t = 1.0
    small = 0
    for k in range(max_terms):
        s = acc + t
        comp += (acc - s) + t if abs(acc) >= abs(t) else (t - s) + acc
        acc = s
        total = acc + comp
        if abs(t) <= tol * abs(total):
            small += 1
            if small >= 3:
                return SeriesResult(total, k + 1, Method.DIRECT, 10.0 * abs(t), True)
        else:
            small = 0
        t *= spec.ratio(k)
    raise ConvergenceError(
        f"pFq exhausted max_terms={max_terms}",
        SeriesResult(acc + comp, max_terms, Method.DIRECT, 10.0 * abs(t), False),
    )


def _log_case_2f1(a: float, b: float, w: float) -> float:
    """2F1(a, b; a + b; 1 - w) for 0 < w < 1/2 via the logarithmic expansion in w."""
    ln_w = math.log(w)
    s_ab, l_ab = gamma_signed(a + b)
    s_a, l_a = rgamma_signed(a)
    s_b, l_b = rgamma_signed(b)
    pref = s_ab * s_a * s_b * math.exp(l_ab + l_a + l_b)
    psi1 = -0.57721566490153286061  # psi(1)
    psi_a = digamma(a)
    psi_b = digamma(b)
    coef = 1.0
    total = 0.0
    for n in range(400):
        term = coef * (2.0 * psi1 - psi_a - psi_b - ln_w)
        total += term
        if n > 2 and abs(term) <= 1e-17 * abs(total):
            break
        coef *= (a + n) * (b + n) / ((n + 1) * (n + 1)) * w
        psi1 += 1.0 / (n + 1)
        psi_a += 1.0 / (a + n)
        psi_b += 1.0 / (b + n)
    else:
        raise ConvergenceError("logarithmic 2F1 expansion did not converge")
    return pref * total


def gauss_2f1(a: float, b: float, c: float, z: float, zc: float | None = None) -> float:
    """Gauss 2F1 for real parameters and -1 <= z < 1.

    For c = a + b and z > 1/2 the logarithmic connection formula in 1 - z is
    used; ``zc`` may supply 1 - z exactly when z is within rounding of 1.
    Otherwise the power series.
    """
    spec = PFQSpec((a, b), (c,), z)
    if spec.terminating_degree is None and z > 0.5 and abs(c - a - b) < 1e-12:
        w = 1.0 - z if zc is None else zc
        if not w > 0.0:
            raise DomainError("2F1(a, b; a + b; z) diverges at z = 1")
        return _log_case_2f1(a, b, w)
    return pfq(spec).value


def gauss_second(nu: float) -> float:
    """2F1(-nu, nu + 1; 1; 1/2) = sqrt(pi) / (Gamma((1 - nu)/2) Gamma((nu + 2)/2)).

    Vanishes at odd positive nu (and, symmetrically, at negative even nu).
    """
    args = sorted(((1.0 - nu) / 2.0, (nu + 2.0) / 2.0))
    s1, l1 = rgamma_signed(args[0])
    s2, l2 = rgamma_signed(args[1])
    if s1 == 0 or s2 == 0:
        return 0.0
    return s1 * s2 * math.exp(LN_SQRT_PI + l1 + l2)


def _signed_log_product(num: list[float], den: list[float]) -> float:
    sign = 1
    total = 0.0
    for x in num:
        try:
            s, lg = gamma_signed(x)
        except PoleError:
            raise PoleError(f"Gamma pole at {x!r} in numerator") from None
        sign *= s
        total += lg
    for x in den:
        s, lg = rgamma_signed(x)
        if s == 0:
            return 0.0
        sign *= s
        total += lg
    return sign * math.exp(total)


def watson_3f2(a: float, b: float, c: float) -> float:
    """Watson's sum for 3F2(a, b, c; (a + b + 1)/2, 2c; 1)."""
    if not -a - b + 2.0 * c > -1.0:
        raise DomainError("Watson's theorem needs 2c - a - b > -1")
    num = [c + 0.5, (a + b + 1.0) / 2.0, (1.0 - a - b) / 2.0 + c]
    den = [(a + 1.0) / 2.0, (b + 1.0) / 2.0, (1.0 - a) / 2.0 + c, (1.0 - b) / 2.0 + c]
    return math.exp(LN_SQRT_PI) * _signed_log_product(num, den)


def jacobi_moment_3f2(n: int, mu: float, nu_par: float) -> float:
    """int_0^1 x^(mu-1) (1-x)^(nu-1) P_n(2x-1) dx via a terminating 3F2.

    (-1)^n B(mu, nu) 3F2(-n, n + 1, mu; 1, mu + nu; 1), summed in n + 1 terms.
    """
    if not (mu > 0.0 and nu_par > 0.0):
        raise DomainError("mu and nu must be positive")
    beta = _signed_log_product([mu, nu_par], [mu + nu_par])
    f = pfq(PFQSpec((-n, n + 1, mu), (1.0, mu + nu_par), 1.0)).value
    return (-1) ** n * beta * f
