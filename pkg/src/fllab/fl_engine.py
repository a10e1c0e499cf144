"""Fourier-Legendre expansions on [0, 1] in the shifted basis P_n(2x - 1).

Coefficient families with closed forms:

* the Clebsch-Gordan product family, expanding
  2F1(-nu, nu+1; 1; x) 2F1(-nu, nu+1; 1; 1-x) = P_nu(1-2x) P_nu(2x-1)
  in even degrees only;
* Dougall's sinc coefficients of P_nu itself;
* the expansion K(x) = sum_m 2/(2m+1) P_m(2x-1).

plus the two Legendre moment integrals that turn the K(x)K(1-x) expansion
into finite sums for its power and Jacobi-type moments.
"""

from __future__ import annotations

import enum
import functools
import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import DomainError
from .numerics import (
    central_binomial,
    gamma_signed,
    legendre_P,
    legendre_Pnu,
    ln_gamma,
    rgamma_signed,
    sinpi,
)

__all__ = [
    "DegreeNu",
    "FLSeries",
    "NuClass",
    "Orientation",
    "Parity",
    "as_degree",
    "beta_moment_legendre",
    "cg_coefficient",
    "cg_coefficient_dnu",
    "cg_projection",
    "clear_caches",
    "coefficient_rows",
    "dougall_coefficient",
    "dougall_series",
    "fl_partial_sum",
    "fl_partial_sums",
    "k_fl_coefficient",
    "k_series",
    "moment_series_1",
    "moment_series_2",
    "product_expansion",
]

INT_EPS = 1e-9
LN_PI = math.log(math.pi)
LN_2 = math.log(2.0)


class NuClass(str, enum.Enum):
    GENERIC = "generic"
    NONNEG_INTEGER = "nonneg_integer"
    NEG_INTEGER = "neg_integer"
    HALF_INTEGER = "half_integer"


@dataclass(frozen=True)
class DegreeNu:
    """Real Legendre degree with its integer / half-integer classification."""

    nu: float

    def __post_init__(self):
        v = float(self.nu)
        if not math.isfinite(v):
            raise DomainError(f"degree must be finite, got {v!r}")
        object.__setattr__(self, "nu", v)

    @property
    def nearest_int(self) -> Optional[int]:
        r = round(self.nu)
        return int(r) if abs(self.nu - r) <= INT_EPS else None

    @property
    def classification(self) -> NuClass:
        n = self.nearest_int
        if n is not None:
            return NuClass.NONNEG_INTEGER if n >= 0 else NuClass.NEG_INTEGER
        if abs(2.0 * self.nu - round(2.0 * self.nu)) <= 2.0 * INT_EPS:
            return NuClass.HALF_INTEGER
        return NuClass.GENERIC

    @property
    def excluded_for_cons1(self) -> bool:
        """nu in {0, 2, 4, ...} or {-1, -3, ...}, where cot(pi nu/2) Gamma((1+nu)/2)^2 blows up."""
        n = self.nearest_int
        if n is None:
            return False
        return (n >= 0 and n % 2 == 0) or (n < 0 and n % 2 == 1)

    @property
    def reflected(self) -> float:
        """The member of {nu, -nu-1} that is >= -1/2 (P_nu = P_{-nu-1})."""
        return self.nu if self.nu >= -0.5 else -self.nu - 1.0


def as_degree(nu) -> DegreeNu:
    return nu if isinstance(nu, DegreeNu) else DegreeNu(nu)


class Parity(str, enum.Enum):
    EVEN_ONLY = "even_only"
    ALL = "all"


class Orientation(str, enum.Enum):
    CLASSICAL = "classical"  # sum d_m P_m(1 - 2x)
    PRINTED = "printed"  # sum d_m P_m(2x - 1)


class FLSeries:
    """Lazily evaluated, memoized coefficient sequence in the basis P_n(2x - 1).

    ``term(m)`` gives coefficient m directly.  ``ratio(m)``, when supplied,
    gives coefficient(m+1)/coefficient(m) and is used to extend the table
    cheaply; a direct evaluation restarts the recurrence every
    ``_RESYNC`` entries and after any zero.
    """

    _RESYNC = 256

    def __init__(
        self,
        term: Callable[[int], float],
        parity: Parity,
        *,
        ratio: Optional[Callable[[int], float]] = None,
        label: str = "",
    ):
        self._term = term
        self._ratio = ratio
        self.parity = parity
        self.label = label
        self._coef: list[float] = []
        self._lock = threading.Lock()

    def __repr__(self):
        return f"FLSeries({self.label!r}, parity={self.parity.value})"

    @property
    def even_only(self) -> bool:
        return self.parity is Parity.EVEN_ONLY

    def degree(self, m: int) -> int:
        return 2 * m if self.even_only else m

    def _fill(self, n: int) -> list[float]:
        # the published list is replaced, never mutated, so readers need no lock
        if n > len(self._coef):
            with self._lock:
                coef = list(self._coef)
                # grow geometrically so one-at-a-time lookups stay linear overall
                for m in range(len(coef), max(n, 2 * len(coef))):
                    prev = coef[-1] if coef else 0.0
                    if self._ratio is not None and prev != 0.0 and m % self._RESYNC:
                        coef.append(prev * self._ratio(m - 1))
                    else:
                        coef.append(self._term(m))
                self._coef = coef
        return self._coef

    def coefficients(self, n: int) -> list[float]:
        """The first n coefficients."""
        return self._fill(n)[:n]

    def coefficient(self, m: int) -> float:
        if m < 0:
            raise DomainError("coefficient index must be nonnegative")
        return self._fill(m + 1)[m]

    def coefficient_of_degree(self, n: int) -> float:
        """Coefficient of P_n(2x - 1); odd degrees of an even series are exactly 0."""
        if self.even_only:
            return 0.0 if n % 2 else self.coefficient(n // 2)
        return self.coefficient(n)


def _cg_log_parts(nu: float, m: int):
    # (-1)^m pi c_m^2 Gamma(m+nu+1) / (2 Gamma(1+nu-m) Gamma(m-nu+1/2) Gamma(m+nu+3/2))
    s1, l1 = rgamma_signed(1.0 + nu - m)
    s2, l2 = rgamma_signed(m - nu + 0.5)
    if s1 == 0 or s2 == 0:
        return 0, 0.0
    s0, l0 = gamma_signed(m + nu + 1.0)
    l3 = ln_gamma(m + nu + 1.5)
    sign = s0 * s1 * s2 * (-1 if m % 2 else 1)
    log_mag = LN_PI - LN_2 + 2.0 * math.log(central_binomial(m)) + l0 + l1 + l2 - l3
    return sign, log_mag


def cg_coefficient(nu, m: int) -> float:
    """FL projection int_0^1 P_nu(1-2x) P_nu(2x-1) P_2m(2x-1) dx, closed form.

    Evaluated in the pole-free form obtained from the reflection identity
    sin(pi nu) Gamma(m - nu) = -(-1)^m pi / Gamma(1 - m + nu), so the limits at
    integer nu come out directly.  Equal to half the symmetric integral over
    [-1, 1].
    """
    d = as_degree(nu)
    v = d.reflected
    n = DegreeNu(v).nearest_int
    if n is not None and n >= 0:
        if m > n:
            return 0.0
        v = float(n)
    sign, log_mag = _cg_log_parts(v, m)
    return sign * math.exp(log_mag) if sign else 0.0


def cg_coefficient_dnu(nu: float, m: int) -> float:
    """d/dnu of cg_coefficient at an exact integer nu = n >= 0.

    For m <= n this is cg times a digamma combination; for m > n only the
    reciprocal Gamma 1/Gamma(1+nu-m) varies, with derivative (-1)^k k! at
    its zero 1+nu-m = -k.
    """
    from .numerics import digamma

    n = int(nu)
    if n != nu or n < 0:
        raise DomainError("derivative form is provided at nonnegative integer nu only")
    cb2 = central_binomial(m) ** 2
    if m <= n:
        base = cg_coefficient(nu, m)
        return base * (
            digamma(m + nu + 1.0)
            - digamma(1.0 + nu - m)
            + digamma(m - nu + 0.5)
            - digamma(m + nu + 1.5)
        )
    k = m - n - 1
    s2, l2 = rgamma_signed(m - nu + 0.5)
    log_mag = LN_PI - LN_2 + math.log(cb2) + ln_gamma(m + nu + 1.0) + l2 - ln_gamma(m + nu + 1.5)
    log_mag += math.lgamma(k + 1.0)
    sign = s2 * (-1 if m % 2 else 1) * (-1 if k % 2 else 1)
    return sign * math.exp(log_mag)


def _product_ratio(nu: float) -> Callable[[int], float]:
    def ratio(m: int) -> float:
        r = (m - nu) * (m + nu + 1.0) / ((m - nu + 0.5) * (m + nu + 1.5))
        q = (2 * m + 1) / (2 * m + 2)
        return r * q * q * (4 * m + 5) / (4 * m + 1)

    return ratio


@functools.lru_cache(maxsize=64)
def _product_expansion(v: float) -> FLSeries:
    return FLSeries(
        lambda m: (4 * m + 1) * cg_coefficient(v, m),
        Parity.EVEN_ONLY,
        ratio=_product_ratio(v),
        label=f"product nu={v!r}",
    )


def product_expansion(nu) -> FLSeries:
    """FL series of P_nu(1-2x) P_nu(2x-1): coefficient (4m+1) cg(nu, m) on P_2m(2x-1)."""
    v = as_degree(nu).reflected
    n = DegreeNu(v).nearest_int
    if n is not None:
        v = float(n)
    return _product_expansion(v)


def _sinc(u: float) -> float:
    if u == 0.0:
        return 1.0
    return sinpi(u) / (math.pi * u)


def dougall_coefficient(nu, m: int) -> float:
    """Coefficient of P_m in Dougall's expansion of P_nu (same argument on both sides).

    sinc(m - nu) + sinc(m + nu + 1), which reduces to a Kronecker delta at
    integer nu.
    """
    v = as_degree(nu).nu
    return _sinc(m - v) + _sinc(m + v + 1.0)


@functools.lru_cache(maxsize=64)
def _dougall_series(v: float, orientation: Orientation) -> FLSeries:
    if orientation is Orientation.CLASSICAL:
        # P_m(1 - 2x) = (-1)^m P_m(2x - 1)
        term = lambda m: (-1.0 if m % 2 else 1.0) * dougall_coefficient(v, m)  # noqa: E731
    else:
        term = lambda m: dougall_coefficient(v, m)  # noqa: E731
    return FLSeries(term, Parity.ALL, label=f"dougall nu={v!r} {orientation.value}")


def dougall_series(nu, orientation: Orientation = Orientation.CLASSICAL) -> FLSeries:
    """Dougall's expansion of 2F1(-nu, nu+1; 1; x) as an FLSeries in P_n(2x-1)."""
    return _dougall_series(as_degree(nu).nu, Orientation(orientation))


def k_fl_coefficient(m: int) -> float:
    return 2.0 / (2 * m + 1)


@functools.lru_cache(maxsize=1)
def k_series() -> FLSeries:
    """K(x) = sum_m 2/(2m+1) P_m(2x-1) on [0, 1)."""
    return FLSeries(k_fl_coefficient, Parity.ALL, label="K")


def fl_partial_sums(series: FLSeries, x: float, checkpoints: Iterable[int]) -> list[float]:
    """Partial sums sum_{m<N} a_m P_deg(m)(2x-1) for each N in checkpoints.

    One upward Legendre sweep covers every checkpoint.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    wanted = sorted(set(checkpoints))
    if not wanted or wanted[0] < 1:
        raise DomainError("partial-sum lengths must be >= 1")
    n_max = wanted[-1]
    coef = series.coefficients(n_max)
    t = 2.0 * x - 1.0
    step = 2 if series.even_only else 1
    want = set(wanted)
    out = {}
    acc = coef[0]
    p0, p1 = 1.0, t
    deg = 1  # p1 holds P_deg
    m = 1
    if 1 in want:
        out[1] = acc
    while m < n_max:
        target = step * m
        while deg < target:
            p0, p1 = p1, ((2 * deg + 1) * t * p1 - deg * p0) / (deg + 1)
            deg += 1
        acc += coef[m] * p1
        m += 1
        if m in want:
            out[m] = acc
    return [out[n] for n in checkpoints]


def fl_partial_sum(series: FLSeries, x: float, N: int) -> float:
    """sum_{m<N} coefficient(m) P_{degree(m)}(2x - 1)."""
    return fl_partial_sums(series, x, [N])[0]


def beta_moment_legendre(mu: float, n: int) -> float:
    """int_0^1 x^(mu-1) P_n(2x-1) dx = Gamma(mu)^2 / (Gamma(mu+n+1) Gamma(mu-n))."""
    if not mu > 0.0:
        raise DomainError("mu must be positive")
    s, l_inv = rgamma_signed(mu - n)
    if s == 0:
        return 0.0
    return s * math.exp(2.0 * ln_gamma(mu) - ln_gamma(mu + n + 1.0) + l_inv)


def moment_series_1(n: int) -> float:
    """int_0^1 x^n K(x) K(1-x) dx as a finite sum over m <= n/2."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    lg = ln_gamma(n + 1.0)
    terms = []
    for m in range(n // 2 + 1):
        c = central_binomial(m)
        terms.append(
            c**4
            * (4 * m + 1)
            * math.exp(2.0 * lg - ln_gamma(n + 2 * m + 2.0) - ln_gamma(n + 1.0 - 2 * m))
        )
    return math.pi**3 / 8.0 * math.fsum(terms)


def moment_series_2(n: int) -> float:
    """int_0^1 [x(1-x)]^(n-1) K(x) K(1-x) dx as a finite sum over m < n."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    pref = 3.0 * ln_gamma(float(n)) + ln_gamma(n + 0.5) - ln_gamma(2.0 * n)
    terms = []
    for m in range(n):
        c = central_binomial(m)
        s, l_half = rgamma_signed(0.5 - m)
        log_rest = (
            l_half
            - ln_gamma(m + 1.0)
            - ln_gamma(m + 0.5 + n)
            - ln_gamma(float(n - m))
        )
        terms.append(s * c**4 * (4 * m + 1) * math.exp(pref + log_rest))
    return math.pi**3.5 / 8.0 * math.fsum(terms)


def cg_projection(nu, n: int, tol: float = 1e-14):
    """Quadrature oracle: int_0^1 P_nu(1-2x) P_nu(2x-1) P_n(2x-1) dx by tanh-sinh."""
    from .quadrature import tanh_sinh

    v = as_degree(nu).nu

    def f(x: float) -> float:
        xc = 1.0 - x
        return legendre_Pnu(v, x, xc) * legendre_Pnu(v, xc, x) * legendre_P(n, 2.0 * x - 1.0)

    return tanh_sinh(f, 0.0, 1.0, tol)


def clear_caches() -> None:
    """Drop every memoized series (used for cold-start timing)."""
    _product_expansion.cache_clear()
    _dougall_series.cache_clear()
    k_series.cache_clear()


def coefficient_rows(family: str, nu: Optional[float], m_max: int) -> list[tuple[int, int, float]]:
    """(m, degree, coefficient) rows for m = 0..m_max, used by the CSV dump."""
    if m_max < 0:
        raise DomainError("m_max must be nonnegative")
    rows = []
    if family == "cg":
        if nu is None:
            raise DomainError("family 'cg' needs nu")
        for m in range(m_max + 1):
            rows.append((m, 2 * m, cg_coefficient(nu, m)))
    elif family == "dougall":
        if nu is None:
            raise DomainError("family 'dougall' needs nu")
        for m in range(m_max + 1):
            rows.append((m, m, dougall_coefficient(nu, m)))
    elif family == "k":
        for m in range(m_max + 1):
            rows.append((m, m, k_fl_coefficient(m)))
    else:
        raise DomainError(f"unknown coefficient family {family!r}")
    return rows
