"""Scalar special-function kernel.

Gamma family (log-space with sign tracking), digamma/trigamma, the complete
elliptic integral of the first kind in the parameter convention

    K(m) = int_0^{pi/2} du / sqrt(1 - m sin^2 u),

Legendre polynomials and functions, and the normalized central binomial
sequence c_m = binom(2m, m) / 4^m.  Everything is plain binary64 arithmetic;
log Gamma uses a zeta series near 1 and 2, Lanczos up to 10 and a
compensated Stirling sum beyond, where it is good to about half an ulp.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import DivergenceError, DomainError, PoleError

__all__ = [
    "CONSTANTS",
    "Constants",
    "EULER_GAMMA",
    "catalan_oracle",
    "central_binomial",
    "central_binomials",
    "cospi",
    "digamma",
    "elliptic_K",
    "elliptic_K_complement",
    "gamma_signed",
    "is_nonpositive_integer",
    "legendre_P",
    "legendre_P_sweep",
    "legendre_Pnu",
    "ln_gamma",
    "rgamma_signed",
    "sinpi",
    "trigamma",
]

EULER_GAMMA = 0.57721566490153286061
LN_PI = 1.1447298858494001741
LN_SQRT_2PI = 0.91893853320467274178

# B_2, B_4, ..., B_16
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)

# Godfrey's Lanczos coefficients, g = 607/128, 15 terms.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def _zeta_minus_one(k: int, n_direct: int = 20) -> float:
    # Euler-Maclaurin tail from n_direct on; six Bernoulli corrections are
    # enough for k >= 2 at n_direct = 20.
    n = float(n_direct)
    tail = n ** (1 - k) / (k - 1) + 0.5 * n ** (-k)
    rising = float(k)  # (k)_{2j-1}
    fact = 2.0  # (2j)!
    for j in range(1, 7):
        tail += _BERNOULLI_EVEN[j - 1] / fact * rising * n ** (-k - 2 * j + 1)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    head = 0.0
    for i in range(n_direct - 1, 1, -1):
        head += float(i) ** (-k)
    return head + tail


_ZETA_M1 = tuple(_zeta_minus_one(k) for k in range(2, 42))


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def sinpi(x: float) -> float:
    """sin(pi x) with exact argument reduction; exact zero at integers."""
    if x == math.floor(x):
        return 0.0
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi x) with exact argument reduction; exact zero at half-integers."""
    r = abs(math.fmod(x, 2.0))
    if r > 1.0:
        r = 2.0 - r
    if r == 0.5:
        return 0.0
    if r > 0.5:
        return -math.sin(math.pi * (r - 0.5))
    return math.sin(math.pi * (0.5 - r))


def _lngamma_near_one(eps: float) -> float:
    # log Gamma(1 + eps) for |eps| <= 0.5
    s = 0.0
    p = -eps
    for i, zm1 in enumerate(_ZETA_M1):
        k = i + 2
        p *= -eps
        term = zm1 * p / k
        s += term
        if abs(term) < 1e-18 * (abs(s) + 1e-300):
            break
    return -math.log1p(eps) + eps * (1.0 - EULER_GAMMA) + s


def _lanczos_lngamma(x: float) -> float:
    z = x - 1.0
    s = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        s += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return LN_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(s)


# Stirling branch, x >= _STIRLING_MIN: pieces kept unrounded and summed once by fsum
_STIRLING_MIN = 10.0
_LN2_HI = 6.93147180369123816490e-01  # 32 significant bits, so k * _LN2_HI is exact
_LN2_LO = 1.90821492927058770002e-10
_LN_SQRT_2PI_LO = -3.8782941580672414e-17  # LN_SQRT_2PI - float(LN_SQRT_2PI)
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_SPLIT = 134217729.0  # 2^27 + 1


def _two_prod(a: float, b: float) -> tuple[float, float]:
    # Dekker: a*b == p + e exactly
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _stirling_lngamma(x: float) -> float:
    # log x = k log 2 + log f with f in [sqrt(1/2), sqrt(2)); k*_LN2_HI carries no rounding
    f, k = math.frexp(x)
    if f < 0.7071067811865476:
        f *= 2.0
        k -= 1
    log_f = math.log(f)
    a = x - 0.5  # exact in this range
    p1, e1 = _two_prod(a, k * _LN2_HI)
    p2, e2 = _two_prod(a, log_f)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING_COEF):
        series = series * inv2 + c
    return math.fsum((p1, e1, p2, e2, a * k * _LN2_LO, -x, LN_SQRT_2PI, _LN_SQRT_2PI_LO, series * inv))


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0.

    Raises PoleError at 0 and the negative integers; other negative
    arguments go through :func:`gamma_signed`.
    """
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x < 0.0:
        raise DomainError("ln_gamma needs x > 0; use gamma_signed for negative x")
    if x != x:
        raise DomainError("ln_gamma of NaN")
    if x < 0.5:
        return ln_gamma(x + 1.0) - math.log(x)
    if x < 1.5:
        return _lngamma_near_one(x - 1.0)
    if x < 2.5:
        return math.log1p(x - 2.0) + _lngamma_near_one(x - 2.0)
    if x >= _STIRLING_MIN:
        return _stirling_lngamma(x)
    return _lanczos_lngamma(x)


def gamma_signed(x: float) -> tuple[int, float]:
    """Return ``(sign, log|Gamma(x)|)`` for any non-pole real x."""
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0.0:
        return 1, ln_gamma(x)
    # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    s = sinpi(x)
    sign = 1 if s > 0.0 else -1
    return sign, LN_PI - math.log(abs(s)) - ln_gamma(1.0 - x)


def rgamma_signed(x: float) -> tuple[int, float]:
    """``(sign, log|1/Gamma(x)|)``; sign is 0 where 1/Gamma vanishes."""
    if is_nonpositive_integer(x):
        return 0, -math.inf
    sign, lg = gamma_signed(x)
    return sign, -lg


def digamma(x: float) -> float:
    if is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x!r}")
    if x < 0.0:
        return digamma(1.0 - x) - math.pi * cospi(x) / sinpi(x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    p = inv2
    s = 0.0
    for k, b in enumerate(_BERNOULLI_EVEN[:7], start=1):
        s += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - s


def trigamma(x: float) -> float:
    """psi'(x) for x > 0: upward recurrence into the asymptotic series."""
    if x <= 0.0:
        raise PoleError("trigamma is only provided for x > 0")
    acc = 0.0
    while x < 10.0:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    p = inv2 * inv
    s = inv + 0.5 * inv2
    for b in _BERNOULLI_EVEN[:7]:
        s += b * p
        p *= inv2
    return acc + s


def _agm(a: float, b: float) -> float:
    for _ in range(64):
        if abs(a - b) <= 1e-15 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter m < 1.

    Negative m is handled by the same AGM, no imaginary-modulus transform.
    """
    if not m < 1.0:
        raise DivergenceError(f"K(m) diverges for m >= 1 (got {m!r})")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(1.0 - m)))


def elliptic_K_complement(mc: float) -> float:
    """K(1 - mc) computed from the complementary parameter directly.

    Avoids forming 1 - mc when mc is tiny, where K(1 - mc) ~ log(4/sqrt(mc)).
    """
    if not mc > 0.0:
        raise DivergenceError(f"K(1 - mc) diverges for mc <= 0 (got {mc!r})")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(mc)))


def _check_legendre_arg(t: float) -> None:
    if not abs(t) <= 1.0 + 1e-12:
        raise DomainError(f"Legendre polynomial argument must lie in [-1, 1], got {t!r}")


def legendre_P(n: int, t: float) -> float:
    if n < 0:
        raise DomainError("degree must be nonnegative")
    _check_legendre_arg(t)
    if n == 0:
        return 1.0
    p0, p1 = 1.0, t
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * t * p1 - k * p0) / (k + 1)
    return p1


def legendre_P_sweep(nmax: int, t: float) -> list[float]:
    """[P_0(t), ..., P_nmax(t)] from one pass of the three-term recurrence."""
    _check_legendre_arg(t)
    out = [1.0]
    if nmax >= 1:
        out.append(t)
    p0, p1 = 1.0, t
    for k in range(1, nmax):
        p0, p1 = p1, ((2 * k + 1) * t * p1 - k * p0) / (k + 1)
        out.append(p1)
    return out


def legendre_Pnu(nu: float, x: float, xc: float | None = None) -> float:
    """P_nu(1 - 2x) = 2F1(-nu, nu + 1; 1; x) for real nu and x in [0, 1).

    ``xc`` optionally carries 1 - x exactly, for x within rounding of 1.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1), got {x!r}")
    if nu < -0.5:
        nu = -nu - 1.0
    if nu == math.floor(nu):
        t = 1.0 - 2.0 * x if xc is None else 2.0 * xc - 1.0
        return legendre_P(int(nu), t)
    if (1.0 - x if xc is None else xc) <= 0.0:
        raise DivergenceError("P_nu(-1) is logarithmically infinite for non-integer nu")
    from .hypergeom import gauss_2f1

    return gauss_2f1(-nu, nu + 1.0, 1.0, x, xc)


_cb_table = [1.0]
_cb_lock = threading.Lock()


def _extend_cb(m: int) -> None:
    with _cb_lock:
        c = _cb_table[-1]
        for k in range(len(_cb_table), m + 1):
            c *= (2 * k - 1) / (2 * k)
            _cb_table.append(c)


def central_binomial(m: int) -> float:
    """c_m = binom(2m, m)/4^m via c_m = c_{m-1} (2m - 1)/(2m)."""
    if m < 0:
        raise DomainError("index must be nonnegative")
    if m >= len(_cb_table):
        _extend_cb(m)
    return _cb_table[m]


def central_binomials(n: int) -> list[float]:
    """[c_0, ..., c_{n-1}]."""
    if n > len(_cb_table):
        _extend_cb(n - 1)
    return _cb_table[:n]


@dataclass(frozen=True)
class Constants:
    pi: float = 3.14159265358979323846
    sqrt_pi: float = 1.77245385090551602730
    gamma_quarter: float = 3.62560990822190831193
    gamma_eighth: float = 7.53394159879761190470
    catalan: float = 0.91596559417721901505


CONSTANTS = Constants()


def catalan_oracle() -> float:
    """Catalan's constant from sum_k (-1)^k/(2k+1)^2, accelerated."""
    from .series_accel import TermGenerator, sum_alternating_accel

    g = TermGenerator(lambda k: (-1.0) ** k / ((2 * k + 1) ** 2))
    return sum_alternating_accel(g, 24, tol=1e-15).value
