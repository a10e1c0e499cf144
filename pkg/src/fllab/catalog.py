"""Registry of verifiable identities and the verifier that checks them.

Each record names two independent ways of computing the same number (a
series and a closed form, a series and a quadrature, ...) and a parameter
grid.  ``verify`` evaluates both sides at every grid point and returns one
:class:`VerificationReport` per point.  Some records carry extra members:
a third route that must agree (gating) or a diagnostic variant whose
outcome is recorded but does not affect the status.
"""

from __future__ import annotations

import enum
import math
import random
import time
from types import MappingProxyType
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

from .config import ToleranceConfig
from .errors import DomainError, FLLabError, PoleError, UnknownIdentityError
from .fl_engine import (
    DegreeNu,
    Orientation,
    as_degree,
    beta_moment_legendre,
    cg_coefficient,
    cg_coefficient_dnu,
    dougall_series,
    fl_partial_sum,
    k_series,
    moment_series_1,
    moment_series_2,
    product_expansion,
)
from .hypergeom import PFQSpec, gauss_2f1, gauss_second, jacobi_moment_3f2, pfq, watson_3f2
from .numerics import (
    CONSTANTS,
    central_binomial,
    cospi,
    elliptic_K,
    elliptic_K_complement,
    legendre_P,
    legendre_Pnu,
    ln_gamma,
    sinpi,
    trigamma,
)
from .quadrature import gauss_adaptive, periodic_trapezoid, tanh_sinh
from .series_accel import Method, SeriesResult, TermGenerator, cvz_sum, sum_alternating_accel, sum_direct

__all__ = [
    "CATALOG",
    "Evaluation",
    "IdentityRecord",
    "Member",
    "Status",
    "VerificationReport",
    "catalog_ids",
    "cons1_lhs",
    "cons1_rhs",
    "get_record",
    "quasi_fl_1_series",
    "quasi_fl_2_series",
    "record_status",
    "summarize",
    "verify",
    "verify_all",
]

PI = CONSTANTS.pi
G14 = CONSTANTS.gamma_quarter
G18 = CONSTANTS.gamma_eighth
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Evaluation:
    value: float
    terms_used: int = 0
    method: str = "closed_form"


Point = Mapping[str, float]
Evaluator = Callable[[Point, ToleranceConfig], Union[Evaluation, float]]


def _as_eval(x) -> Evaluation:
    if isinstance(x, Evaluation):
        return x
    if isinstance(x, SeriesResult):
        return Evaluation(x.value, x.terms_used, x.method.value)
    return Evaluation(float(x))


@dataclass(frozen=True)
class Member:
    """An extra route compared against one or both sides of its record."""

    name: str
    evaluate: Evaluator
    against: tuple[str, ...] = ("lhs", "rhs")
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    gating: bool = True


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    description: str
    lhs: Evaluator
    rhs: Evaluator
    param_grid: tuple[dict, ...] = ({},)
    tol_rel: Optional[float] = None  # None: use the configured default
    tol_abs: Optional[float] = None
    point_tol_rel: Mapping[int, float] = field(default_factory=dict)
    members: tuple[Member, ...] = ()


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED_POLE = "skipped_pole"


@dataclass(frozen=True)
class VerificationReport:
    id: str
    index: int
    params: dict
    lhs: Optional[float]
    rhs: Optional[float]
    abs_err: Optional[float]
    rel_err: Optional[float]
    status: Status
    terms_used: int
    method: str
    elapsed_ms: float
    tol_rel: float
    tol_abs: float
    members: tuple[dict, ...] = ()
    diagnostic: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "status": self.status.value,
            "terms_used": self.terms_used,
            "method": self.method,
            "elapsed_ms": self.elapsed_ms,
            "tol_rel": self.tol_rel,
            "tol_abs": self.tol_abs,
            "members": [dict(m) for m in self.members],
            "diagnostic": self.diagnostic,
        }


def _errors(a: float, b: float) -> tuple[float, float]:
    abs_err = abs(a - b)
    denom = abs(a) if a != 0.0 else abs(b)
    if denom == 0.0:
        rel_err = 0.0 if abs_err == 0.0 else math.inf
    else:
        rel_err = abs_err / denom
    if abs_err != abs_err:
        return math.inf, math.inf
    return abs_err, rel_err


def _within(abs_err: float, rel_err: float, tol_rel: float, tol_abs: float) -> bool:
    return abs_err <= tol_abs or rel_err <= tol_rel


# ---------------------------------------------------------------------------
# series helpers


def _alternating(term: Callable[[int], float], head: int = 0, n: int = 16) -> SeriesResult:
    return sum_alternating_accel(TermGenerator(term), n, tol=1e-15, head=head)


def _c(m: int) -> float:
    return central_binomial(m)


# ---------------------------------------------------------------------------
# cons1: the x = 1/2 specialization of the product expansion


def cons1_lhs(nu) -> float:
    """cot(pi nu/2) Gamma((1+nu)/2)^2 / (pi Gamma((2+nu)/2)^2).

    Invariant under nu -> -nu-1, which is applied first so that the Gamma
    arguments stay positive; odd integer degrees give exactly 0.
    """
    d = as_degree(nu)
    if d.excluded_for_cons1:
        raise PoleError(f"nu = {d.nu!r} is excluded (cot or Gamma pole)")
    v = d.reflected
    n = DegreeNu(v).nearest_int
    if n is not None:
        return 0.0
    cot = cospi(0.5 * v) / sinpi(0.5 * v)
    return cot * math.exp(2.0 * (ln_gamma(0.5 * (1.0 + v)) - ln_gamma(0.5 * (2.0 + v)))) / PI


def cons1_rhs(nu) -> SeriesResult:
    """Sum of c_m^3 (-1)^(m+1) (4m+1) Gamma(m-nu)Gamma(m+nu+1)/(Gamma(m-nu+1/2)Gamma(m+nu+3/2)).

    Each summand is rewritten with the pole-free CG kernel:
    2 (-1)^m (4m+1) c_m cg(nu, m) / sin(pi nu).  At odd integer nu the
    quotient is replaced by its limit, d/dnu cg / (pi cos(pi nu)).
    """
    d = as_degree(nu)
    if d.excluded_for_cons1:
        raise PoleError(f"nu = {d.nu!r} is excluded (cot or Gamma pole)")
    v = d.reflected
    n = DegreeNu(v).nearest_int
    if n is None:
        s = sinpi(v)

        def term(m: int) -> float:
            return 2.0 * (-1.0 if m % 2 else 1.0) * (4 * m + 1) * _c(m) * cg_coefficient(v, m) / s

    else:
        denom = PI * cospi(float(n))

        def term(m: int) -> float:
            return 2.0 * (-1.0 if m % 2 else 1.0) * (4 * m + 1) * _c(m) * cg_coefficient_dnu(float(n), m) / denom

    # the sign pattern settles once m exceeds nu + 1/2
    head = math.ceil(abs(v)) + 2
    return _alternating(term, head=head)


# ---------------------------------------------------------------------------
# constant series with Gamma closed forms


def _cor1_series(p, cfg):
    def term(m):
        return _c(m) ** 3 * (1.0 if m % 2 else -1.0) * (4 * m + 1) ** 2 / ((4 * m - 1) * (4 * m + 3))

    return _alternating(term, head=1)


def _cor1_closed(p, cfg):
    return 32.0 * (2.0 + SQRT2) * G14**2 / G18**4


def _cor1_5_series(p, cfg):
    def term(m):
        return (
            _c(m) ** 3
            * (1.0 if m % 2 else -1.0)
            * ((4 * m - 1) * (4 * m + 3))
            / ((4 * m - 3) * (4 * m + 5))
        )

    return _alternating(term, head=1)


def _cor1_5_closed(p, cfg):
    return 32.0 * SQRT2 * (1.0 + SQRT2) * G14**2 / (9.0 * G18**4)


def _cor2_series(p, cfg):
    def term(m):
        return (
            _c(m) ** 5
            * (-1.0 if m % 2 else 1.0)
            * (4 * m + 1)
            * (4 * m * m + 2 * m + 1)
            / ((2 * m - 1) ** 2 * (m + 1) ** 2)
        )

    return sum_direct(TermGenerator(term), tol=1e-14, max_terms=min(cfg.max_terms, 10**5))


def _cor2_closed(p, cfg):
    return 128.0 / G14**4


_TRIGAMMA_DIFF_ORDER = 40


def trigamma_half_difference(m: int) -> float:
    """psi1(m + 1/2) - psi1(m + 1) as 4 sum_j (-1)^j / (2m + 1 + j)^2, accelerated.

    Adjacent pairs of the two trigamma series interleave into one
    alternating series, so no cancellation between two O(1/m) numbers.
    """
    base = 2 * m + 1
    return 4.0 * cvz_sum([(-1.0 if j % 2 else 1.0) / float(base + j) ** 2 for j in range(_TRIGAMMA_DIFF_ORDER)])


def _cor3_series(p, cfg):
    def term(m):
        return _c(m) ** 5 * (-1.0 if m % 2 else 1.0) * (4 * m + 1) * trigamma_half_difference(m)

    return _alternating(term)


def _cor3_via_trigamma(p, cfg):
    def term(m):
        return _c(m) ** 5 * (-1.0 if m % 2 else 1.0) * (4 * m + 1) * (trigamma(m + 0.5) - trigamma(m + 1.0))

    return _alternating(term)


def _cor3_closed(p, cfg):
    return 2.0 * G14**4 * CONSTANTS.catalan / PI**4


def _cor4_series(p, cfg):
    return _alternating(lambda m: _c(m) ** 5 * (-1.0 if m % 2 else 1.0) * (4 * m + 1))


def _cor4_pfq(p, cfg):
    fa = pfq(PFQSpec((0.5,) * 5, (1.0,) * 4, -1.0), max_terms=cfg.max_terms)
    fb = pfq(PFQSpec((1.5,) * 5, (2.0,) * 4, -1.0), max_terms=cfg.max_terms)
    return Evaluation((8.0 * fa.value - fb.value) / 8.0, fa.terms_used + fb.terms_used, "pfq_combination")


def _cor4_closed(p, cfg):
    return G14**4 / (2.0 * PI**4)


def _cor_diff_series(p, cfg):
    def term(m):
        return _c(m) * (-1.0 if m % 2 else 1.0) * (1.0 / (4 * m - 1) ** 2 - 1.0 / (4 * m + 3) ** 2)

    return _alternating(term)


def _cor_diff_pfq(p, cfg):
    f1 = pfq(PFQSpec((-0.25, -0.25, 0.5), (0.75, 0.75), -1.0), max_terms=cfg.max_terms)
    f2 = pfq(PFQSpec((0.5, 0.75, 0.75), (1.75, 1.75), -1.0), max_terms=cfg.max_terms)
    return Evaluation((9.0 * f1.value - f2.value) / 9.0, f1.terms_used + f2.terms_used, "pfq_combination")


def _cor_diff_closed(p, cfg):
    return 2.0 * PI**1.5 / G14**2


# ---------------------------------------------------------------------------
# FL partial sums against elliptic integrals


def _kk(x: float) -> float:
    """K(x) K(1 - x)."""
    return elliptic_K(x) * elliptic_K_complement(x)


def _cons2_lhs(p, cfg):
    return _kk(p["x"])


def _cons2_rhs(p, cfg):
    # (2/pi)^2 K(x)K(1-x) = P_{-1/2}(1-2x) P_{-1/2}(2x-1)
    N = cfg.fl_partial_N
    s = fl_partial_sum(product_expansion(-0.5), p["x"], N)
    return Evaluation(PI**2 / 4.0 * s, N, "fl_partial_sum")


def _similbraf_lhs(p, cfg):
    x = p["x"]
    return legendre_Pnu(p["nu"], x, 1.0 - x) * legendre_Pnu(p["nu"], 1.0 - x, x)


def _similbraf_rhs(p, cfg):
    N = cfg.fl_partial_N
    return Evaluation(fl_partial_sum(product_expansion(p["nu"]), p["x"], N), N, "fl_partial_sum")


def _k_expansion_lhs(p, cfg):
    return elliptic_K(p["x"])


def _k_expansion_rhs(p, cfg):
    N = cfg.fl_partial_N
    return Evaluation(fl_partial_sum(k_series(), p["x"], N), N, "fl_partial_sum")


def quasi_fl_1_series(x: float, N: int) -> SeriesResult:
    """sum_m P_m(2x-1)^2 (-1)^m / (2m+1), extrapolated from N terms.

    Near x = 1/2 the summands lose their oscillation and the tail decays
    like 1/N, so the estimate is the Richardson combination 2 S(N) - S(N/2)
    of averaged neighbouring partial sums; elsewhere the correction is
    below the truncation noise.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError("x must lie in [0, 1]")
    N -= N % 2
    if N < 4:
        raise DomainError("N must be at least 4")
    half = N // 2
    t = 2.0 * x - 1.0
    p0, p1 = 1.0, t
    s = 1.0  # m = 0
    prev = 0.0
    marks = {}
    for m in range(1, N + 1):
        prev = s
        s += p1 * p1 * (-1.0 if m % 2 else 1.0) / (2 * m + 1)
        if m in (half, N):
            marks[m] = 0.5 * (s + prev)
        p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
    value = 2.0 * marks[N] - marks[half]
    return SeriesResult(value, N + 1, Method.RAW_ORACLE, abs(marks[N] - marks[half]), True)


def _quasi_fl_1_lhs(p, cfg):
    x = p["x"]
    # the series is symmetric under x -> 1 - x
    k = elliptic_K(x) if x <= 0.5 else elliptic_K_complement(x)
    return k * k / PI


def _quasi_fl_1_rhs(p, cfg):
    r = quasi_fl_1_series(p["x"], cfg.fl_partial_N)
    return Evaluation(r.value, r.terms_used, "richardson")


def quasi_fl_2_series(x: float, z: float, max_terms: int = 10**6) -> SeriesResult:
    """sum_m P_m(2x-1)^2 z^m for 0 <= z < 1 (geometric convergence)."""
    if not 0.0 <= z < 1.0:
        raise DomainError("z must lie in [0, 1)")
    t = 2.0 * x - 1.0
    p0, p1 = 1.0, t
    s = 1.0
    zm = 1.0
    for m in range(1, max_terms):
        zm *= z
        term = p1 * p1 * zm
        s += term
        if zm <= 1e-17 * s:
            return SeriesResult(s, m + 1, Method.DIRECT, zm, True)
        p0, p1 = p1, ((2 * m + 1) * t * p1 - m * p0) / (m + 1)
    raise DomainError("generating series did not converge")


def _quasi_fl_2_lhs(p, cfg):
    x, z = p["x"], p["z"]
    return 2.0 / PI * elliptic_K(-16.0 * x * (1.0 - x) * z / (1.0 - z) ** 2) / (1.0 - z)


def _quasi_fl_2_rhs(p, cfg):
    r = quasi_fl_2_series(p["x"], p["z"], cfg.max_terms)
    return Evaluation(r.value, r.terms_used, "direct")


def _integral_1_integrand(x: float) -> Callable[[float], float]:
    s = (1.0 - 2.0 * x) ** 2

    def f(z: float) -> float:
        z2 = z * z
        q = 1.0 + z2
        # 1 - 16x(1-x)z^2/(1+z^2)^2 without cancellation near z = 1, x = 1/2
        mc = ((1.0 - z2) ** 2 + 4.0 * z2 * s) / (q * q)
        return elliptic_K_complement(mc) / q

    return f


def _integral_1_lhs(p, cfg):
    x = p["x"]
    r = tanh_sinh(_integral_1_integrand(x), 0.0, 1.0, cfg.quad_tol)
    return Evaluation(2.0 / PI * r.value, r.fn_evals, "tanh_sinh")


def _integral_2_lhs(p, cfg):
    z = p["z"]
    z2 = z * z
    q = 1.0 + z2
    scale = 16.0 * z2 / (q * q)
    r = gauss_adaptive(lambda x: elliptic_K(scale * x * (1.0 - x)), 0.0, 1.0, cfg.quad_tol)
    return Evaluation(2.0 / PI * r.value / q, r.fn_evals, "gauss_kronrod")


def _integral_2_rhs(p, cfg):
    z = p["z"]
    return math.atan(z) / z


# ---------------------------------------------------------------------------
# Hobson coupling


def _p_cos(nu: float, theta: float, negate: bool = False) -> float:
    """P_nu(cos theta), or P_nu(-cos theta), from half-angle parameters."""
    s = math.sin(0.5 * theta) ** 2
    c = math.cos(0.5 * theta) ** 2
    return legendre_Pnu(nu, c, s) if negate else legendre_Pnu(nu, s, c)


def _hobson_average(nu: float, t1: float, t2: float, printed: bool = False) -> tuple[float, int]:
    s1 = math.sin(t1)
    s2 = math.sin(t2)
    if printed:
        # argument cos t1 cos t2 + sin^2 t2 cos phi
        c12 = math.cos(t1) * math.cos(t2)

        def f(phi: float) -> float:
            t = c12 + s2 * s2 * math.cos(phi)
            if abs(t) > 1.0:
                raise DomainError(f"argument {t!r} leaves [-1, 1]")
            return legendre_Pnu(nu, 0.5 * (1.0 - t), 0.5 * (1.0 + t))

    else:
        a = math.sin(0.5 * (t1 - t2)) ** 2
        b = math.cos(0.5 * (t1 + t2)) ** 2
        ss = s1 * s2

        def f(phi: float) -> float:
            # x = (1 - t)/2 and 1 - x, both formed without cancellation
            x = a + ss * math.sin(0.5 * phi) ** 2
            xc = b + ss * math.cos(0.5 * phi) ** 2
            return legendre_Pnu(nu, min(x, 1.0), min(xc, 1.0))

    r = periodic_trapezoid(f, 2.0 * PI, tol=1e-14)
    return r.value / (2.0 * PI), r.fn_evals


def _hobson_lhs(p, cfg):
    v, n = _hobson_average(p["nu"], p["theta1"], p["theta2"])
    return Evaluation(v, n, "periodic_trapezoid")


def _hobson_printed(p, cfg):
    v, n = _hobson_average(p["nu"], p["theta1"], p["theta2"], printed=True)
    return Evaluation(v, n, "periodic_trapezoid")


def _hobson_rhs(p, cfg):
    nu, t1, t2 = p["nu"], p["theta1"], p["theta2"]
    neg = t1 + t2 > PI
    return _p_cos(nu, t1, neg) * _p_cos(nu, t2, neg)


# ---------------------------------------------------------------------------
# Dougall orientation self-test

DOUGALL_N = 4000


def _dougall_lhs(p, cfg):
    return legendre_Pnu(p["nu"], p["x"])


def _dougall_rhs(p, cfg):
    s = dougall_series(p["nu"], Orientation.CLASSICAL)
    return Evaluation(fl_partial_sum(s, p["x"], DOUGALL_N), DOUGALL_N, "fl_partial_sum")


def _dougall_printed(p, cfg):
    s = dougall_series(p["nu"], Orientation.PRINTED)
    return Evaluation(fl_partial_sum(s, p["x"], DOUGALL_N), DOUGALL_N, "fl_partial_sum")


def _dougall_grid() -> tuple[dict, ...]:
    rng = random.Random(20240611)
    pts = [{"nu": rng.uniform(-1.5, 2.5), "x": rng.uniform(0.1, 0.9)} for _ in range(20)]
    pts.append({"nu": -0.5, "x": 0.2})
    return tuple(pts)


# ---------------------------------------------------------------------------
# moments and the Legendre integrals behind them


def _kk_weighted(weight: Callable[[float], float], cfg) -> Evaluation:
    r = tanh_sinh(lambda x: weight(x) * elliptic_K(x) * elliptic_K_complement(x), 0.0, 1.0, cfg.quad_tol * 1e-2, rel_tol=cfg.quad_tol)
    return Evaluation(r.value, r.fn_evals, "tanh_sinh")


def _moment1_lhs(p, cfg):
    n = int(p["n"])
    return _kk_weighted(lambda x: x**n, cfg)


def _moment1_rhs(p, cfg):
    n = int(p["n"])
    return Evaluation(moment_series_1(n), n // 2 + 1, "finite_sum")


def _moment2_lhs(p, cfg):
    n = int(p["n"])
    return _kk_weighted(lambda x: (x * (1.0 - x)) ** (n - 1), cfg)


def _moment2_rhs(p, cfg):
    n = int(p["n"])
    return Evaluation(moment_series_2(n), n, "finite_sum")


def _gauss_second_lhs(p, cfg):
    nu = p["nu"]
    return Evaluation(gauss_2f1(-nu, nu + 1.0, 1.0, 0.5), 0, "pfq")


def _gauss_second_rhs(p, cfg):
    return gauss_second(p["nu"])


def _odd_projection_pieces(nu: float, n: int, split: float, cfg) -> tuple[float, float]:
    def f(x: float) -> float:
        xc = 1.0 - x
        return legendre_Pnu(nu, x, xc) * legendre_Pnu(nu, xc, x) * legendre_P(n, 2.0 * x - 1.0)

    left = tanh_sinh(f, 0.0, split, cfg.quad_tol * 1e-3)
    right = tanh_sinh(f, split, 1.0, cfg.quad_tol * 1e-3)
    return left.value, right.value


def _odd_projection_lhs(p, cfg):
    return _odd_projection_pieces(p["nu"], int(p["n"]), 0.3, cfg)[0]


def _odd_projection_rhs(p, cfg):
    # odd-degree projection vanishes: int_0^a = -int_a^1
    return -_odd_projection_pieces(p["nu"], int(p["n"]), 0.3, cfg)[1]


def _beta_lhs(p, cfg):
    mu, n = p["mu"], int(p["n"])
    r = gauss_adaptive(lambda x: x ** (mu - 1.0) * legendre_P(n, 2.0 * x - 1.0), 0.0, 1.0, cfg.quad_tol * 1e-2)
    return Evaluation(r.value, r.fn_evals, "gauss_kronrod")


def _beta_rhs(p, cfg):
    return beta_moment_legendre(p["mu"], int(p["n"]))


def _jacobi_lhs(p, cfg):
    mu, nv, n = p["mu"], p["nu"], int(p["n"])

    def f(x: float) -> float:
        return x ** (mu - 1.0) * (1.0 - x) ** (nv - 1.0) * legendre_P(n, 2.0 * x - 1.0)

    r = gauss_adaptive(f, 0.0, 1.0, cfg.quad_tol * 1e-2)
    return Evaluation(r.value, r.fn_evals, "gauss_kronrod")


def _jacobi_rhs(p, cfg):
    return Evaluation(jacobi_moment_3f2(int(p["n"]), p["mu"], p["nu"]), int(p["n"]) + 1, "pfq")


def _watson_lhs(p, cfg):
    m, n = int(p["m"]), p["n"]
    r = pfq(PFQSpec((-2.0 * m, 2.0 * m + 1.0, n), (1.0, 2.0 * n), 1.0))
    return Evaluation(r.value, r.terms_used, "pfq")


def _watson_rhs(p, cfg):
    m, n = int(p["m"]), p["n"]
    return watson_3f2(-2.0 * m, 2.0 * m + 1.0, n)


def _cons1_lhs_eval(p, cfg):
    return cons1_lhs(p["nu"])


def _cons1_rhs_eval(p, cfg):
    return cons1_rhs(p["nu"])


# ---------------------------------------------------------------------------
# the catalog


def _build() -> dict[str, IdentityRecord]:
    recs = [
        IdentityRecord(
            "similbraf",
            "P_nu(1-2x) P_nu(2x-1) against its even-degree FL expansion (pole-free CG coefficients)",
            _similbraf_lhs,
            _similbraf_rhs,
            (
                {"nu": 0.3, "x": 0.2},
                {"nu": 0.3, "x": 0.5},
                {"nu": -0.7, "x": 0.35},
                {"nu": 1.6, "x": 0.8},
                {"nu": 2.25, "x": 0.6},
            ),
            tol_rel=1e-5,
            tol_abs=1e-7,
        ),
        IdentityRecord(
            "odd_degree_projection",
            "odd-degree FL projections of P_nu(1-2x) P_nu(2x-1) vanish: the integral over [0, 0.3] cancels the one over [0.3, 1]",
            _odd_projection_lhs,
            _odd_projection_rhs,
            tuple({"nu": nu, "n": n} for nu in (0.3, -0.7, 1.6) for n in (1, 3, 5)),
        ),
        IdentityRecord(
            "cons1",
            "cot(pi nu/2) Gamma((1+nu)/2)^2/(pi Gamma((2+nu)/2)^2) against the c_m^3 series",
            _cons1_lhs_eval,
            _cons1_rhs_eval,
            tuple({"nu": nu} for nu in (0.25, 0.75, 1.25, -0.3, 0.5 - 1e-3)),
            tol_rel=1e-8,
            point_tol_rel={4: 1e-6},
        ),
        IdentityRecord(
            "cons2",
            "K(x)K(1-x) against pi^3/8 sum c_m^4 (4m+1) P_2m(2x-1), fl_partial_N terms",
            _cons2_lhs,
            _cons2_rhs,
            tuple({"x": x} for x in (0.1, 0.25, 0.5, 0.9)),
            tol_rel=1e-4,
            point_tol_rel={2: 1e-5},
        ),
        IdentityRecord(
            "cor1",
            "sum c_m^3 (-1)^(m+1) (4m+1)^2/((4m-1)(4m+3)) = 32(2+sqrt2) Gamma(1/4)^2/Gamma(1/8)^4",
            _cor1_series,
            _cor1_closed,
        ),
        IdentityRecord(
            "cor1_5",
            "sum c_m^3 (-1)^(m+1) (4m-1)(4m+3)/((4m-3)(4m+5)) = 32 sqrt2 (1+sqrt2) Gamma(1/4)^2/(9 Gamma(1/8)^4)",
            _cor1_5_series,
            _cor1_5_closed,
        ),
        IdentityRecord(
            "cor2",
            "sum c_m^5 (-1)^m (4m+1)(4m^2+2m+1)/((2m-1)^2 (m+1)^2) = 128/Gamma(1/4)^4, direct summation",
            _cor2_series,
            _cor2_closed,
            tol_rel=1e-10,
        ),
        IdentityRecord(
            "cor3",
            "sum c_m^5 (-1)^m (4m+1)(psi1(m+1/2) - psi1(m+1)) = 2 Gamma(1/4)^4 C/pi^4",
            _cor3_series,
            _cor3_closed,
            members=(Member("trigamma_difference", _cor3_via_trigamma, tol_rel=1e-9),),
        ),
        IdentityRecord(
            "cor4",
            "sum c_m^5 (-1)^m (4m+1) = Gamma(1/4)^4/(2 pi^4); member: (8 5F4(1/2..;1..;-1) - 5F4(3/2..;2..;-1))/8",
            _cor4_series,
            _cor4_closed,
            members=(Member("five_f_four_combination", _cor4_pfq, tol_rel=1e-8),),
        ),
        IdentityRecord(
            "cor_diff_2f1",
            "sum c_m (-1)^m (1/(4m-1)^2 - 1/(4m+3)^2) = 2 pi^(3/2)/Gamma(1/4)^2; member: (9 3F2(-1/4,-1/4,1/2;3/4,3/4;-1) - 3F2(1/2,3/4,3/4;7/4,7/4;-1))/9",
            _cor_diff_series,
            _cor_diff_closed,
            members=(Member("three_f_two_combination", _cor_diff_pfq, tol_rel=1e-9),),
        ),
        IdentityRecord(
            "gauss_second_id",
            "2F1(-nu, nu+1; 1; 1/2) by power series against sqrt(pi)/(Gamma((1-nu)/2) Gamma((nu+2)/2))",
            _gauss_second_lhs,
            _gauss_second_rhs,
            tuple({"nu": nu} for nu in (0.25, -0.5, 0.75, 1.3, -1.7, 2.5)),
            tol_rel=1e-11,
        ),
        IdentityRecord(
            "k_expansion",
            "K(x) against sum 2/(2m+1) P_m(2x-1), fl_partial_N terms",
            _k_expansion_lhs,
            _k_expansion_rhs,
            tuple({"x": x} for x in (0.1, 0.3, 0.7)),
            tol_rel=1e-5,
        ),
        IdentityRecord(
            "beta_moment",
            "int_0^1 x^(mu-1) P_n(2x-1) dx = Gamma(mu)^2/(Gamma(mu+n+1) Gamma(mu-n))",
            _beta_lhs,
            _beta_rhs,
            ({"mu": 3.0, "n": 2}, {"mu": 1.5, "n": 3}, {"mu": 2.5, "n": 1}, {"mu": 4.2, "n": 5}),
        ),
        IdentityRecord(
            "jacobi_moment",
            "int_0^1 x^(mu-1)(1-x)^(nu-1) P_n(2x-1) dx = (-1)^n B(mu,nu) 3F2(-n, n+1, mu; 1, mu+nu; 1)",
            _jacobi_lhs,
            _jacobi_rhs,
            ({"n": 2, "mu": 1.5, "nu": 2.5}, {"n": 3, "mu": 2.0, "nu": 3.0}, {"n": 4, "mu": 3.25, "nu": 1.75}),
        ),
        IdentityRecord(
            "watson_3f2",
            "3F2(-2m, 2m+1, n; 1, 2n; 1) by terminating sum against Watson's Gamma product",
            _watson_lhs,
            _watson_rhs,
            tuple({"m": m, "n": n} for m, n in ((1, 2), (2, 3), (3, 5), (1, 4))),
            tol_rel=1e-11,
        ),
        IdentityRecord(
            "moment1",
            "int_0^1 x^n K(x)K(1-x) dx by tanh-sinh against the finite c_m^4 sum",
            _moment1_lhs,
            _moment1_rhs,
            tuple({"n": n} for n in range(11)),
            tol_rel=1e-8,
        ),
        IdentityRecord(
            "moment2",
            "int_0^1 [x(1-x)]^(n-1) K(x)K(1-x) dx by tanh-sinh against the finite c_m^4 sum",
            _moment2_lhs,
            _moment2_rhs,
            tuple({"n": n} for n in range(1, 7)),
            tol_rel=1e-8,
        ),
        IdentityRecord(
            "quasi_fl_1",
            "sum P_m(2x-1)^2 (-1)^m/(2m+1) = K(min(x,1-x))^2/pi (series symmetric in x <-> 1-x)",
            _quasi_fl_1_lhs,
            _quasi_fl_1_rhs,
            tuple({"x": x} for x in (0.1, 0.3, 0.5, 0.8)),
            tol_rel=1e-6,
        ),
        IdentityRecord(
            "quasi_fl_2",
            "sum P_m(2x-1)^2 z^m = (2/pi) K(-16x(1-x)z/(1-z)^2)/(1-z) (power index read as m)",
            _quasi_fl_2_lhs,
            _quasi_fl_2_rhs,
            tuple({"x": x, "z": z} for x in (0.25, 0.5, 0.75) for z in (0.2, 0.5, 0.8)),
            tol_rel=1e-6,
        ),
        IdentityRecord(
            "integral_id_1",
            "(2/pi) int_0^1 K(16x(1-x)z^2/(1+z^2)^2)/(1+z^2) dz = K(min(x,1-x))^2/pi",
            _integral_1_lhs,
            _quasi_fl_1_lhs,
            tuple({"x": x} for x in (0.2, 0.5, 0.8)),
            tol_rel=1e-6,
        ),
        IdentityRecord(
            "integral_id_2",
            "(2/pi) int_0^1 K(16x(1-x)z^2/(1+z^2)^2)/(1+z^2) dx = arctan(z)/z",
            _integral_2_lhs,
            _integral_2_rhs,
            tuple({"z": z} for z in (0.25, 0.5, 0.9)),
            tol_rel=1e-6,
            point_tol_rel={1: 1e-8},
        ),
        IdentityRecord(
            "hobson",
            "phi-average of P_nu(cos t1 cos t2 + sin t1 sin t2 cos phi) = P_nu(+-cos t1) P_nu(+-cos t2), "
            "sign by t1 + t2 <= pi; diagnostic member: the sin^2 t2 variant of the argument",
            _hobson_lhs,
            _hobson_rhs,
            tuple(
                {"nu": nu, "theta1": t1, "theta2": t2}
                for nu in (0.3, -0.5, 2.0)
                for t1, t2 in ((0.3, 0.5), (0.7, 1.2), (1.1, 0.4), (2.0, 2.6), (2.9, 1.9), (1.7, 2.8))
            ),
            members=(Member("printed_sin_theta2_squared", _hobson_printed, ("lhs",), gating=False),),
        ),
        IdentityRecord(
            "dougall_orientation",
            "P_nu(1-2x) against Dougall's sinc coefficients on P_m(1-2x), N = 4000; "
            "diagnostic member: the same coefficients on P_m(2x-1)",
            _dougall_lhs,
            _dougall_rhs,
            _dougall_grid(),
            tol_rel=5e-3,
            tol_abs=5e-3,
            members=(
                Member("printed_orientation", _dougall_printed, ("lhs",), tol_rel=5e-3, tol_abs=5e-3, gating=False),
            ),
        ),
    ]
    out = {}
    for r in recs:
        if r.id in out:
            raise ValueError(f"duplicate identity id {r.id!r}")
        out[r.id] = r
    return out


CATALOG: Mapping[str, IdentityRecord] = MappingProxyType(_build())


def catalog_ids() -> list[str]:
    return list(CATALOG)


def get_record(identity_id: str) -> IdentityRecord:
    try:
        return CATALOG[identity_id]
    except KeyError:
        raise UnknownIdentityError(identity_id) from None


# ---------------------------------------------------------------------------
# verification


def _evaluate_member(member: Member, point, cfg, sides: dict) -> tuple[dict, bool]:
    tol_rel, tol_abs = cfg.effective(member.tol_rel, member.tol_abs)
    entry = {"name": member.name, "gating": member.gating, "tol_rel": tol_rel, "tol_abs": tol_abs}
    try:
        val = _as_eval(member.evaluate(point, cfg)).value
    except (FLLabError, ArithmeticError) as exc:
        entry.update(value=None, abs_err=None, rel_err=None, status=Status.FAIL.value, diagnostic=str(exc))
        return entry, not member.gating
    worst_abs, worst_rel = 0.0, 0.0
    for side in member.against:
        a, r = _errors(val, sides[side])
        worst_abs, worst_rel = max(worst_abs, a), max(worst_rel, r)
    ok = _within(worst_abs, worst_rel, tol_rel, tol_abs)
    entry.update(
        value=val,
        abs_err=worst_abs,
        rel_err=worst_rel,
        status=(Status.PASS if ok else Status.FAIL).value,
        diagnostic="",
    )
    return entry, ok or not member.gating


def _verify_point(rec: IdentityRecord, index: int, cfg: ToleranceConfig) -> VerificationReport:
    point = rec.param_grid[index]
    tol_rel, tol_abs = cfg.effective(rec.point_tol_rel.get(index, rec.tol_rel), rec.tol_abs)
    t0 = time.perf_counter()
    try:
        lhs = _as_eval(rec.lhs(point, cfg))
        rhs = _as_eval(rec.rhs(point, cfg))
    except PoleError as exc:
        return VerificationReport(
            rec.id, index, dict(point), None, None, None, None, Status.SKIPPED_POLE, 0, "",
            (time.perf_counter() - t0) * 1e3, tol_rel, tol_abs, (), str(exc),
        )
    except (FLLabError, ArithmeticError, ValueError) as exc:
        return VerificationReport(
            rec.id, index, dict(point), None, None, None, None, Status.FAIL, 0, "",
            (time.perf_counter() - t0) * 1e3, tol_rel, tol_abs, (), f"{type(exc).__name__}: {exc}",
        )
    abs_err, rel_err = _errors(lhs.value, rhs.value)
    ok = _within(abs_err, rel_err, tol_rel, tol_abs)
    sides = {"lhs": lhs.value, "rhs": rhs.value}
    members = []
    for mem in rec.members:
        entry, mem_ok = _evaluate_member(mem, point, cfg, sides)
        members.append(entry)
        ok = ok and mem_ok
    elapsed = (time.perf_counter() - t0) * 1e3
    return VerificationReport(
        rec.id,
        index,
        dict(point),
        lhs.value,
        rhs.value,
        abs_err,
        rel_err,
        Status.PASS if ok else Status.FAIL,
        lhs.terms_used + rhs.terms_used,
        f"{lhs.method}|{rhs.method}",
        elapsed,
        tol_rel,
        tol_abs,
        tuple(members),
    )


def _run(tasks: Sequence[tuple[IdentityRecord, int]], cfg: ToleranceConfig) -> list[VerificationReport]:
    if cfg.workers <= 1 or len(tasks) <= 1:
        return [_verify_point(r, i, cfg) for r, i in tasks]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        # map preserves submission order, whatever the completion order
        return list(pool.map(lambda t: _verify_point(t[0], t[1], cfg), tasks))


def verify(identity_id: str, config: Optional[ToleranceConfig] = None) -> list[VerificationReport]:
    """Evaluate one record at every grid point, in grid order."""
    rec = get_record(identity_id)
    cfg = config or ToleranceConfig()
    return _run([(rec, i) for i in range(len(rec.param_grid))], cfg)


def verify_all(
    config: Optional[ToleranceConfig] = None,
    *,
    ids: Optional[Sequence[str]] = None,
    prefix: Optional[str] = None,
) -> list[VerificationReport]:
    """Every selected record, ordered by (catalog order, grid index)."""
    cfg = config or ToleranceConfig()
    selected = list(ids) if ids is not None else catalog_ids()
    recs = [get_record(i) for i in selected]
    if prefix is not None:
        recs = [r for r in recs if r.id.startswith(prefix)]
    tasks = [(r, i) for r in recs for i in range(len(r.param_grid))]
    return _run(tasks, cfg)


def summarize(reports: Sequence[VerificationReport]) -> dict:
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for r in reports:
        if r.status is Status.PASS:
            counts["pass"] += 1
        elif r.status is Status.FAIL:
            counts["fail"] += 1
        else:
            counts["skipped"] += 1
    counts["total"] = len(reports)
    return counts


def record_status(reports: Sequence[VerificationReport]) -> dict[str, Status]:
    """Per-id verdict: fail if any point fails, skipped only if every point was skipped."""
    out: dict[str, Status] = {}
    for r in reports:
        prev = out.get(r.id)
        if r.status is Status.FAIL or prev is Status.FAIL:
            out[r.id] = Status.FAIL
        elif r.status is Status.PASS or prev is Status.PASS:
            out[r.id] = Status.PASS
        else:
            out[r.id] = Status.SKIPPED_POLE
    return out
