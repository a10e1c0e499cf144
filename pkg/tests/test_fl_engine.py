import math
import random
import threading

import pytest

from fllab.errors import DomainError
from fllab.fl_engine import (
    DegreeNu,
    NuClass,
    Orientation,
    Parity,
    as_degree,
    beta_moment_legendre,
    cg_coefficient,
    cg_coefficient_dnu,
    cg_projection,
    coefficient_rows,
    dougall_coefficient,
    dougall_series,
    fl_partial_sum,
    fl_partial_sums,
    k_fl_coefficient,
    k_series,
    moment_series_1,
    moment_series_2,
    product_expansion,
)
from fllab.hypergeom import gauss_second
from fllab.numerics import central_binomial as c
from fllab.numerics import elliptic_K, elliptic_K_complement, legendre_P, legendre_Pnu
from fllab.quadrature import gauss_adaptive, tanh_sinh

PI3_8 = math.pi**3 / 8


class TestDegreeNu:
    @pytest.mark.parametrize(
        "nu,cls",
        [
            (0.3, NuClass.GENERIC),
            (2.0, NuClass.NONNEG_INTEGER),
            (1 + 5e-10, NuClass.NONNEG_INTEGER),
            (1 + 5e-9, NuClass.GENERIC),
            (-3.0, NuClass.NEG_INTEGER),
            (-0.5, NuClass.HALF_INTEGER),
            (2.5, NuClass.HALF_INTEGER),
        ],
    )
    def test_classification(self, nu, cls):
        assert DegreeNu(nu).classification is cls

    def test_excluded_set(self):
        excluded = {n for n in range(-9, 10) if DegreeNu(float(n)).excluded_for_cons1}
        assert excluded == {-9, -7, -5, -3, -1, 0, 2, 4, 6, 8}
        assert not DegreeNu(0.5).excluded_for_cons1
        assert not DegreeNu(-2.0).excluded_for_cons1

    def test_reflection(self):
        assert DegreeNu(-1.5).reflected == 0.5
        assert DegreeNu(0.7).reflected == 0.7
        assert as_degree(DegreeNu(0.2)).nu == 0.2

    def test_nan(self):
        with pytest.raises(DomainError):
            DegreeNu(math.nan)
        with pytest.raises(DomainError):
            cg_coefficient(math.inf, 1)


class TestCG:
    def test_trivial(self):
        assert cg_coefficient(0.0, 0) == pytest.approx(1.0, rel=1e-15)
        for m in range(1, 6):
            assert cg_coefficient(0.0, m) == 0.0

    def test_half(self):
        for m in range(30):
            assert cg_coefficient(-0.5, m) == pytest.approx(math.pi / 2 * c(m) ** 4, rel=1e-13)

    def test_reference_values(self):
        assert cg_coefficient(0.3, 2) == pytest.approx(-0.026816984624549789006, rel=1e-13)
        assert cg_coefficient(1.6, 3) == pytest.approx(0.018511733975523258975, rel=1e-13)

    def test_symmetric_integral_is_twice(self):
        # the [-1, 1] projection in t = 2x - 1 carries an extra factor 2 over [0, 1]
        nu = 0.3

        def f(t):
            return legendre_Pnu(nu, 0.5 * (1 + t), 0.5 * (1 - t)) * legendre_Pnu(nu, 0.5 * (1 - t), 0.5 * (1 + t)) * legendre_P(4, t)

        q = tanh_sinh(f, -1.0, 1.0, 1e-14).value
        assert q == pytest.approx(2 * cg_coefficient(nu, 2), rel=1e-9)

    @pytest.mark.parametrize("nu", [0.3, 0.25, -0.7, 1.6])
    def test_projection(self, nu):
        for m in range(7):
            q = cg_projection(nu, 2 * m).value
            assert cg_coefficient(nu, m) == pytest.approx(q, rel=1e-8, abs=1e-12)

    def test_integer_one(self):
        # -(1 - 2x)^2 = -1/3 - (2/3) P_2(2x - 1)
        s = product_expansion(1)
        assert s.coefficient(0) == pytest.approx(-1 / 3, rel=1e-14)
        assert s.coefficient(1) == pytest.approx(-2 / 3, rel=1e-14)
        assert s.coefficient(2) == 0.0 and s.coefficient(7) == 0.0

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_continuity(self, n):
        for m in range(5):
            for h in (1e-6, -1e-6):
                assert abs(cg_coefficient(n + h, m) - cg_coefficient(n, m)) <= 1e-4

    @pytest.mark.parametrize("n", [1, 3])
    def test_derivative(self, n):
        h = 1e-5
        for m in range(6):
            fd = (cg_coefficient(n + h, m) - cg_coefficient(n - h, m)) / (2 * h)
            assert cg_coefficient_dnu(float(n), m) == pytest.approx(fd, rel=1e-6, abs=1e-9)

    def test_derivative_domain(self):
        with pytest.raises(DomainError):
            cg_coefficient_dnu(0.5, 1)

    def test_reflection_in_degree(self):
        for m in range(5):
            assert cg_coefficient(-1.3, m) == cg_coefficient(0.3, m)


class TestOddDegreeVanishing:
    def test_random_nu(self):
        rng = random.Random(7)
        for _ in range(20):
            nu = rng.uniform(-3.0, 3.0)
            s = product_expansion(nu)

            def target(x):
                return legendre_Pnu(nu, x, 1 - x) * legendre_Pnu(nu, 1 - x, x)

            for n in (1, 3, 5, 7, 9):
                assert s.coefficient_of_degree(n) == 0.0
                # an asymmetric split keeps the quadrature from cancelling by construction
                f = lambda x: target(x) * legendre_P(n, 2 * x - 1)  # noqa: E731
                q = gauss_adaptive(f, 0.0, 0.37, 1e-12).value + gauss_adaptive(f, 0.37, 1.0, 1e-12).value
                assert abs(q) <= 1e-9


class TestProductExpansion:
    def test_elliptic_case(self):
        s = product_expansion(-0.5)
        assert s.parity is Parity.EVEN_ONLY
        for m in range(20):
            assert s.coefficient(m) == pytest.approx(math.pi / 2 * (4 * m + 1) * c(m) ** 4, rel=1e-12)
        v = fl_partial_sum(s, 0.5, 10**4)
        assert v * (math.pi / 2) ** 2 == pytest.approx(elliptic_K(0.5) ** 2, abs=1e-5 * (math.pi / 2) ** 2)

    def test_partial_sum_quarter(self):
        v = fl_partial_sum(product_expansion(0.25), 0.5, 400)
        assert v == pytest.approx(gauss_second(0.25) ** 2, abs=5e-4)

    def test_ratio_recurrence_matches_direct(self):
        s = product_expansion(0.37)
        coef = s.coefficients(1000)
        for m in (1, 17, 255, 257, 511, 999):
            direct = (4 * m + 1) * cg_coefficient(0.37, m)
            assert coef[m] == pytest.approx(direct, rel=1e-11)

    def test_symmetric_in_x(self):
        s = product_expansion(0.3)
        for x in (0.1, 0.25, 0.375, 0.4):
            assert fl_partial_sum(s, x, 500) == fl_partial_sum(s, 1 - x, 500)

    def test_target_symmetric(self):
        for x in (0.1, 0.3):
            a = legendre_Pnu(0.3, x, 1 - x) * legendre_Pnu(0.3, 1 - x, x)
            b = legendre_Pnu(0.3, 1 - x, x) * legendre_Pnu(0.3, x, 1 - x)
            assert a == b

    def test_coefficients_decay(self):
        s = product_expansion(1.7)
        assert abs(s.coefficient(5000)) < abs(s.coefficient(50)) < abs(s.coefficient(5))

    def test_memo_is_shared(self):
        assert product_expansion(0.3) is product_expansion(as_degree(0.3))

    def test_concurrent_fill(self):
        s = product_expansion(0.4321)
        results = []

        def work(n):
            results.append(s.coefficients(n))

        threads = [threading.Thread(target=work, args=(n,)) for n in (3000, 1500, 3000, 2999, 10)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        full = s.coefficients(3000)
        for r in results:
            assert r == full[: len(r)]


class TestPartialSums:
    def test_first_term(self):
        for s in (product_expansion(0.3), dougall_series(0.3), k_series()):
            assert fl_partial_sum(s, 0.2, 1) == s.coefficient(0)

    def test_checkpoints_order(self):
        s = k_series()
        out = fl_partial_sums(s, 0.3, [40, 10, 20])
        assert out == [fl_partial_sum(s, 0.3, n) for n in (40, 10, 20)]

    def test_domain(self):
        with pytest.raises(DomainError):
            fl_partial_sum(k_series(), 1.2, 10)
        with pytest.raises(DomainError):
            fl_partial_sums(k_series(), 0.5, [0])


class TestKSeries:
    def test_coefficients(self):
        assert k_fl_coefficient(0) == 2.0
        assert k_series().coefficient_of_degree(3) == pytest.approx(2 / 7, rel=1e-15)

    def test_projection(self):
        m = 4
        q = tanh_sinh(lambda x: elliptic_K(x) * legendre_P(m, 2 * x - 1), 0.0, 1.0, 1e-14).value
        assert (2 * m + 1) * q == pytest.approx(2 / 9, abs=1e-9)

    def test_partial_sum(self):
        assert fl_partial_sum(k_series(), 0.3, 2000) == pytest.approx(elliptic_K(0.3), abs=2e-4)


class TestDougall:
    def test_integer_delta(self):
        for n in range(4):
            for m in range(8):
                assert dougall_coefficient(float(n), m) == pytest.approx(1.0 if m == n else 0.0, abs=1e-15)

    def test_half(self):
        for m in range(10):
            ref = 2 * (-1) ** m / (math.pi * (m + 0.5))
            assert dougall_coefficient(-0.5, m) == pytest.approx(ref, rel=1e-14)

    def test_reproduces_K(self):
        # classical orientation rebuilds (2/pi) K(x); the printed one rebuilds (2/pi) K(1 - x)
        x = 0.2
        classical = fl_partial_sum(dougall_series(-0.5), x, 4000)
        printed = fl_partial_sum(dougall_series(-0.5, Orientation.PRINTED), x, 4000)
        assert classical == pytest.approx(2 / math.pi * elliptic_K(x), abs=5e-3)
        assert printed == pytest.approx(2 / math.pi * elliptic_K_complement(x), abs=5e-3)
        assert abs(printed - classical) > 0.3

    @pytest.mark.parametrize("nu", [0.25, 0.5, -0.3])
    def test_centre_value(self, nu):
        s = dougall_series(nu)
        # P_2k(0) = (-1)^k c_k alternates, so average neighbouring partial sums
        terms = [s.coefficient(2 * k) * (-1) ** k * c(k) for k in range(200000)]
        partial = math.fsum(terms[:-1])
        avg = partial + 0.5 * terms[-1]
        assert avg == pytest.approx(gauss_second(nu), abs=1e-8)


class TestMoments:
    def test_beta_examples(self):
        assert beta_moment_legendre(1.0, 0) == pytest.approx(1.0, rel=1e-15)
        assert beta_moment_legendre(1.0, 3) == 0.0
        q = tanh_sinh(lambda x: x ** 1.7 * legendre_P(3, 2 * x - 1), 0.0, 1.0, 1e-14).value
        assert beta_moment_legendre(2.7, 3) == pytest.approx(q, rel=1e-12)

    def test_moment1(self):
        assert moment_series_1(0) == pytest.approx(PI3_8, rel=1e-15)
        assert moment_series_1(1) == pytest.approx(PI3_8 / 2, rel=1e-15)
        assert moment_series_1(3) == pytest.approx(1.0295052804005799668, rel=1e-13)

    def test_moment2(self):
        assert moment_series_2(1) == pytest.approx(moment_series_1(0), rel=1e-13)
        assert moment_series_2(4) == pytest.approx(0.025208330984073254299, rel=1e-13)
        for n in (2, 3):
            q = tanh_sinh(
                lambda x: (x * (1 - x)) ** (n - 1) * elliptic_K(x) * elliptic_K_complement(x), 0.0, 1.0, 1e-14
            ).value
            assert moment_series_2(n) == pytest.approx(q, rel=1e-9)

    def test_domains(self):
        with pytest.raises(DomainError):
            moment_series_1(-1)
        with pytest.raises(DomainError):
            moment_series_2(0)
        with pytest.raises(DomainError):
            beta_moment_legendre(0.0, 1)


class TestRows:
    def test_families(self):
        rows = coefficient_rows("cg", 0.3, 3)
        assert [r[:2] for r in rows] == [(0, 0), (1, 2), (2, 4), (3, 6)]
        assert rows[2][2] == cg_coefficient(0.3, 2)
        assert coefficient_rows("k", None, 1) == [(0, 0, 2.0), (1, 1, 2 / 3)]
        assert coefficient_rows("dougall", 1.0, 2)[1][2] == pytest.approx(1.0, abs=1e-15)

    def test_errors(self):
        with pytest.raises(DomainError):
            coefficient_rows("cg", None, 3)
        with pytest.raises(DomainError):
            coefficient_rows("zeta", 0.3, 3)
        with pytest.raises(DomainError):
            coefficient_rows("k", None, -1)
