import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fllab.errors import ConvergenceError, DomainError, SignPatternError
from fllab.numerics import central_binomial as c
from fllab.series_accel import (
    Method,
    SignPattern,
    TermGenerator,
    cvz_sum,
    raw_oracle_sum,
    raw_partial_sums,
    sum_alternating_accel,
    sum_direct,
)

LEIBNIZ = TermGenerator(lambda k: (-1.0) ** k / (2 * k + 1))
COR4_SUM = 0.88694116857811540541  # Gamma(1/4)^4 / (2 pi^4)


class TestAlternating:
    def test_log2(self):
        r = sum_alternating_accel(TermGenerator(lambda k: (-1.0) ** k / (k + 1)), 20)
        assert r.value == pytest.approx(math.log(2.0), abs=1e-12)
        assert r.method is Method.ALTERNATING_ACCEL and r.converged

    def test_leibniz(self):
        assert sum_alternating_accel(LEIBNIZ).value == pytest.approx(math.pi / 4, abs=1e-12)

    def test_cor4_series(self):
        r = sum_alternating_accel(TermGenerator(lambda m: (-1.0) ** m * c(m) ** 5 * (4 * m + 1)))
        assert r.value == pytest.approx(COR4_SUM, rel=1e-13)
        assert r.terms_used <= 200

    def test_head_terms(self):
        # two leading positive terms, alternating afterwards
        def term(k):
            return 1.0 if k < 2 else (-1.0) ** k / (k + 1)

        r = sum_alternating_accel(TermGenerator(term), head=2)
        ref = 2.0 + (math.log(2.0) - 1.0 + 0.5)
        assert r.value == pytest.approx(ref, abs=1e-13)

    def test_rejects_positive(self):
        with pytest.raises(SignPatternError):
            sum_alternating_accel(TermGenerator(lambda k: 1.0 / (k + 1) ** 2, SignPattern.POSITIVE))
        with pytest.raises(SignPatternError):
            # declared alternating but is not
            sum_alternating_accel(TermGenerator(lambda k: 1.0 / (k + 1) ** 2))

    @given(st.lists(st.floats(1e-3, 10.0), min_size=2, max_size=20))
    def test_sign_check_catches_repeats(self, mags):
        # a run of same-signed terms anywhere in the first 32 must be refused
        terms = [m if k % 2 == 0 else -m for k, m in enumerate(mags)]
        terms[1] = -terms[1]

        def term(k):
            return terms[k] if k < len(terms) else (-1.0) ** k / (k + 1)

        with pytest.raises(SignPatternError):
            sum_alternating_accel(TermGenerator(term))

    def test_order_too_small(self):
        with pytest.raises(DomainError):
            sum_alternating_accel(LEIBNIZ, 2)

    def test_nonconvergence(self):
        # oscillation that never settles
        with pytest.raises(ConvergenceError) as exc:
            sum_alternating_accel(TermGenerator(lambda k: (-1.0) ** k * (1.0 + 0.5 * math.sin(k))), max_order=64)
        assert exc.value.partial is not None and not exc.value.partial.converged

    def test_reproducible(self):
        g = TermGenerator(lambda m: (-1.0) ** m * c(m) ** 3 * (4 * m + 1) / (m + 0.5))
        assert sum_alternating_accel(g).value == sum_alternating_accel(g).value

    def test_cvz_direct(self):
        assert cvz_sum([]) == 0.0
        v = cvz_sum([(-1.0) ** k / (k + 1) for k in range(30)])
        assert v == pytest.approx(math.log(2.0), abs=1e-15)


class TestDirect:
    def test_geometric(self):
        r = sum_direct(TermGenerator(lambda k: 0.5**k, SignPattern.POSITIVE), tol=1e-12)
        assert r.value == pytest.approx(2.0, abs=1e-11)
        assert r.terms_used <= 45
        assert r.tail_estimate <= 1e-12 * max(1.0, abs(r.value))

    def test_cor_diff_series(self):
        def term(m):
            return c(m) * (-1.0) ** m * (1.0 / (4 * m - 1) ** 2 - 1.0 / (4 * m + 3) ** 2)

        r = sum_direct(TermGenerator(term), tol=1e-12, max_terms=10**4)
        assert r.converged and r.terms_used <= 10**4
        assert r.value == pytest.approx(0.84721308479397908661, rel=1e-11)

    def test_cor1_truncated(self):
        def term(m):
            return c(m) ** 3 * (-1.0) ** (m + 1) * (4 * m + 1) ** 2 / ((4 * m - 1) * (4 * m + 3))

        accel = sum_alternating_accel(TermGenerator(term), head=1).value
        with pytest.raises(ConvergenceError) as exc:
            sum_direct(TermGenerator(term), tol=1e-16, max_terms=10**5)
        assert abs(exc.value.partial.value - accel) < 3e-7

    def test_nan_rejected(self):
        with pytest.raises(ConvergenceError):
            sum_direct(TermGenerator(lambda k: math.nan))


class TestRaw:
    def test_constant(self):
        assert raw_partial_sums(TermGenerator(lambda k: 1.0, SignPattern.POSITIVE), 5) == [1, 2, 3, 4, 5]

    def test_leibniz_partial(self):
        s = raw_partial_sums(LEIBNIZ, 10**4)
        assert s[9] == pytest.approx(0.7604599047323506, abs=1e-15)  # exact rational sum
        for n in range(1, 10**4):
            assert abs(math.pi / 4 - s[n - 1]) <= abs(LEIBNIZ(n))

    def test_bad_n(self):
        with pytest.raises(DomainError):
            raw_partial_sums(LEIBNIZ, 0)

    @pytest.mark.parametrize(
        "term,head",
        [
            (lambda m: (-1.0) ** m * c(m) ** 5 * (4 * m + 1), 0),
            (lambda m: c(m) ** 3 * (-1.0) ** (m + 1) * (4 * m + 1) ** 2 / ((4 * m - 1) * (4 * m + 3)), 1),
            (lambda m: c(m) * (-1.0) ** m * (1.0 / (4 * m - 1) ** 2 - 1.0 / (4 * m + 3) ** 2), 0),
        ],
    )
    def test_oracle_agreement(self, term, head):
        g = TermGenerator(term)
        acc = sum_alternating_accel(g, head=head)
        raw = raw_oracle_sum(g, 2000)
        assert raw.method is Method.RAW_ORACLE
        assert abs(acc.value - raw.value) <= 10 * max(acc.tail_estimate, raw.tail_estimate, 1e-15)
