import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complexes, polys
from qapolar.apolarity import (
    bracket,
    fischer_ip,
    fischer_norm,
    is_apolar,
    sym_eval,
    symmetrize,
)
from qapolar.errors import AmbientExceeded, DimensionMismatch
from qapolar.polycore import Polynomial, binom_row, check, derivative, elem_sym_all, sharp


def P(*c, ambient=None):
    return Polynomial(c, ambient)


def close(a, b, rtol):
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@st.composite
def pairs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    f = draw(polys(ambient=n))
    g = draw(polys(ambient=n))
    return n, f, g


class TestFischer:
    def test_monomials(self):
        assert fischer_ip(P(0, 1), P(0, 1), 2) == pytest.approx(0.5)
        assert fischer_ip(P(1, 1), P(1, 1), 1) == pytest.approx(2)
        assert fischer_ip(P(1), P(0, 1), 3) == 0

    def test_reproducing_kernel(self):
        f = P(0, 0, 1)
        lam = 2.0
        kernel = P(1, np.conj(lam)) * P(1, np.conj(lam))
        assert fischer_ip(f, kernel, 2) == pytest.approx(4.0)

    def test_ambient_exceeded(self):
        with pytest.raises(AmbientExceeded):
            fischer_ip(P(1, 1, 1), P(1), 1)

    def test_zero_padding_is_fine(self):
        assert fischer_ip(P(1, 0, 0, ambient=5), P(1), 1) == 1

    @given(pairs())
    def test_conjugate_symmetric(self, t):
        n, f, g = t
        assert close(fischer_ip(f, g, n), np.conj(fischer_ip(g, f, n)), 1e-12)

    @given(polys())
    def test_positive(self, f):
        if f.is_zero:
            return
        v = fischer_ip(f, f, f.ambient)
        assert v.real > 0 and abs(v.imag) <= 1e-12 * v.real

    @given(pairs(), complexes())
    def test_reproducing_property(self, t, lam):
        n, f, _ = t
        kernel = Polynomial([1.0], 0)
        for _ in range(n):
            kernel = kernel * P(1, np.conj(lam))
        assert close(fischer_ip(f, kernel, n), complex(f(lam)), 1e-10)

    @given(pairs())
    def test_shift_derivative(self, t):
        # <z g, f>_n = (1/n) <g, f'>_{n-1}
        n, f, g = t
        g = Polynomial(g.coeffs[:n], n - 1)
        zg = Polynomial(np.concatenate([[0], g.coeffs]), n)
        lhs = fischer_ip(zg, f, n)
        rhs = fischer_ip(g, derivative(f), n - 1) / n
        assert close(lhs, rhs, 1e-12)


class TestBracket:
    def test_examples(self):
        assert bracket(P(0, 1), P(1, 0), 1) == -1
        assert bracket(P(1, 0), P(0, 1), 1) == 1
        assert bracket(P(-1, 0, 1), P(1, 0, 1), 2) == 0
        assert bracket(P(1, 0), P(1, 0), 1) == 0

    def test_intro_formula_low_degree(self):
        n = 3
        f, g = P(1, 2, 3, 4), P(5, 6, 7, 8)
        expected = 1 * 8 - 2 * 7 / 3 + 3 * 6 / 3 - 4 * 5
        assert bracket(f, g, n) == pytest.approx(expected)

    @given(pairs())
    def test_sign_symmetry(self, t):
        n, f, g = t
        assert close(bracket(f, g, n), (-1) ** n * bracket(g, f, n), 1e-12)

    @given(pairs())
    def test_matches_inner_product(self, t):
        n, f, g = t
        assert close(bracket(f, g, n), fischer_ip(f, check(sharp(g)), n), 1e-12)

    @given(pairs())
    def test_reflected_symmetry(self, t):
        n, f, g = t
        lhs = fischer_ip(f, check(sharp(g)), n)
        rhs = (-1) ** n * fischer_ip(g, check(sharp(f)), n)
        assert close(lhs, rhs, 1e-12)

    @given(st.lists(complexes(), min_size=1, max_size=6), polys(max_n=6))
    def test_bracket_is_sym_at_roots(self, mus, f):
        n = len(mus)
        f = Polynomial(f.coeffs[: n + 1], n) if f.ambient >= n else f.with_ambient(n)
        g = Polynomial.from_roots(mus)
        assert close(bracket(f, g, n), sym_eval(f, n, mus), 1e-9)


class TestSymmetrize:
    def test_examples(self):
        s = symmetrize(P(0, 0, 1), 2)
        np.testing.assert_allclose(s.sigma_coeffs, [0, 0, 1])
        assert s([3, 5]) == 15
        s = symmetrize(P(0, 2), 2)
        assert s([3, 5]) == pytest.approx(8)

    def test_diagonal(self):
        f = P(1, -2j, 3, 0.5)
        s = symmetrize(f, 3)
        assert s.diagonal().allclose(f)
        z = 0.7 - 0.2j
        assert s([z, z, z]) == pytest.approx(complex(f(z)))

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            symmetrize(P(1, 1), 2)([1])
        with pytest.raises(DimensionMismatch):
            sym_eval(P(1, 1), 2, [1, 2, 3])

    def test_sym_eval_examples(self):
        assert sym_eval(P(0, 0, 1), 2, [3, 5]) == pytest.approx(15)
        assert sym_eval(P(1), 3, [1j, 2, -4]) == pytest.approx(1)

    @given(pairs(), st.lists(complexes(), min_size=6, max_size=6))
    def test_two_routes_agree(self, t, ys):
        n, f, _ = t
        y = ys[:n]
        direct = complex(np.dot(f.coeffs / binom_row(n), elem_sym_all(y)))
        assert close(sym_eval(f, n, y), direct, 1e-10)
        assert close(symmetrize(f, n)(y), direct, 1e-10)

    @given(pairs(), st.lists(complexes(), min_size=6, max_size=6))
    def test_multiaffine(self, t, ys):
        # affine in each variable: value at the midpoint is the average
        n, f, _ = t
        y = list(ys[:n])
        s = symmetrize(f, n)
        a, b = y[0], y[0] + 1.0
        lo, hi = s([a] + y[1:]), s([b] + y[1:])
        mid = s([(a + b) / 2] + y[1:])
        assert close(mid, (lo + hi) / 2, 1e-10)


class TestApolar:
    def test_examples(self):
        assert is_apolar(P(-1, 0, 1), P(1, 0, 1), 2)
        assert is_apolar(P(1), P(1), 1)
        assert not is_apolar(P(0, 1), P(1), 1)

    def test_scale_invariant(self):
        f, g = P(-1, 0, 1), P(1, 0, 1)
        assert is_apolar(f * 1e8, g * 1e-7, 2)

    def test_reflected_consistency(self):
        f = P(1, -2, 1)
        # [f, f^{#v}]_2 = <f, f>_2 since ^{#v} is an involution for even n
        assert bracket(f, check(sharp(f)), 2) == pytest.approx(fischer_norm(f) ** 2)
        assert not is_apolar(f, check(sharp(f)), 2)
