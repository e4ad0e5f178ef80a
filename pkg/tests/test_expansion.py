import math
from itertools import product

import numpy as np
import pytest

from wickops.core import MultiIndex, UsageError
from wickops.symbols import WickSymbol, antiwick_matrix, wick_matrix
from wickops.expansion import (
    decompose,
    decomposition_matrix,
    diagonal_derivative_symbol,
    remainder_symbol,
    verify_decomposition,
)


class TestDiagonalDerivativeSymbol:
    def test_order_zero_is_diagonal_restriction(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        a0 = diagonal_derivative_symbol(a, (0,))
        assert a0.point_symbol
        assert a0.terms == {((1,), (1,)): 1.0}  # |w|^2

    def test_first_order_kills_bilinear_term(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        a1 = diagonal_derivative_symbol(a, (1,))
        assert a1.terms == {((0,), (0,)): 1.0}

    def test_second_degree_symbol(self):
        a = WickSymbol(1, {((2,), (2,)): 1.0})
        a1 = diagonal_derivative_symbol(a, (1,))
        assert a1.terms == {((1,), (1,)): pytest.approx(4.0)}  # 4|w|^2

    def test_two_dimensional(self):
        a = WickSymbol(2, {((1, 1), (1, 1)): 1.0})
        a11 = diagonal_derivative_symbol(a, (1, 1))
        assert a11.terms == {((0, 0), (0, 0)): pytest.approx(1.0)}


class TestRemainderSymbol:
    def test_order_zero_rejected(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        with pytest.raises(UsageError):
            remainder_symbol(a, (0,))

    def test_bilinear_term_gives_constant(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        b = remainder_symbol(a, (1,))
        assert b.terms == {((0,), (0,)): pytest.approx(1.0)}

    def test_zsquared_conjw_normal_orders_to_2z(self):
        # derivative 2(w + t(z-w)); the t-integral gives z + w in the first
        # slot, and the holomorphic w normal-orders to another z
        a = WickSymbol(1, {((2,), (1,)): 1.0})
        b = remainder_symbol(a, (1,))
        assert b.terms == {((1,), (0,)): pytest.approx(2.0)}

    def test_beta_weights_at_order_two(self):
        # weight 2 int (1-t) t^k dt = 2/((k+1)(k+2))
        from wickops.expansion import _beta_weight

        for k in range(5):
            assert _beta_weight(k, 2) == pytest.approx(2.0 / ((k + 1) * (k + 2)))


class TestDecompose:
    def test_bilinear_symbol_order_one(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        decomp = decompose(a, 1)
        by_alpha = {tuple(t.alpha): t for t in decomp.main_terms}
        assert by_alpha[(0,)].symbol.terms == {((1,), (1,)): 1.0}
        assert by_alpha[(0,)].sign == 1
        assert by_alpha[(1,)].symbol.terms == {((0,), (0,)): pytest.approx(1.0)}
        assert by_alpha[(1,)].sign == -1
        assert all(not t.symbol.terms for t in decomp.remainder_terms)

    def test_constant_symbol(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        decomp = decompose(a, 1)
        by_alpha = {tuple(t.alpha): t for t in decomp.main_terms}
        assert by_alpha[(0,)].symbol.terms == {((0,), (0,)): 1.0}
        assert not by_alpha[(1,)].symbol.terms
        assert all(not t.symbol.terms for t in decomp.remainder_terms)

    def test_degree_two_symbol_order_two(self):
        a = WickSymbol(1, {((2,), (2,)): 1.0})
        decomp = decompose(a, 2)
        by_alpha = {tuple(t.alpha): t for t in decomp.main_terms}
        assert by_alpha[(0,)].symbol.terms == {((2,), (2,)): 1.0}          # |w|^4
        assert by_alpha[(1,)].symbol.terms == {((1,), (1,)): pytest.approx(4.0)}
        assert by_alpha[(2,)].symbol.terms == {((0,), (0,)): pytest.approx(4.0)}
        assert by_alpha[(2,)].alpha_factorial == 2
        assert all(not t.symbol.terms for t in decomp.remainder_terms)
        assert verify_decomposition(a, 2, 8) <= 1e-10

    def test_order_zero_extension_flagged(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        decomp = decompose(a, 0)
        assert decomp.order_zero_extension
        assert len(decomp.remainder_terms) == 1


class TestVerifyDecomposition:
    def test_bilinear_symbol_exact(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        assert verify_decomposition(a, 1, 8) <= 1e-12

    def test_constant_symbol_exact(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        for order in [1, 2, 3]:
            assert verify_decomposition(a, order, 6) == 0.0

    def test_remainder_active_regime(self):
        a = WickSymbol(1, {((2,), (2,)): 1.0})
        assert verify_decomposition(a, 1, 8) <= 1e-10

    @pytest.mark.parametrize("d", [1, 2])
    def test_monomials_remainder_free(self, d):
        # exactness for all monomial symbols with degrees <= 3 at N >= min degree
        for p_deg, q_deg in product(range(4), range(4)):
            for p in _monomials(d, p_deg):
                for q in _monomials(d, q_deg):
                    a = WickSymbol(d, {(p, q): 1.0})
                    order = min(p_deg, q_deg)
                    if order == 0:
                        order = 1  # the decomposition needs order >= 1
                    decomp = decompose(a, order)
                    assert all(not t.symbol.terms for t in decomp.remainder_terms)
                    trunc = 5 if d == 2 else 8
                    assert verify_decomposition(a, order, trunc) <= 1e-10

    def test_remainder_necessity(self):
        # dropping an active remainder breaks the identity; keeping it restores it
        a = WickSymbol(1, {((2,), (2,)): 1.0})
        decomp = decompose(a, 1)
        assert any(t.symbol.terms for t in decomp.remainder_terms)
        lhs = wick_matrix(a, 8)
        rhs_full = decomposition_matrix(decomp, 8)
        rhs_dropped = decomposition_matrix(decomp, 8, include_remainder=False)
        n_out = max(lhs.codomain_degree, rhs_full.codomain_degree,
                    rhs_dropped.codomain_degree)
        full_dev = np.max(np.abs(lhs.embedded(n_out).entries
                                 - rhs_full.embedded(n_out).entries))
        dropped_dev = np.max(np.abs(lhs.embedded(n_out).entries
                                    - rhs_dropped.embedded(n_out).entries))
        assert full_dev <= 1e-10
        assert dropped_dev > 0.5

    def test_telescoping_consistency(self):
        # moving the |alpha| = N+1 layer between remainder and main sets is
        # entry-exact at matrix level
        rng = np.random.default_rng(19)
        terms = {((p,), (q,)): complex(*rng.standard_normal(2))
                 for p in range(3) for q in range(3)}
        a = WickSymbol(1, terms)
        for order in [1, 2]:
            m_low = decomposition_matrix(decompose(a, order), 8)
            m_high = decomposition_matrix(decompose(a, order + 1), 8)
            n_out = max(m_low.codomain_degree, m_high.codomain_degree)
            dev = np.max(np.abs(m_low.embedded(n_out).entries
                                - m_high.embedded(n_out).entries))
            assert dev <= 1e-10


def _monomials(d, degree):
    from wickops.core import enumerate_basis

    return [a for a in enumerate_basis(d, degree) if a.degree() == degree]


class TestMixedSymbolPipeline:
    def test_random_symbol_full_pipeline(self):
        rng = np.random.default_rng(43)
        terms = {((p,), (q,)): complex(*rng.standard_normal(2))
                 for p in range(3) for q in range(3)}
        a = WickSymbol(1, terms)
        for order in [1, 2, 3]:
            assert verify_decomposition(a, order, 8) <= 1e-9

    def test_two_dimensional_cross_terms(self):
        a = WickSymbol(2, {((1, 1), (1, 0)): 1.0, ((0, 1), (1, 1)): 0.5j})
        assert verify_decomposition(a, 2, 5) <= 1e-10
