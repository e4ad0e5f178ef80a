import math

import numpy as np
import pytest

from wickops.core import FOCK, CoefficientExpansion, NumericalError, UsageError, enumerate_basis
from wickops.symbols import (
    KOHN_NIRENBERG,
    WEYL,
    OperatorMatrix,
    RealSymbol,
    ShubinWeight,
    WickSymbol,
    antiwick_matrix,
    japanese_bracket,
    kn_matrix,
    matrix_apply_at_point,
    pair_grid,
    real_to_wick_symbol,
    shubin_estimate_check,
    symbol_bound_check,
    weyl_matrix,
    wick_apply_quadrature,
    wick_kernel,
    wick_matrix,
)


def fock_basis_vector(n):
    return CoefficientExpansion(1, FOCK, {(n,): 1.0})


class TestWickMatrix:
    def test_constant_symbol_is_identity(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        M = wick_matrix(a, 6)
        assert np.allclose(M.entries, np.eye(7))

    def test_number_symbol_is_diagonal(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        M = wick_matrix(a, 8)
        want = np.zeros((10, 9))
        want[:9, :9] = np.diag(np.arange(9.0))
        assert np.allclose(M.entries, want)

    def test_conjw_symbol_is_subdiagonal(self):
        a = WickSymbol(1, {((0,), (1,)): 1.0})
        M = wick_matrix(a, 5)
        for g in range(1, 6):
            out = M.apply(fock_basis_vector(g))
            assert out.coeffs == {(g - 1,): pytest.approx(math.sqrt(g))}
        assert M.apply(fock_basis_vector(0)).coeffs == {}

    def test_point_symbol_rejected(self):
        a0 = WickSymbol(1, {((1,), (0,)): 1.0}, point_symbol=True)
        with pytest.raises(UsageError):
            wick_matrix(a0, 4)

    @pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (0, 2), (2, 1), (3, 3), (1, 4)])
    def test_agrees_with_defining_integral(self, p, q):
        # quadrature of the defining integral as independent oracle
        a = WickSymbol(1, {((p,), (q,)): 1.0})
        M = wick_matrix(a, 8)
        for g in [0, 4, 8]:
            F = fock_basis_vector(g)
            for z in [0.4 + 0.3j, -0.7 - 0.2j]:
                direct = wick_apply_quadrature(a, F, z)
                closed = matrix_apply_at_point(M, F, z)
                assert abs(direct - closed) < 1e-8

    def test_random_polynomial_symbol_vs_quadrature(self):
        rng = np.random.default_rng(13)
        terms = {((p,), (q,)): complex(*rng.standard_normal(2))
                 for p in range(3) for q in range(3)}
        a = WickSymbol(1, terms)
        M = wick_matrix(a, 12)
        for g in [0, 5, 12]:
            F = fock_basis_vector(g)
            for z in [0.9 + 0.1j, -0.3 + 0.8j]:
                assert abs(wick_apply_quadrature(a, F, z)
                           - matrix_apply_at_point(M, F, z)) < 1e-8

    def test_commutator_sanity(self):
        # Op(z) o Op(conj w) - Op(conj w) o Op(z) = identity on the interior block
        z_sym = WickSymbol(1, {((1,), (0,)): 1.0})
        w_sym = WickSymbol(1, {((0,), (1,)): 1.0})
        n = 8
        # Op(z) o Op(wbar): differentiate on degrees <= n+1, then multiply
        mw_first = wick_matrix(w_sym, n + 1).entries            # (n+2, n+2)
        mz_after = wick_matrix(z_sym, n + 1).entries            # (n+3, n+2)
        prod_zw = mz_after @ mw_first
        mz_first = wick_matrix(z_sym, n + 1).entries            # (n+3, n+2)
        mw_after = wick_matrix(w_sym, n + 2).entries            # (n+3, n+3)
        prod_wz = mw_after @ mz_first
        n_in = len(enumerate_basis(1, n))
        comm = (prod_wz - prod_zw)[:n_in, :n_in]
        assert np.allclose(comm, np.eye(n_in), atol=1e-12)


class TestAntiwickMatrix:
    def test_constant_is_identity(self):
        a0 = WickSymbol(1, {((0,), (0,)): 1.0}, point_symbol=True)
        assert np.allclose(antiwick_matrix(a0, 6).entries, np.eye(7))

    def test_modulus_squared_shifted_diagonal(self):
        a0 = WickSymbol(1, {((1,), (1,)): 1.0}, point_symbol=True)
        M = antiwick_matrix(a0, 8)
        assert np.allclose(M.entries[:9, :9], np.diag(np.arange(1.0, 10.0)))

    def test_modulus_fourth(self):
        a0 = WickSymbol(1, {((2,), (2,)): 1.0}, point_symbol=True)
        M = antiwick_matrix(a0, 8)
        want = np.diag([(g + 1) * (g + 2) for g in range(9)]).astype(float)
        assert np.allclose(M.entries[:9, :9], want)

    def test_z_dependent_input_rejected(self):
        a = WickSymbol(1, {((1,), (0,)): 1.0})
        with pytest.raises(UsageError, match="wick_matrix"):
            antiwick_matrix(a, 4)

    def test_z_independent_wick_symbol_accepted(self):
        a = WickSymbol(1, {((0,), (1,)): 1.0})
        M = antiwick_matrix(a, 5)
        # a0 = conj(w): anti-Wick operator is d/dz, same as the Wick case here
        for g in range(1, 6):
            out = M.apply(fock_basis_vector(g))
            assert out.coeffs == {(g - 1,): pytest.approx(math.sqrt(g))}

    @pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (2, 2), (1, 2)])
    def test_agrees_with_defining_integral(self, p, q):
        a0 = WickSymbol(1, {((p,), (q,)): 1.0}, point_symbol=True)
        M = antiwick_matrix(a0, 6)
        for g in [0, 3, 6]:
            F = fock_basis_vector(g)
            for z in [0.5 - 0.4j, -0.2 + 0.9j]:
                assert abs(wick_apply_quadrature(a0, F, z)
                           - matrix_apply_at_point(M, F, z)) < 1e-8

    def test_positivity_for_squared_modulus_sums(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            terms = {}
            for sigma in [(0,), (1,), (2,), (3,)]:
                lam = rng.uniform(0, 2)
                terms[(sigma, sigma)] = terms.get((sigma, sigma), 0.0) + lam
            a0 = WickSymbol(1, terms, point_symbol=True)
            M = antiwick_matrix(a0, 10).compressed().entries
            assert np.allclose(M, M.conj().T)
            assert np.min(np.linalg.eigvalsh(M)) >= -1e-10


class TestKnMatrix:
    def test_position_symbol_tridiagonal(self):
        b = RealSymbol(1, KOHN_NIRENBERG, {((1,), (0,)): 1.0})
        M = kn_matrix(b, 6)
        for n in range(7):
            col = M.apply(CoefficientExpansion(1, "hermite", {(n,): 1.0})).coeffs
            assert col.get((n + 1,), 0.0) == pytest.approx(math.sqrt((n + 1) / 2))
            if n > 0:
                assert col.get((n - 1,), 0.0) == pytest.approx(math.sqrt(n / 2))

    def test_position_matches_quadrature(self):
        # oracle: integral x h_n h_m dx by Gauss-Hermite with the weight folded
        from wickops.core import gauss_hermite
        from wickops.hermite import hermite_values_1d

        b = RealSymbol(1, KOHN_NIRENBERG, {((1,), (0,)): 1.0})
        M = kn_matrix(b, 5).entries
        rule = gauss_hermite(30)
        table = hermite_values_1d(6, rule.nodes)
        fold = rule.weights * np.exp(rule.nodes**2)
        for n in range(6):
            for m in range(7):
                want = float(np.sum(fold * rule.nodes * table[n] * table[m]))
                assert M[m, n].real == pytest.approx(want, abs=1e-10)
                assert M[m, n].imag == 0

    def test_momentum_matches_quadrature(self):
        # oracle: integral (-i h_n') h_m dx via the exact derivative expansion
        from wickops.core import gauss_hermite
        from wickops.hermite import hermite_values_1d

        b = RealSymbol(1, KOHN_NIRENBERG, {((0,), (1,)): 1.0})
        M = kn_matrix(b, 5).entries
        rule = gauss_hermite(30)
        table = hermite_values_1d(7, rule.nodes)
        fold = rule.weights * np.exp(rule.nodes**2)

        def deriv(n):
            out = -math.sqrt((n + 1) / 2) * table[n + 1]
            if n > 0:
                out = out + math.sqrt(n / 2) * table[n - 1]
            return out

        for n in range(6):
            for m in range(7):
                want = complex(np.sum(fold * (-1j) * deriv(n) * table[m]))
                assert M[m, n] == pytest.approx(want, abs=1e-10)

    def test_constant_is_identity(self):
        b = RealSymbol(1, KOHN_NIRENBERG, {((0,), (0,)): 1.0})
        assert np.allclose(kn_matrix(b, 5).entries, np.eye(6))

    def test_wrong_tag_rejected(self):
        b = RealSymbol(1, WEYL, {((1,), (0,)): 1.0})
        with pytest.raises(UsageError):
            kn_matrix(b, 4)


class TestWeylMatrix:
    def test_harmonic_oscillator_diagonal(self):
        b = RealSymbol(1, WEYL, {((2,), (0,)): 1.0, ((0,), (2,)): 1.0})
        M = weyl_matrix(b, 8)
        square = M.entries[:9, :9]
        assert np.allclose(square, np.diag(2.0 * np.arange(9) + 1.0), atol=1e-12)

    def test_xxi_is_symmetrized_product(self):
        b = RealSymbol(1, WEYL, {((1,), (1,)): 1.0})
        M = weyl_matrix(b, 6)
        # oracle: (xD + Dx)/2 assembled from the KN single-factor matrices
        bx = RealSymbol(1, KOHN_NIRENBERG, {((1,), (0,)): 1.0})
        bxi = RealSymbol(1, KOHN_NIRENBERG, {((0,), (1,)): 1.0})
        xd = kn_matrix(bx, 7).entries @ kn_matrix(bxi, 6).entries   # (9, 7)
        dx = kn_matrix(bxi, 7).entries @ kn_matrix(bx, 6).entries   # (9, 7)
        want = 0.5 * (xd + dx)
        assert np.allclose(M.entries, want, atol=1e-12)

    def test_hermitian_for_real_symbol(self):
        b = RealSymbol(1, WEYL, {((1,), (1,)): 1.0, ((2,), (0,)): 0.5,
                                 ((0,), (1,)): -1.0})
        square = weyl_matrix(b, 8).entries[:9, :9]
        assert np.allclose(square, square.conj().T, atol=1e-12)

    def test_single_factor_equals_kn(self):
        bw = RealSymbol(1, WEYL, {((1,), (0,)): 1.0})
        bk = RealSymbol(1, KOHN_NIRENBERG, {((1,), (0,)): 1.0})
        assert np.allclose(weyl_matrix(bw, 5).entries, kn_matrix(bk, 5).entries)


class TestRealToWickSymbol:
    def test_position_symbol(self):
        b = RealSymbol(1, KOHN_NIRENBERG, {((1,), (0,)): 1.0})
        a = real_to_wick_symbol(b)
        s = 1 / math.sqrt(2)
        assert a.terms[((1,), (0,))] == pytest.approx(s)
        assert a.terms[((0,), (1,))] == pytest.approx(s)

    def test_momentum_symbol(self):
        b = RealSymbol(1, KOHN_NIRENBERG, {((0,), (1,)): 1.0})
        a = real_to_wick_symbol(b)
        s = 1 / math.sqrt(2)
        assert a.terms[((1,), (0,))] == pytest.approx(1j * s)
        assert a.terms[((0,), (1,))] == pytest.approx(-1j * s)

    def test_harmonic_oscillator(self):
        b = RealSymbol(1, WEYL, {((2,), (0,)): 1.0, ((0,), (2,)): 1.0})
        a = real_to_wick_symbol(b)
        assert a.terms[((1,), (1,))] == pytest.approx(2.0)
        assert a.terms[((0,), (0,))] == pytest.approx(1.0)
        M = wick_matrix(a, 8)
        assert np.allclose(M.entries[:9, :9], np.diag(2.0 * np.arange(9) + 1.0),
                           atol=1e-12)

    @pytest.mark.parametrize("quant", [KOHN_NIRENBERG, WEYL])
    @pytest.mark.parametrize("d", [1, 2])
    def test_correspondence_degree_three(self, quant, d):
        # every monomial of total degree <= 3: the Wick route reproduces the
        # quantization matrix entry-exactly
        from wickops.symbols import enumerate_symbol_keys, quantization_matrix

        for alpha, beta in enumerate_symbol_keys(d, 3):
            b = RealSymbol(d, quant, {(alpha, beta): 1.0})
            a = real_to_wick_symbol(b)
            n = 4
            target = quantization_matrix(b, n)
            got = wick_matrix(a, n).embedded(target.codomain_degree)
            assert np.max(np.abs(got.entries - target.entries)) <= 1e-12


class TestWickKernel:
    def test_constant_at_origin(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        assert wick_kernel(a, [0.0], [0.0]) == pytest.approx(1.0)

    def test_sesquilinear_pairing_in_exponent(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        assert wick_kernel(a, [1.0], [1j]) == pytest.approx(np.exp(-1j))

    def test_monomial_factor(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        assert wick_kernel(a, [1.0], [1.0]) == pytest.approx(math.e)


class TestSymbolBoundCheck:
    def test_constant_gain_grows_with_radius(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        small = symbol_bound_check(a, 1.0, 1.0, "gain", pair_grid(1, radius=2, points_per_axis=5))
        large = symbol_bound_check(a, 1.0, 1.0, "gain", pair_grid(1, radius=4, points_per_axis=5))
        assert large.sup > small.sup > 1.0

    def test_constant_loss_bounded_by_one(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        report = symbol_bound_check(a, 1.0, 1.0, "loss", pair_grid(1, radius=4, points_per_axis=5))
        assert report.sup == pytest.approx(1.0)
        z, w = report.argmax
        assert abs(z[0]) == pytest.approx(0.0) and abs(w[0]) == pytest.approx(0.0)

    def test_number_symbol_loss_finite(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0})
        report = symbol_bound_check(a, 0.5, 1.0, "loss", pair_grid(1, radius=4, points_per_axis=7))
        assert np.isfinite(report.sup)
        # the polynomial loses to e^{-r(|z|^2+|w|^2)} well inside the grid
        assert report.sup < 10.0

    def test_empty_grid_rejected(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        with pytest.raises(UsageError):
            symbol_bound_check(a, 1.0, 1.0, "loss", [])


class TestShubinEstimateCheck:
    def test_constant_symbol_bounded(self):
        a = WickSymbol(1, {((0,), (0,)): 1.0})
        weight = ShubinWeight(t=2.0, rho=1.0)
        report = shubin_estimate_check(a, weight, 0, 0, pair_grid(1, radius=4, points_per_axis=5))
        assert report.sup <= 1.0 / weight.omega_complex([0.0]) + 1e-12

    def test_oscillator_symbol_order_zero(self):
        a = WickSymbol(1, {((1,), (1,)): 2.0, ((0,), (0,)): 1.0})
        weight = ShubinWeight(t=2.0, rho=1.0)
        report = shubin_estimate_check(a, weight, 0, 0, pair_grid(1, radius=4, points_per_axis=7))
        assert np.isfinite(report.sup)
        assert report.sup < 50.0

    def test_exact_derivative_order_one_one(self):
        a = WickSymbol(1, {((1,), (1,)): 2.0, ((0,), (0,)): 1.0})
        deriv = a.derivative((1,), (1,))
        assert deriv.terms == {((0,), (0,)): 2.0}
        weight = ShubinWeight(t=2.0, rho=1.0)
        report = shubin_estimate_check(a, weight, 2, 1, pair_grid(1, radius=4, points_per_axis=5))
        entries = {(tuple(e["alpha"]), tuple(e["beta"]), e["N"]): e["sup"]
                   for e in report.details}
        assert np.isfinite(entries[((1,), (1,), 0)])

    def test_japanese_bracket(self):
        assert japanese_bracket([0.0]) == pytest.approx(1.0)
        assert japanese_bracket([3.0 + 4.0j]) == pytest.approx(math.sqrt(26.0))


class TestOperatorMatrixContainer:
    def test_embed_and_compress(self):
        a = WickSymbol(1, {((2,), (0,)): 1.0})
        M = wick_matrix(a, 3)
        E = M.embedded(7)
        assert E.entries.shape == (8, 4)
        assert np.allclose(E.entries[:6, :], M.entries)
        C = M.compressed()
        assert C.entries.shape == (4, 4)
        assert C.compressed_from == 5

    def test_json_round_trip(self):
        a = WickSymbol(1, {((1,), (1,)): 1.0 + 0.5j})
        M = wick_matrix(a, 4)
        M2 = OperatorMatrix.from_json_dict(M.to_json_dict())
        assert np.allclose(M.entries, M2.entries)
        assert M2.basis_side == FOCK

    def test_symbol_json_round_trip(self):
        a = WickSymbol(2, {((1, 0), (0, 1)): 1j}, point_symbol=True)
        a2 = WickSymbol.from_json_dict(a.to_json_dict())
        assert a2.point_symbol and a2.terms == a.terms
        b = RealSymbol(1, WEYL, {((1,), (1,)): -2.0})
        b2 = RealSymbol.from_json_dict(b.to_json_dict())
        assert b2.quantization == WEYL and b2.terms == b.terms
