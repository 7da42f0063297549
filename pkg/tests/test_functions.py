import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kannappan.algebra import lcm_of_periods
from kannappan.equations import EquationId, residual
from kannappan.functions import (
    DegenerateMoment,
    DiscreteMeasure,
    Exponential,
    RootOfUnity,
    SigmaMismatch,
    enumerate_exponentials,
    fit_measure,
    integrate,
    is_exponential,
    kannappan_transform,
    match_exponential,
    sigma_pullback,
    solve_sine_addition_special,
    solve_special_ks_addition,
)
from kannappan.linalg import Inconsistent

from conftest import OMEGA, SQRT3, close, cyclic, idn, left_zero, trunc

CHI1 = np.array([OMEGA ** x for x in range(3)])


def oracle_exponentials(S):
    """All nonzero multiplicative maps into {0} | U_L, by exhaustive search."""
    L = lcm_of_periods(S)
    vals = [None] + [RootOfUnity(Fraction(j, L)) for j in range(L)]
    t = S.table
    mul = lambda a, b: None if a is None or b is None else a * b
    return sorted(
        (c for c in itertools.product(vals, repeat=S.n)
         if any(v is not None for v in c)
         and all(c[t[a][b]] == mul(c[a], c[b]) for a in range(S.n) for b in range(S.n))),
        key=lambda c: tuple((0, 0) if v is None else (1, v.turn) for v in c),
    )


class TestRootOfUnity:
    def test_normalizes_and_multiplies(self):
        a = RootOfUnity.of(2, 3)
        assert (a * a).turn == Fraction(1, 3)
        assert RootOfUnity.of(4, 4).turn == 0
        assert complex(RootOfUnity.of(1, 4)) == 1j
        assert abs(complex(RootOfUnity.of(1, 3)) - OMEGA) < 1e-15
        assert str(RootOfUnity.of(0, 1)) == "1" and str(RootOfUnity.of(1, 3)) == "e(1/3)"


class TestIntegrate:
    def test_examples(self, Z2, Z3):
        h = np.array([3, 4, 5j])
        assert integrate(DiscreteMeasure.point_mass(0), h) == 3
        assert integrate(DiscreteMeasure.point_mass(0, 2), np.ones(2)) == 2
        mu = DiscreteMeasure.from_weights([0, 1], [1, 1])
        assert abs(integrate(mu, CHI1) - (1 + OMEGA)) < 1e-15

    @given(st.integers(0, 2 ** 32 - 1))
    def test_linear(self, seed):
        rng = np.random.default_rng(seed)
        mu = DiscreteMeasure.from_weights(range(5), rng.normal(size=5) + 1j * rng.normal(size=5))
        h1, h2 = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
        a = complex(rng.normal(), rng.normal())
        assert abs(integrate(mu, a * h1 + h2) - (a * integrate(mu, h1) + integrate(mu, h2))) <= 1e-12

    def test_measure_validation(self):
        with pytest.raises(ValueError):
            DiscreteMeasure(())
        with pytest.raises(ValueError):
            DiscreteMeasure(((0, 1), (0, 2)))
        with pytest.raises(ValueError):
            kannappan_transform(cyclic(2), idn(2), DiscreteMeasure.point_mass(5), np.ones(2))


class TestTransform:
    def test_point_mass_at_identity(self, T4):
        f = np.array([1, 2j, 3, -4])
        K = kannappan_transform(T4, idn(4), DiscreteMeasure.point_mass(0), f)
        assert close(K, f[T4.array])

    def test_cyclic_negation(self, Z3, neg3, delta0):
        K = kannappan_transform(Z3, neg3, delta0, CHI1)
        expected = [[OMEGA ** (x - y) for y in range(3)] for x in range(3)]
        assert close(K, expected)

    def test_zero(self, Z3, neg3, delta0):
        assert not np.any(kannappan_transform(Z3, neg3, delta0, np.zeros(3)))


class TestPullback:
    def test_examples(self, neg3):
        f = np.array([0, 1j * SQRT3, -1j * SQRT3])
        assert close(sigma_pullback(f, idn(3)), f)
        assert close(sigma_pullback(f, neg3), [0, -1j * SQRT3, 1j * SQRT3])
        assert close(sigma_pullback(np.full(3, 2.5), neg3), np.full(3, 2.5))
        assert close(sigma_pullback(sigma_pullback(f, neg3), neg3), f)


class TestExponentials:
    def test_is_exponential(self, Z2, Z3):
        assert is_exponential(Z3, CHI1)
        assert not is_exponential(Z3, np.zeros(3))
        assert not is_exponential(Z2, [1, 2])

    def test_counts(self, Z3, T4):
        assert len(enumerate_exponentials(Z3)) == 3
        t4 = enumerate_exponentials(T4)
        assert [tuple(e.values) for e in t4] == [(1, 0, 0, 0), (1, 1, 1, 1)]
        lz = enumerate_exponentials(left_zero(2))
        assert len(lz) == 1 and close(lz[0].values, [1, 1])

    @pytest.mark.parametrize("S", [cyclic(1), cyclic(2), cyclic(3), cyclic(4), trunc(2), trunc(3), trunc(4),
                                   left_zero(2), left_zero(3)], ids=repr)
    def test_brute_force_oracle(self, S):
        assert [e.exact for e in enumerate_exponentials(S)] == oracle_exponentials(S)

    def test_exact_embedding_and_multiplicativity(self):
        S = cyclic(6)
        for e in enumerate_exponentials(S):
            assert all(e.exact[S.table[a][b]] == e.exact[a] * e.exact[b] for a in range(6) for b in range(6))
            assert np.max(np.abs(e.values[S.array] - np.outer(e.values, e.values))) <= 1e-15

    def test_match(self, Z3):
        assert match_exponential(Z3, CHI1 + 1e-13) == enumerate_exponentials(Z3)[1]
        assert match_exponential(Z3, [1, 1, 0]) is None

    def test_sigma_relation_is_exact(self, Z3, neg3):
        chi0, chi1, chi2 = enumerate_exponentials(Z3)
        assert chi0.is_sigma_invariant(neg3)
        assert not chi1.is_sigma_invariant(neg3)
        assert chi1.pullback(neg3) == chi2


class TestSpecialSineAddition:
    def test_trunc4(self, T4):
        chi = enumerate_exponentials(T4)[0]
        sol = solve_sine_addition_special(T4, chi)
        assert sol.dimension == 1 and close(sol.basis[0], [0, 1, 0, 0])

    def test_cyclic_trivial(self, Z3):
        sol = solve_sine_addition_special(Z3, enumerate_exponentials(Z3)[0])
        assert sol.dimension == 0 and close(sol.particular, 0)

    def test_product_antisymmetric(self, T4xT4, swap16):
        chi = enumerate_exponentials(T4xT4)[0]
        sol = solve_sine_addition_special(T4xT4, chi, parity=(swap16, -1))
        phi0, chi0 = np.array([0, 1, 0, 0]), np.array([1, 0, 0, 0])
        target = np.outer(phi0, chi0).ravel() - np.outer(chi0, phi0).ravel()
        assert sol.dimension == 1
        assert close(sol.basis[0], target) or close(sol.basis[0], -target)

    def test_moments(self, T4):
        chi = enumerate_exponentials(T4)[0]
        mu = DiscreteMeasure.from_weights([0, 1], [1, 2])
        sol = solve_sine_addition_special(T4, chi, moments=[(mu, 3)])
        assert close(sol.particular, [0, 1.5, 0, 0], 1e-12) and sol.dimension == 0
        with pytest.raises(Inconsistent):
            solve_sine_addition_special(T4, chi, moments=[(DiscreteMeasure.point_mass(0), 1)])

    @pytest.mark.parametrize("name", ["T4", "T4xT4", "Z3"])
    def test_solutions_recheck(self, name, T4, T4xT4, Z3, swap16):
        S = {"T4": T4, "T4xT4": T4xT4, "Z3": Z3}[name]
        for chi in enumerate_exponentials(S):
            for parity in (None, (idn(S.n), 1)) + (((swap16, -1),) if S.n == 16 else ()):
                sol = solve_sine_addition_special(S, chi, parity=parity)
                for phi in sol.basis:
                    r = residual(S, None, None, EquationId.SpecialSineAdd, phi, chi.values).max_residual
                    assert r <= 1e-9
                    if parity is not None:
                        assert close(sigma_pullback(phi, parity[0]), parity[1] * phi, 1e-9)


class TestSpecialKSAddition:
    def test_trunc4_point_mass(self, T4, delta0):
        chi = enumerate_exponentials(T4)[0]
        (v,) = solve_special_ks_addition(T4, idn(4), delta0, chi)
        assert close(v, [0, 1, 0, 0])

    def test_point_mass_matches_sine_addition(self, T4xT4, delta0):
        for chi in enumerate_exponentials(T4xT4):
            a = solve_special_ks_addition(T4xT4, idn(16), delta0, chi)
            b = solve_sine_addition_special(T4xT4, chi).basis
            assert len(a) == len(b)
            if a:
                assert np.linalg.matrix_rank(np.vstack(a + b), tol=1e-9) == len(a)

    def test_errors(self, Z3, neg3):
        chi0, chi1, _ = enumerate_exponentials(Z3)
        with pytest.raises(DegenerateMoment):
            solve_special_ks_addition(Z3, idn(3), DiscreteMeasure.from_weights([0, 1], [1, -1]), chi0)
        with pytest.raises(SigmaMismatch):
            solve_special_ks_addition(Z3, neg3, DiscreteMeasure.point_mass(0), chi1)

    @given(st.integers(0, 2 ** 32 - 1))
    def test_solutions_recheck(self, seed):
        S = trunc(4)
        rng = np.random.default_rng(seed)
        mu = DiscreteMeasure.from_weights(range(4), rng.normal(size=4) + 1j * rng.normal(size=4))
        for chi in enumerate_exponentials(S):
            try:
                basis = solve_special_ks_addition(S, idn(4), mu, chi)
            except DegenerateMoment:
                continue
            for Phi in basis:
                r = residual(S, idn(4), mu, EquationId.SpecialKSAdd, Phi, chi.values).max_residual
                assert r <= 1e-9 * (1 + np.sum(np.abs(mu.weights)))


class TestFitMeasure:
    def test_point_mass(self, Z3):
        mu = fit_measure(Z3, [(np.ones(3), 1)], [0])
        assert mu.atoms == ((0, 1 + 0j),)

    def test_cyclic_inverse_fourier(self, Z3, neg3):
        chi0, chi1, chi2 = enumerate_exponentials(Z3)
        mu = fit_measure(Z3, [(chi1, -2), (chi1.pullback(neg3), 2), (chi0, 0)], [0, 1, 2])
        # inverse DFT of the targets
        F = np.array([chi0.values, chi1.values, chi2.values])
        assert close(F @ mu.weights, [0, -2, 2], 1e-12)
        assert close(mu.weights, np.linalg.solve(F, [0, -2, 2]), 1e-12)

    def test_unreachable(self, T4):
        chi = enumerate_exponentials(T4)[0]
        with pytest.raises(Inconsistent):
            fit_measure(T4, [(chi, 1)], [1, 2])
