from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from severi import linalg
from severi.linalg import PrimeField, RationalField

P = 31991
FP = PrimeField(P)
FQ = RationalField()


def small_matrix(rows=(1, 6), cols=(1, 7), lo=-3, hi=3):
    return st.integers(*rows).flatmap(
        lambda r: st.integers(*cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def sym_rank(M, p=None):
    S = sympy.Matrix(M)
    if p is None:
        return S.rank()
    # rank over F_p from the elimination of an integer matrix with modular pivots
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    return DomainMatrix.from_Matrix(S).convert_to(GF(p)).rank()


class TestFields:
    def test_prime_field_rejects_bad_moduli(self):
        for p in (2, 3, 4, 1 << 25, 31990):
            with pytest.raises(ValueError):
                PrimeField(p)

    def test_inverse_and_division(self):
        for a in (1, 2, 12345, P - 1):
            assert FP.reduce(a * FP.inv(a)) == 1
        assert FP(Fraction(1, 2)) == FP.inv(2)
        assert FQ.div(3, 6) == Fraction(1, 2)
        with pytest.raises(ZeroDivisionError):
            FP.inv(0)

    def test_sqrt(self):
        assert FP.sqrt(0) == 0
        r = FP.sqrt(4)
        assert r in (2, P - 2)
        assert FQ.sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert FQ.sqrt(2) is None

    def test_make_field(self):
        assert isinstance(linalg.make_field("q"), RationalField)
        assert linalg.make_field(65537).p == 65537

    def test_rational_random_respects_height(self, rng):
        v = RationalField(height=4).random(rng, 200)
        assert all(abs(x) <= 4 and x.denominator == 1 for x in v)


class TestElimination:
    @given(small_matrix())
    def test_rank_matches_sympy_over_q(self, rows):
        M = FQ.array(rows)
        assert linalg.rank(M, FQ) == sym_rank(rows)

    @given(small_matrix(lo=-40000, hi=40000))
    def test_rank_matches_sympy_over_fp(self, rows):
        M = FP.array(rows)
        assert linalg.rank(M, FP) == sym_rank(rows, P)

    @given(small_matrix())
    def test_kernel_is_complement(self, rows):
        for F in (FP, FQ):
            M = F.array(rows)
            K = linalg.kernel(M, F)
            assert len(K) + linalg.rank(M, F) == M.shape[1]
            if len(K):
                assert not np.any(F.reduce(M @ K.T) != 0)

    @given(small_matrix(rows=(1, 5), cols=(1, 5)))
    def test_rref_is_canonical(self, rows):
        M = FQ.array(rows)
        R1 = linalg.rref(M, FQ)
        R2 = linalg.rref(np.vstack([M[::-1], M]), FQ)
        assert R1.rank == R2.rank and np.array_equal(R1.rows, R2.rows)

    def test_det_against_sympy(self, rng):
        for _ in range(10):
            rows = rng.integers(-5, 6, size=(4, 4)).tolist()
            d = sympy.Matrix(rows).det()
            assert linalg.det(FQ.array(rows), FQ) == d
            assert linalg.det(FP.array(rows), FP) == int(d) % P

    def test_rank_by_minor_expansion(self, rng):
        # rank is the largest size of a nonvanishing minor
        from itertools import combinations

        for _ in range(5):
            A = rng.integers(-2, 3, size=(4, 2))
            rows = (A @ rng.integers(-2, 3, size=(2, 5))).tolist()
            M = FQ.array(rows)
            best = 0
            for k in range(1, 5):
                for r in combinations(range(4), k):
                    for c in combinations(range(5), k):
                        if sympy.Matrix(rows).extract(list(r), list(c)).det() != 0:
                            best = k
            assert linalg.rank(M, FQ) == best

    def test_subspace_operations(self):
        U = FQ.array([[1, 0, 0, 0], [0, 1, 0, 0]])
        V = FQ.array([[0, 1, 0, 0], [0, 0, 1, 0]])
        W = linalg.intersect_subspaces(U, V, FQ)
        assert W.shape == (1, 4) and W[0, 1] != 0
        assert linalg.in_span(FQ.array([2, 3, 0, 0]), U, FQ)
        assert not linalg.in_span(FQ.array([0, 0, 0, 1]), U, FQ)
        assert list(linalg.coordinates(FQ.array([2, 3, 0, 0]), U, FQ)) == [2, 3]
        A = linalg.annihilator(U, FQ, 4)
        assert A.shape == (2, 4) and not np.any(FQ.reduce(U @ A.T) != 0)

    def test_modular_matmul_is_exact(self, rng):
        p = 1000003
        F = PrimeField(p)
        A = F.random(rng, (40, 300))
        B = F.random(rng, (300, 30))
        exact = (A.astype(object) @ B.astype(object)) % p
        assert np.array_equal(linalg.matmul(A, B, F).astype(object), exact)


class TestStreamingEchelon:
    def test_agrees_with_batch_rref(self, rng):
        F = PrimeField(65537)
        M = F.reduce(F.random(rng, (90, 20)) @ F.random(rng, (20, 250)))
        se = linalg.StreamingEchelon(250, F)
        for s in range(0, 90, 17):
            se.add(M[s:s + 17])
        assert se.rank == 20
        R = se.result()
        ref = linalg.rref(M, F)
        assert np.array_equal(R.rows, ref.rows)
        assert np.array_equal(R.kernel, ref.kernel)


class TestBinaryForms:
    s, t = sympy.symbols("s t")

    def to_sympy(self, coeffs):
        d = len(coeffs) - 1
        return sum(c * self.s ** (d - i) * self.t ** i for i, c in enumerate(coeffs))

    def test_gcd_matches_sympy(self, rng):
        for _ in range(20):
            g = [int(x) for x in rng.integers(-3, 4, size=3)]
            f1 = sympy.Poly(self.to_sympy(g) * self.to_sympy([int(x) for x in rng.integers(-3, 4, size=2)]), self.s, self.t)
            f2 = sympy.Poly(self.to_sympy(g) * self.to_sympy([int(x) for x in rng.integers(-3, 4, size=3)]), self.s, self.t)
            ours = linalg.binary_form_gcd([self._coeffs(f1, 3), self._coeffs(f2, 4)], FQ)
            ref = sympy.gcd(f1, f2)
            if ref.is_zero:
                assert ours.is_zero
            else:
                assert ours.degree == ref.total_degree()

    def _coeffs(self, poly, d):
        return [poly.coeff_monomial(self.s ** (d - i) * self.t ** i) for i in range(d + 1)]

    def test_gcd_of_zero_forms(self):
        assert linalg.binary_form_gcd([[0, 0, 0], [0, 0]], FQ).is_zero

    def test_roots(self):
        # s^2 - t^2 = (s - t)(s + t)
        roots = linalg.binary_roots([1, 0, -1], FQ)
        assert sorted(Fraction(a) / Fraction(b) for a, b in roots) == [-1, 1]
        assert linalg.binary_roots([1, 0, -2], FQ) == []
        # t^2: double root at [1 : 0]
        assert {tuple(map(Fraction, r)) for r in linalg.binary_roots([0, 0, 1], FQ)} == {(1, 0)}
