import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from darbouxkit import expr as ex
from darbouxkit.errors import DenominatorVanishes, SizeMismatch
from darbouxkit.lpdo import DX, DY, LPDO, apply
from darbouxkit.syntax import parse_operator
from darbouxkit.wronskian import (WronskianSpec, columns, has_existence_guarantee, wronskian,
                                  wronskian_operator)

from generators import nonzero_poly, rational, rng_for

x, y = ex.x, ex.y
seeds = st.integers(min_value=0, max_value=2**32 - 1)
SHAPES = [(m, n) for m in range(4) for n in range(4) if 1 <= m + n <= 3]


def random_psi(rng):
    base = nonzero_poly(rng, 2) + rng.randint(1, 5)
    kind = rng.random()
    if kind < 0.5:
        return base
    if kind < 0.8:
        return base * sp.exp(rational(rng) * x + rational(rng) * y)
    return base / (nonzero_poly(rng, 1) + 7)


class TestWronskian:
    def test_single_function(self):
        assert wronskian(WronskianSpec(0, 0, [x * y])) == x * y

    def test_columns(self):
        assert columns(2, 1) == [(0, 0), (1, 0), (2, 0), (0, 1)]

    def test_x_wronskian(self):
        assert wronskian(WronskianSpec(1, 0, [x, x**2])) == x**2

    def test_mixed(self):
        # rows (f, f_x, f_y)
        w = wronskian(WronskianSpec(1, 1, [1, x, y]))
        assert w == 1

    def test_dependent_functions(self):
        assert wronskian(WronskianSpec(1, 0, [x, x * y])) == 0
        assert wronskian(WronskianSpec(0, 2, [sp.exp(y), 2 * sp.exp(y), y])) == 0

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            WronskianSpec(1, 0, [x])
        with pytest.raises(SizeMismatch):
            WronskianSpec(-1, 2, [x, y])


class TestWronskianOperator:
    def test_first_order_examples(self):
        assert wronskian_operator(1, 0, [x]) == parse_operator("Dx - 1/x")
        assert wronskian_operator(0, 1, [x * y]) == parse_operator("Dy - 1/y")

    def test_mixed_example(self):
        assert wronskian_operator(1, 1, [x, y]) == parse_operator("-Dx - y/x*Dy + 1/x")

    def test_second_order(self):
        M = wronskian_operator(2, 0, [1, x])
        assert M == DX**2

    def test_errors(self):
        with pytest.raises(SizeMismatch):
            wronskian_operator(1, 1, [x])
        with pytest.raises(SizeMismatch):
            wronskian_operator(0, 0, [])
        with pytest.raises(DenominatorVanishes):
            wronskian_operator(1, 0, [x - x])
        with pytest.raises(DenominatorVanishes):
            wronskian_operator(2, 0, [x, 2 * x])

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_first_order_formula(self, seed):
        psi = random_psi(rng_for(seed))
        M = wronskian_operator(1, 0, [psi])
        assert M.coeff(1, 0) == 1
        assert ex.is_zero(M.coeff(0, 0) + sp.diff(psi, x) / psi).zero

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.sampled_from(SHAPES))
    def test_annihilates_its_functions(self, seed, shape):
        m, n = shape
        rng = rng_for(seed)
        psis = [random_psi(rng) for _ in range(m + n)]
        try:
            M = wronskian_operator(m, n, psis)
        except DenominatorVanishes:
            return
        for psi in psis:
            assert ex.is_zero(apply(M, psi)).zero

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.sampled_from(SHAPES))
    def test_determinant_ratio(self, seed, shape):
        m, n = shape
        rng = rng_for(seed)
        psis = [random_psi(rng) for _ in range(m + n)]
        f = random_psi(rng)
        try:
            M = wronskian_operator(m, n, psis)
        except DenominatorVanishes:
            return
        denominator = wronskian(WronskianSpec(m - 1, n, psis) if m else WronskianSpec(0, n - 1, psis))
        numerator = wronskian(WronskianSpec(m, n, [f, *psis]))
        assert ex.is_zero(apply(M, f) - (-1) ** (m + n) * numerator / denominator).zero

    @settings(max_examples=10, deadline=None)
    @given(seeds, st.sampled_from(SHAPES))
    def test_constant_rescaling(self, seed, shape):
        m, n = shape
        rng = rng_for(seed)
        psis = [random_psi(rng) for _ in range(m + n)]
        scaled = [(i + 2) * p for i, p in enumerate(psis)]
        try:
            M = wronskian_operator(m, n, psis)
        except DenominatorVanishes:
            return
        assert wronskian_operator(m, n, scaled) == M

    def test_order_and_symbol(self):
        M = wronskian_operator(2, 1, [x, y, x * y])
        assert M.order == 2
        assert set(M.support()) <= set(columns(2, 1))


class TestExistenceGuarantee:
    def test_recognized_forms(self):
        assert has_existence_guarantee(parse_operator("Dx*Dy + x*Dx + y*Dy + 1"))
        assert has_existence_guarantee(parse_operator("Dx^2 + x*Dy + 1"))
        assert not has_existence_guarantee(parse_operator("Dx^2 + Dy^2"))
        assert not has_existence_guarantee(parse_operator("2*Dx*Dy"))
        assert not has_existence_guarantee(LPDO({(1, 1): 1, (2, 0): 1}))

    def test_generated_operator_intertwines(self):
        from darbouxkit.darboux import verify_intertwining
        from darbouxkit.intertwine import solve_intertwining

        L = DX * DY
        M = wronskian_operator(1, 1, [x, y])
        N, L1 = solve_intertwining(L, M)
        assert verify_intertwining(N, L, L1, M).ok
