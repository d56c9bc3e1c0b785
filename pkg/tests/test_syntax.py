import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from darbouxkit import expr as ex
from darbouxkit.lpdo import DX, DY, LPDO
from darbouxkit.syntax import (NonNormalForm, ParseError, parse_expr, parse_operator,
                               parse_operator_file, print_expr, print_operator)

from generators import random_operator, rng_for

x, y = ex.x, ex.y
seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestParseExpr:
    def test_precedence(self):
        assert parse_expr("1 + 2*x^2") == 1 + 2 * x**2
        assert parse_expr("-x^2") == -(x**2)
        assert parse_expr("2^-1") == sp.Rational(1, 2)

    def test_functions(self):
        assert parse_expr("sin(y/sqrt(x))") == sp.sin(y / sp.sqrt(x))
        assert parse_expr("exp(x)*log(y)") == sp.exp(x) * sp.log(y)

    def test_result_is_canonical(self):
        assert parse_expr("(x^2 - y^2)/(x - y)") == x + y

    def test_unicode_minus(self):
        assert parse_expr("x − y") == x - y

    def test_division_by_zero(self):
        with pytest.raises(ParseError):
            parse_expr("1/(x - x)")

    def test_unknown_name(self):
        with pytest.raises(ParseError) as info:
            parse_expr("x + z")
        assert (info.value.span.start, info.value.span.end) == (4, 5)
        assert "x" in info.value.expected

    def test_missing_operand(self):
        with pytest.raises(ParseError) as info:
            parse_expr("x +")
        assert info.value.span.start == 3
        assert "end of input" in info.value.message

    def test_spans_are_byte_offsets(self):
        with pytest.raises(ParseError) as info:
            parse_expr("−x + $")
        # the minus sign is three bytes in UTF-8
        assert info.value.span.start == 7

    def test_derivation_in_coefficient(self):
        with pytest.raises(ParseError):
            parse_expr("x*Dx")


class TestParseOperator:
    def test_examples(self):
        L = parse_operator("Dx*Dy^2 + Dx^2 + x*Dx + 1")
        assert L.coeffs == {(1, 2): 1, (2, 0): 1, (1, 0): x, (0, 0): 1}
        assert parse_operator("Dx - 1/x") == DX - LPDO.scalar(1 / x)

    def test_like_terms_merge(self):
        assert parse_operator("x*Dy + y*Dy - Dy") == LPDO({(0, 1): x + y - 1})
        assert parse_operator("Dx - Dx").is_zero()

    def test_coefficient_after_derivation(self):
        with pytest.raises(NonNormalForm) as info:
            parse_operator("Dx*x")
        assert info.value.span.start == 3

    def test_divide_by_derivation(self):
        with pytest.raises(ParseError) as info:
            parse_operator("x/Dy")
        assert not isinstance(info.value, NonNormalForm)

    def test_bad_exponent(self):
        with pytest.raises(ParseError):
            parse_operator("Dx^y")

    def test_trailing_input(self):
        with pytest.raises(ParseError) as info:
            parse_operator("Dx )")
        assert info.value.span.start == 3

    def test_repeated_derivations_multiply(self):
        assert parse_operator("Dx*Dy*Dx") == DX * DX * DY


class TestOperatorFile:
    def test_comments_and_blank_lines(self):
        text = "# header\n\nDx + 1  # trailing\n  \nDy\n"
        assert parse_operator_file(text) == [(3, DX + LPDO.scalar(1)), (5, DY)]

    def test_empty(self):
        assert parse_operator_file("") == []
        assert parse_operator_file("# nothing\n") == []

    def test_error_offsets_are_file_relative(self):
        text = "Dx\nDy + −\n"
        with pytest.raises(ParseError) as info:
            parse_operator_file(text)
        assert info.value.span.start == len(text.encode("utf-8")) - 1
        assert info.value.source == text

    def test_fixtures_parse(self, fixtures_dir):
        for path in fixtures_dir.glob("*.op"):
            assert parse_operator_file(path.read_text(encoding="utf-8"))


class TestPrinting:
    def test_grlex_descending(self):
        L = parse_operator("1 + x*Dx + Dx^2 + Dx*Dy^2")
        assert print_operator(L) == "Dx*Dy^2 + Dx^2 + x*Dx + 1"

    def test_signs_and_grouping(self):
        assert print_operator(parse_operator("Dx - 1/x")) == "Dx - 1/x"
        assert print_operator(parse_operator("-(x + y)*Dy")) == "-(x + y)*Dy"
        assert print_operator(LPDO()) == "0"

    def test_expr_uses_caret(self):
        assert print_expr(x**2 * sp.exp(1)) == "exp(1)*x^2"

    @settings(max_examples=100, deadline=None)
    @given(seeds)
    def test_round_trip(self, seed):
        L = random_operator(rng_for(seed))
        text = print_operator(L)
        assert parse_operator(text) == L
        assert print_operator(parse_operator(text)) == text

    def test_round_trip_transcendental(self, fixtures_dir):
        for _, L in parse_operator_file((fixtures_dir / "sine_kernel_claim_gauged.op").read_text()):
            assert parse_operator(print_operator(L)) == L
