import random
import string
from fractions import Fraction

import pytest

from starnambu import ArityError, ExprSyntaxError, PhaseExpr, UnknownName
from starnambu.lang import Binding, evaluate, parse, print_canonical
from starnambu.models import get_model
from tests.test_phase import rand_expr


class TestParse:
    def test_bracket_call(self):
        node = parse("pb(L[1,2], P[1])")
        assert node.kind == "call" and node.fn == "pb"
        assert node.children[0].kind == "name"
        assert node.children[0].base == "L"
        assert node.children[0].indices == (1, 2)
        assert node.children[1].indices == (1,)

    def test_mixed_expression(self):
        node = parse("star(x[1], p[1]) - x[1]*p[1]")
        assert node.kind == "sub"
        assert node.children[0].fn == "star"
        assert node.children[1].kind == "mul"

    def test_error_span_unclosed(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("qnb(f, Lx, Ly")
        assert err.value.span[0] == len("qnb(f, Lx, Ly")
        assert set(err.value.expected) & {")", ","}

    def test_error_span_bad_char(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("x[1] $ 2")
        assert err.value.span == (5, 6)

    def test_trailing_tokens(self):
        with pytest.raises(ExprSyntaxError):
            parse("1 2")

    def test_numbers(self):
        assert parse("3/4").value == Fraction(3, 4)
        assert parse("12").value == Fraction(12)

    def test_totality_fuzz(self):
        rng = random.Random(71)
        alphabet = string.ascii_letters + string.digits + "+-*/()[], ."
        for _ in range(300):
            text = "".join(rng.choice(alphabet)
                           for _ in range(rng.randint(1, 25)))
            try:
                parse(text)
            except ExprSyntaxError as exc:
                lo, hi = exc.span
                assert 0 <= lo <= hi <= len(text) + 1

    def test_totality_pathological(self):
        with pytest.raises(ExprSyntaxError):
            parse("1/0")
        with pytest.raises(ExprSyntaxError):
            parse("(" * 5000 + "1" + ")" * 5000)
        with pytest.raises(ExprSyntaxError):
            parse("")


class TestEvaluate:
    def test_precedence(self):
        b = Binding(dimension=2)
        assert evaluate("1 - 2*3", b).equals(PhaseExpr.const(2, -5))
        assert evaluate("-2*3", b).equals(PhaseExpr.const(2, -6))
        assert evaluate("(1+2)*3", b).equals(PhaseExpr.const(2, 9))
        assert evaluate("2*3+1", b).equals(PhaseExpr.const(2, 7))
        assert evaluate("i*i", b).equals(PhaseExpr.const(2, -1))

    def test_model_names(self):
        m = get_model("sphere:2")
        b = Binding(model=m)
        assert evaluate("mb(Lx,Ly)", b).equals(m.charge("Lz"))
        assert evaluate("h0(Hqm)", b).equals(m.charge("H"))
        assert evaluate("divh(qnb(x[1],p[1]),1)", b).equals(PhaseExpr.one(2))
        assert evaluate("mb(Lx,Hqm)", b).is_zero()
        assert evaluate("L[1,2]", b).equals(m.charge("Lz"))

    def test_builtin_names(self):
        b = Binding(dimension=2)
        one = PhaseExpr.one(2)
        s = PhaseExpr.radical_s(2)
        assert evaluate("s*s + x1*x1 + x2*x2", b).equals(one)
        assert evaluate("w*(1+s)", b).equals(one)
        assert evaluate("x[2] - y", b).is_zero()
        assert evaluate("p[1] - px", b).is_zero()

    def test_division(self):
        b = Binding(dimension=2)
        one = PhaseExpr.one(2)
        # (1+s)(1-s) = 1 - s^2 = q^2
        assert evaluate("(x1*x1 + x2*x2)/(1+s)/(1-s)", b).equals(one)
        assert evaluate("(1 - x1*x1 - x2*x2)/(s*s)", b).equals(one)

    def test_diff(self):
        b = Binding(dimension=2)
        got = evaluate("diff(x[1]*p[1], p[1])", b)
        assert got.equals(PhaseExpr.coord(2, 0))
        got = evaluate("diff(s, x[1])", b)
        x = PhaseExpr.coord(2, 0)
        y = PhaseExpr.coord(2, 1)
        s = PhaseExpr.radical_s(2)
        one = PhaseExpr.one(2)
        assert got.equals(-(x * s) / (one - x * x - y * y))

    def test_arity_errors(self):
        b = Binding(model=get_model("sphere:2"))
        with pytest.raises(ArityError):
            evaluate("pb(Lx)", b)
        with pytest.raises(ArityError):
            evaluate("nb(Lx, Ly, Lz)", b)
        with pytest.raises(ArityError):
            evaluate("divh(Lx, x1)", b)
        with pytest.raises(ArityError):
            evaluate("diff(Lx, Lx)", b)

    def test_unknown_name(self):
        b = Binding(model=get_model("sphere:2"))
        with pytest.raises(UnknownName):
            evaluate("mb(Lx, Nope)", b)

    def test_inexact_division_propagates(self):
        from starnambu import InexactDivision
        b = Binding(dimension=2)
        with pytest.raises(InexactDivision):
            evaluate("divh(x1, 1)", b)

    def test_nb_dispatch(self):
        m = get_model("sphere:2")
        b = Binding(model=m)
        got = evaluate("nb(H, Lx, Ly, Lz)", b)
        assert got.is_zero()

    def test_extra_bindings(self):
        f = rand_expr(2, random.Random(72), terms=3)
        b = Binding(dimension=2, extra={"f": f})
        assert evaluate("f - f", b).is_zero()
        with pytest.raises(Exception):
            Binding(dimension=2, extra={"star": f})


class TestPrintCanonical:
    def test_zero(self):
        assert print_canonical(PhaseExpr.zero(2)) == "0"

    def test_star_example(self):
        from starnambu import star
        got = star(PhaseExpr.coord(2, 0), PhaseExpr.momentum(2, 0))
        assert print_canonical(got) == "x1*p1 + (1/2)*i*hbar"

    def test_roundtrip_100_random(self):
        rng = random.Random(73)
        b2 = Binding(dimension=2)
        b1 = Binding(dimension=1)
        for trial in range(100):
            n = 1 if trial % 4 == 0 else 2
            e = rand_expr(n, rng, terms=3)
            if trial % 5 == 0:
                e = e * PhaseExpr.w_function(n)
            text = print_canonical(e)
            back = evaluate(text, b1 if n == 1 else b2)
            assert back.equals(e), text

    def test_roundtrip_model_objects(self):
        m = get_model("chiral-s3")
        b = Binding(model=m)
        for name in ("Hqm", "IL", "R2"):
            e = m.charge(name)
            assert evaluate(print_canonical(e), b).equals(e)
