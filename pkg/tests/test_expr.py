"""Parser, evaluator, and symbolic differentiation."""

import math

import numpy as np
import pytest

from darboux.errors import EvalDomainError, ParseError
from darboux.expr import FUNCTIONS, differentiate, evaluate, parse, unparse


def fd_derivative(e, var, env, h=1e-5):
    """Central-difference oracle for d e / d var at env."""
    up = dict(env, **{var: env[var] + h})
    dn = dict(env, **{var: env[var] - h})
    return (evaluate(e, up) - evaluate(e, dn)) / (2.0 * h)


class TestParse:
    def test_product_of_cosines(self):
        e = parse("cos(v)*cos(u)", ["u", "v"])
        assert evaluate(e, {"u": 0.0, "v": 0.0}) == 1.0
        assert evaluate(e, {"u": math.pi / 2, "v": 0.0}) == pytest.approx(0.0, abs=1e-15)

    def test_sphere_residual(self):
        e = parse("x^2+y^2+z^2-1", ["x", "y", "z"])
        assert evaluate(e, {"x": 1.0, "y": 0.0, "z": 0.0}) == 0.0

    def test_error_at_end_of_input(self):
        with pytest.raises(ParseError) as exc:
            parse("u + ", ["u"])
        assert exc.value.position == 4

    def test_undeclared_identifier(self):
        with pytest.raises(ParseError, match="undeclared"):
            parse("u + w", ["u"])

    def test_unknown_function(self):
        with pytest.raises(ParseError, match="unknown function"):
            parse("foo(u)", ["u"])

    def test_no_implicit_multiplication(self):
        with pytest.raises(ParseError):
            parse("2u", ["u"])

    def test_empty_source(self):
        with pytest.raises(ParseError):
            parse("   ", ["u"])

    def test_precedence_and_associativity(self):
        e = parse("2+3*4^2", [])
        assert evaluate(e, {}) == 50.0
        # ^ is right-associative
        e = parse("2^3^2", [])
        assert evaluate(e, {}) == 512.0
        e = parse("-2^2", [])
        assert evaluate(e, {}) == -4.0
        e = parse("2^-1", [])
        assert evaluate(e, {}) == 0.5

    def test_whitespace_insignificant(self):
        a = parse("  sin( u ) * 2 ", ["u"])
        b = parse("sin(u)*2", ["u"])
        assert evaluate(a, {"u": 0.7}) == evaluate(b, {"u": 0.7})


class TestEvaluate:
    def test_constants(self):
        assert evaluate(parse("pi", []), {}) == math.pi
        assert evaluate(parse("e", []), {}) == math.e

    def test_sqrt_domain_error(self):
        with pytest.raises(EvalDomainError, match="sqrt"):
            evaluate(parse("sqrt(u)", ["u"]), {"u": -1.0})

    def test_ln_domain_error(self):
        with pytest.raises(EvalDomainError, match="ln"):
            evaluate(parse("ln(u)", ["u"]), {"u": 0.0})

    def test_division_by_zero(self):
        with pytest.raises(EvalDomainError, match="division by zero"):
            evaluate(parse("1/u", ["u"]), {"u": 0.0})

    def test_inverse_pair(self):
        assert evaluate(parse("exp(ln(u))", ["u"]), {"u": 2.5}) == pytest.approx(2.5, abs=1e-15)

    def test_error_reports_subexpression(self):
        with pytest.raises(EvalDomainError) as exc:
            evaluate(parse("1 + sqrt(u - 3)", ["u"]), {"u": 0.0})
        assert "sqrt(u - 3.0)" in str(exc.value)

    def test_unbound_variable(self):
        with pytest.raises(EvalDomainError, match="unbound"):
            evaluate(parse("u+v", ["u", "v"]), {"u": 1.0})


class TestDifferentiate:
    def test_power_rule(self):
        e = parse("u^2*v", ["u", "v"])
        d = differentiate(e, "u")
        assert evaluate(d, {"u": 1.0, "v": 3.0}) == 6.0

    def test_sin_at_zero(self):
        d = differentiate(parse("sin(u)", ["u"]), "u")
        assert evaluate(d, {"u": 0.0}) == 1.0

    def test_second_partial_matches_fd_oracle(self):
        # oracle: central second difference of cos(v)*cos(u) in u at (0, 0)
        e = parse("cos(v)*cos(u)", ["u", "v"])
        h = 1e-5
        env = {"u": 0.0, "v": 0.0}
        oracle = (evaluate(e, {"u": h, "v": 0.0}) - 2.0 * evaluate(e, env)
                  + evaluate(e, {"u": -h, "v": 0.0})) / h**2
        d2 = differentiate(differentiate(e, "u"), "u")
        sym = evaluate(d2, env)
        assert sym == pytest.approx(oracle, abs=1e-6)
        assert sym == -1.0

    def test_undeclared_differentiation_variable(self):
        with pytest.raises(ValueError):
            differentiate(parse("u", ["u"]), "v")

    def test_abs_sign_based_derivative(self):
        d = differentiate(parse("abs(u)", ["u"]), "u")
        assert evaluate(d, {"u": 2.0}) == 1.0
        assert evaluate(d, {"u": -2.0}) == -1.0
        with pytest.raises(EvalDomainError, match="sign"):
            evaluate(d, {"u": 0.0})

    def test_general_power(self):
        e = parse("u^v", ["u", "v"])
        env = {"u": 1.7, "v": 2.3}
        assert evaluate(differentiate(e, "u"), env) == pytest.approx(
            fd_derivative(e, "u", env), rel=1e-8)
        assert evaluate(differentiate(e, "v"), env) == pytest.approx(
            fd_derivative(e, "v", env), rel=1e-8)

    def test_quotient_and_chain(self):
        e = parse("sin(u)/ (1 + cos(u)^2)", ["u"])
        env = {"u": 0.9}
        assert evaluate(differentiate(e, "u"), env) == pytest.approx(
            fd_derivative(e, "u", env), rel=1e-9)


# ---------------------------------------------------------------------------
# Random-expression properties

SAFE_FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "abs")


def random_expression(rng, variables, depth):
    if depth == 0 or rng.random() < 0.25:
        kind = rng.integers(0, 3)
        if kind == 0:
            return rng.choice(variables)
        if kind == 1:
            return f"{rng.uniform(0.2, 3.0):.4f}"
        return rng.choice(["pi", "e", rng.choice(variables)])
    op = rng.integers(0, 6)
    a = random_expression(rng, variables, depth - 1)
    b = random_expression(rng, variables, depth - 1)
    if op == 0:
        return f"({a} + {b})"
    if op == 1:
        return f"({a} - {b})"
    if op == 2:
        return f"({a})*({b})"
    if op == 3:
        return f"({a})/({b})"
    if op == 4:
        return f"({a})^{rng.integers(2, 4)}"
    fn = rng.choice(SAFE_FUNCTIONS)
    return f"{fn}({a})"


def usable_points(e, variables, rng, h=1e-5, want=20):
    """Random evaluation points away from domain boundaries: the expression
    and its shifted copies must evaluate to moderate values."""
    points = []
    for _ in range(400):
        env = {v: float(rng.uniform(-2.0, 2.0)) for v in variables}
        try:
            vals = [evaluate(e, env)]
            for v in variables:
                vals.append(evaluate(e, dict(env, **{v: env[v] + h})))
                vals.append(evaluate(e, dict(env, **{v: env[v] - h})))
        except EvalDomainError:
            continue
        if all(math.isfinite(x) and abs(x) < 1e3 for x in vals):
            points.append(env)
        if len(points) >= want:
            break
    return points


def test_random_derivatives_match_central_differences():
    rng = np.random.default_rng(20240817)
    variables = ["u", "v"]
    checked = 0
    expressions = 0
    while expressions < 100:
        src = random_expression(rng, variables, depth=3)
        try:
            e = parse(src, variables)
        except ParseError:  # pragma: no cover - generator emits valid syntax
            continue
        points = usable_points(e, variables, rng)
        if len(points) < 5:
            continue
        expressions += 1
        for var in variables:
            try:
                d = differentiate(e, var)
            except ValueError:  # pragma: no cover
                continue
            for env in points:
                try:
                    sym = evaluate(d, env)
                    fd = fd_derivative(e, var, env)
                    fd_half = fd_derivative(e, var, env, h=5e-6)
                except EvalDomainError:
                    continue
                if not all(math.isfinite(x) for x in (sym, fd, fd_half)):
                    continue
                scale = 1.0 + max(abs(fd), abs(fd_half))
                if abs(fd - fd_half) > 2e-7 * scale:
                    continue  # the difference oracle itself is unstable here
                assert abs(sym - fd) <= 1e-6 * (1.0 + max(abs(sym), abs(fd))), src
                checked += 1
    assert checked > 1000


def test_roundtrip_parse_unparse_parse():
    rng = np.random.default_rng(7)
    variables = ["u", "v"]
    done = 0
    while done < 100:
        src = random_expression(rng, variables, depth=3)
        e = parse(src, variables)
        e2 = parse(unparse(e), variables)
        points = usable_points(e, variables, rng, want=10)
        if not points:
            continue
        done += 1
        for env in points:
            a = evaluate(e, env)
            b = evaluate(e2, env)
            assert b == pytest.approx(a, rel=2.3e-16, abs=5e-324) or a == b


def test_derivative_unparse_reparses():
    e = parse("abs(u*v) + sqrt(u^2+1)", ["u", "v"])
    d = differentiate(e, "u")
    d2 = parse(unparse(d), ["u", "v"])
    env = {"u": 1.3, "v": -0.4}
    assert evaluate(d2, env) == evaluate(d, env)


def test_known_function_list_is_closed():
    for fn in FUNCTIONS:
        parse(f"{fn}(u)", ["u"])
