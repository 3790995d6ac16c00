"""Expressions: parse text, evaluate it, and take exact derivatives.

Surfaces and curves can be supplied as plain text; everything downstream
(chart jets, gradients, Hessians) is built from the exact symbolic
derivatives demonstrated here.
"""

from darboux.errors import EvalDomainError, ParseError
from darboux.expr import differentiate, evaluate, parse, unparse

# Parse over declared variables.  Standard precedence, ^ right-associative,
# no implicit multiplication.
e = parse("cos(v)*cos(u)", ["u", "v"])
print("e           =", unparse(e))
print("e(0.3, 0.5) =", evaluate(e, {"u": 0.3, "v": 0.5}))

# Exact partial derivatives; apply repeatedly for higher partials.
de_du = differentiate(e, "u")
d2e_du2 = differentiate(de_du, "u")
print("de/du       =", unparse(de_du))
print("d2e/du2     =", unparse(d2e_du2))
print("d2e/du2 at (0,0) =", evaluate(d2e_du2, {"u": 0.0, "v": 0.0}))  # -1

# Constant subtrees fold, so derivative output stays compact and printable;
# printed derivatives re-parse.
roundtrip = parse(unparse(d2e_du2), ["u", "v"])
print("round-trip equal:",
      evaluate(roundtrip, {"u": 0.7, "v": -0.2}) == evaluate(d2e_du2, {"u": 0.7, "v": -0.2}))

# Malformed input fails with a position, domain violations name the culprit.
try:
    parse("u + ", ["u"])
except ParseError as exc:
    print("parse error:", exc)

try:
    evaluate(parse("ln(u - 2)", ["u"]), {"u": 1.0})
except EvalDomainError as exc:
    print("domain error:", exc)

# abs differentiates to a sign factor that refuses to evaluate at the corner.
d_abs = differentiate(parse("abs(u)", ["u"]), "u")
print("d|u|/du at -3:", evaluate(d_abs, {"u": -3.0}))
try:
    evaluate(d_abs, {"u": 0.0})
except EvalDomainError as exc:
    print("corner:", exc)
