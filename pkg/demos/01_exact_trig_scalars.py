"""Exact trigonometric scalars: the arithmetic everything else stands on.

Scalars are finite Fourier sums with exact frequencies r + s*pi and
coefficients in Q[pi, 1/pi].  Products always expand through product-to-sum,
so classic identities collapse to literals in the normal form.
"""

from fractions import Fraction

from engelcalc import differentiate, evaluate, is_identically_zero, parse

print("== normal forms ==")
for text in ("sin(t)*sin(t) + cos(t)*cos(t)",
             "sin(t)*cos(t)",
             "cos(6*pi*x2)*cos(6*pi*x2) + sin(6*pi*x2)*sin(6*pi*x2)"):
    print(f"  {text}  ->  {parse(text)}")

print("\n== differentiation keeps pi exact ==")
s = parse("sin(2*pi*x1)")
print(f"  d/dx1 {s} = {differentiate(s, 'x1')}")
print(f"  second derivative: {differentiate(differentiate(s, 'x1'), 'x1')}")

print("\n== evaluation happens at the very end ==")
print(f"  sin(pi*t) at t = 1/2: {evaluate(parse('sin(pi*t)'), {'t': 0.5})}")
collapsed = parse("sin(t)*sin(t) + cos(t)*cos(t)")
print(f"  sin^2 + cos^2 at t = 0.37: {collapsed.evaluate({'t': 0.37})} (exact 1.0,"
      " because the normal form is the constant)")

print("\n== zero tests are syntactic ==")
z = parse("sin(t)*sin(t) + cos(t)*cos(t) - 1")
print(f"  sin^2 + cos^2 - 1 identically zero: {is_identically_zero(z)}")

print("\n== phases reduce mod 2*pi and shift exactly ==")
a = parse("cos(8*pi*x2 + (8/3)*pi)")
b = parse("cos(8*pi*x2 + (2/3)*pi)")
print(f"  phase 8*pi/3 == phase 2*pi/3: {a == b}")
s = parse("cos(6*pi*x2)")
print(f"  cos(6*pi*x2) at x2 -> x2 + 1/2: {s.shift('x2', Fraction(1, 2))}")
print(f"  cos(6*pi*x2) at x2 -> x2 + 1/3: {s.shift('x2', Fraction(1, 3))}"
      " (a full period)")
