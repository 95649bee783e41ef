"""Writing real numbers as u + v with both digit sequences bounded by 5."""

from fractions import Fraction

from nicfsum import certify, decompose_real, format_cf, parse_number, to_decimal
from nicfsum.decompose import sum_coverage

for text in ["1", "314159/100000", "-2/7", "(1+sqrt(21))/3"]:
    x = parse_number(text)
    d = decompose_real(x, Fraction(1, 10**15))
    certify(d, x)
    print(f"x = {text}  ({d.steps} refinements, residual {float(d.residual_bound):.2e})")
    print(f"   u = {format_cf(d.u_digits)} ~ {to_decimal(d.u_enclosure.lo, 15)}")
    print(f"   v = {format_cf(d.v_digits)} ~ {to_decimal(d.v_enclosure.lo, 15)}")

# After six rounds of splitting both trees, the interval sums still tile the whole range
merged, ok = sum_coverage(6)
print("depth-6 sums cover", merged[0].decimal(6), ok)

# Residuals only go down
d = decompose_real(Fraction(2, 3))
print([f"{float(r):.1e}" for r in d.history[::8]])
