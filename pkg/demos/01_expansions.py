"""Nearest-integer expansions next to regular ones, all in exact arithmetic."""

from fractions import Fraction

from nicfsum import format_cf, nicf_expand, parse_cf, parse_number, rcf_expand, cf_eval, to_decimal

# A rational terminates.  Rounding to the nearest integer gives shorter expansions
for x in [Fraction(13, 8), Fraction(314159, 100000), Fraction(-7, 3)]:
    print(f"{str(x):>14}  rcf {format_cf(rcf_expand(x)):<32} nicf {format_cf(nicf_expand(x))}")

# Quadratic irrationals come back periodic
for text in ["(5+1*sqrt(21))/2", "-2+sqrt(6)", "(1+sqrt(5))/2", "sqrt(7)"]:
    x = parse_number(text)
    print(f"{text:>18} = {to_decimal(x, 12)}  nicf {format_cf(nicf_expand(x))}")

# and a periodic literal evaluates back to the exact fixed point
e = parse_cf("[0; -3, per(2,4)]")
print(format_cf(e), "=", cf_eval(e), "≈", to_decimal(cf_eval(e), 10))
