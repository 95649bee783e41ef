"""Why 4 is not enough: the covering intervals and the missed window."""

from nicfsum import build_table2, nicf4_extremes, to_decimal, verify_gap
from nicfsum.nicf4 import I1, I2, verify_union_covers

lo, hi = nicf4_extremes()
print("smallest positive", to_decimal(lo, 7), " largest", to_decimal(hi, 7))

for row in build_table2():
    print(f"{row.label:<14} {str(row.min_cf):<28} {str(row.max_cf):<28} {row.covering.decimal(5)}")

cover = verify_union_covers(5)
print(f"{cover.prefixes} digit strings checked, uncovered: {len(cover.uncovered)}")

rep = verify_gap()
print(f"{len(rep.pairs)} pair sums, hits: {len(rep.hits)}")
print("closest to I1:")
for p in rep.nearest_i1[:5]:
    print(f"   {p.label:<28} {p.interval.decimal(5)}  distance {float(p.distance(I1)):.6f}")
print("closest to I2:")
for p in rep.nearest_i2[:3]:
    print(f"   {p.label:<28} {p.interval.decimal(5)}  distance {float(p.distance(I2)):.6f}")
