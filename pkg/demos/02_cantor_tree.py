"""The Cantor set of expansions with digits bounded by 5, level by level."""

from nicfsum import c_nicf, locate, parse_cf, cf_eval
from nicfsum.cantor import density_ratio, hg_quantities, is_hole_decreasing
from nicfsum.nicf5 import verify_table1, kind_label

tree = c_nicf()

# Each node is a typed interval; the gap rule depends only on its type
for node in tree.walk(4):
    gap = tree.split(node).gap
    print("  " * node.depth + f"{node.payload.label:<22} gap {gap.decimal(6)}")

# Local density ratios (smaller child over gap) by node type
rep = verify_table1(8)
for kind, row in rep.rows.items():
    print(f"{kind_label(kind):<10} {row.count:>4} nodes  min ratio {float(row.min_ratio):.5f}  bound {float(row.bound):.5f}")
print("smallest ratio seen:", float(density_ratio(tree, 8).value))
h, g = hg_quantities(tree, 8)
print(f"H = {float(h.value):.5f}  G = {float(g.value):.5f}  H/G = {float(h.value / g.value):.5f}")
print("gaps shrink going down:", is_hole_decreasing(tree, 10))

# Membership: digits within the rules means in the set, anything else lands in a gap
for text in ["[0; per(5,-5)]", "[0; 3, per(-4,3)]", "[0; 3, 5, per(3)]", "[0; per(2,6)]"]:
    print(f"{text:<22} {locate(cf_eval(parse_cf(text)))}")
