"""Filters of a small semilattice and why disjunction is not union.

Run: python3 demos/01_filters_and_disjunction.py
"""
# %%
from filterlogic.order import all_filters, complex_algebra, lattice_props, meet_structure, validate_poset

# the V shape: 0 below a and b, nothing above them
vee = meet_structure(validate_poset(["0", "a", "b"], [("0", "a"), ("0", "b")]))
for f in all_filters(vee):
    print(f.labels(), "principal" if f.is_principal else "")

# %%
# up(a) and up(b) are filters; their union {a, b} is not, since a /\ b = 0 is missing
ua, ub = vee.principal(1), vee.principal(2)
print("union  :", [vee.labels[i] for i in range(3) if (ua | ub) >> i & 1])
print("join   :", [vee.labels[i] for i in range(3) if vee.join2(ua, ub) >> i & 1])

# %%
# the filters form a lattice; here it is distributive, on M3 it is not
ca = complex_algebra(vee)
print(len(ca.filters), "filters;", lattice_props(ca.lattice))

m3 = meet_structure(validate_poset(
    ["0", "a", "b", "c", "1"],
    [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]))
print("M3 filters:", lattice_props(complex_algebra(m3).lattice))
