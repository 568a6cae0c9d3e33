"""Frame validity, a distributivity failure, and small-model search.

Run: python3 demos/02_countermodels.py
"""
# %%
from filterlogic.order import meet_structure, validate_poset
from filterlogic.prover import countermodel_search, whitman_decide, whitman_derivation
from filterlogic.semantics import frame_validity
from filterlogic.syntax import parse_pair

m3 = meet_structure(validate_poset(
    ["0", "a", "b", "c", "1"],
    [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]))
distr = parse_pair("p & (q|q2) <= (p&q)|(p&q2)")

v = frame_validity(m3, distr)
print("valid on M3:", v.valid, "after", v.checked, "valuations")
for k, m in v.witness.valuation.items():
    print(f"  V({k}) =", [m3.labels[i] for i in range(m3.n) if m >> i & 1])
print("  state", m3.labels[v.witness.state])

# %%
# the decision procedure agrees, and the smallest countermodel is smaller than M3
print("derivable:", whitman_decide(distr))
cm = countermodel_search(distr, 5)
print("first countermodel has", cm.n, "points; up-sets", cm.frame.poset.up, "state", cm.state)

# %%
# the converse direction is derivable; print its proof tree
conv = parse_pair("(p&q)|(p&q2) <= p & (q|q2)")
print(whitman_derivation(conv).dumps())
