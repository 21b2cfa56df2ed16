"""Ordered, nilpotent and ball progressions in the Heisenberg group."""
from nilkit import heisenberg
from nilkit.approximate import doubling_constant
from nilkit.progressions import (
    ProgressionSpec,
    check_chain,
    enumerate_ball,
    enumerate_nilpotent_progression,
    enumerate_nilprogression,
    enumerate_ordered,
    power_set,
)

H = heisenberg()
x, y = H.elementary(1, 2), H.elementary(2, 3)

for L in [(1, 1), (2, 1), (2, 2), (3, 3)]:
    spec = ProgressionSpec(H, [x, y], L)
    sizes = [len(f(spec)) for f in (enumerate_ordered, enumerate_nilprogression, enumerate_nilpotent_progression, enumerate_ball)]
    print(f"L={L}: |P_ord|={sizes[0]} |P*|={sizes[1]} |P|={sizes[2]} |ball|={sizes[3]}")

spec = ProgressionSpec(H, [x, y], (1, 1))
print("\nchain for L=(1,1):")
for line in check_chain(spec).lines():
    print("  ", line)

# the squared ordered progression grows like a step-2 box
P = enumerate_ordered(spec)
sym = P | P.inverse()
print(f"\n|P_ord^2|={len(power_set(P, 2))}, doubling of P_ord u P_ord^-1 = {doubling_constant(sym)}")

print("\nelements of P* for L=(1,1):")
for g in sorted(enumerate_nilprogression(spec).elements, key=H.sort_key):
    print("  ", H.format_element(g))
