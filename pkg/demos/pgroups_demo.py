"""Ranks, Frattini subgroups, Burnside bases and spans in small p-groups."""
from nilkit import CyclicBackend, ProductBackend, heisenberg
from nilkit.errors import PreconditionError
from nilkit.pgroups import (
    abelian_rank,
    burnside_basis,
    commutator_multihom,
    frattini,
    frattini_rank,
    invariant_factors,
    multihom_image_span,
    union_subgroups_span,
)

G = ProductBackend([CyclicBackend(4), CyclicBackend(2)])
print(f"Z/4 x Z/2: invariant factors {invariant_factors(G)}, rank {abelian_rank(G)}")
print(f"  Frattini {sorted(frattini(G))}, quotient rank {frattini_rank(G)}")
S = [(1, 0), (1, 1), (0, 1), (2, 1)]
print(f"  Burnside basis picked from {S}: {burnside_basis(G, S)}")

U = heisenberg(3)
print(f"\nHeisenberg mod 3: |Phi|={len(frattini(U))}, quotient rank {frattini_rank(U)}")
rep = multihom_image_span(commutator_multihom(U))
print("  image of the commutator map spans within r steps:", rep.lines())

# the axes of (Z/3)^2 are a union of two subgroups
V = ProductBackend([CyclicBackend(3), CyclicBackend(3)])
axes = [(a, 0) for a in range(3)] + [(0, b) for b in range(3)]
print("\n(Z/3)^2 axes:", union_subgroups_span(V, axes).lines())

# a union of subgroups of Z/6 need not behave, and Z/6 is not a p-group anyway
try:
    union_subgroups_span(CyclicBackend(6), [0, 2, 4, 3])
except PreconditionError as exc:
    print("Z/6:", exc)
