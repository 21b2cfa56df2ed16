"""Witnesses, covers and a splitting for small approximate groups."""
from nilkit import CyclicBackend, GroupHomomorphism, NormalSubgroup, Subset
from nilkit.approximate import (
    brute_coset_progression,
    build_splitting,
    chang_cover,
    doubling_constant,
    intersection_cover,
    minimal_witness,
    verify_growth,
)

Z = CyclicBackend(0)

# exact search stops once |A^3| passes a limit; the greedy answer then carries a lower bound
print("intervals [-n, n] in Z:")
for n in range(1, 5):
    A = Subset(Z, range(-n, n + 1))
    w = minimal_witness(A)
    print(f"  n={n}: doubling={doubling_constant(A)} K={w.K} exact={w.exact} lower_bound={w.lower_bound} X={sorted(w.X)} valid={w.verify()} growth(4)={verify_growth(w, 4)}")

A = Subset(Z, range(-2, 3))
w = minimal_witness(A)
cov = chang_cover(A, w, A, 1, 1)
print(f"\nChang cover of [-2,2]: t={cov.t} sets={[sorted(S) for S in cov.S]} covers={cov.verify()} within_bound={cov.within_bound()}")

# 2Z as the kernel of reduction mod 2
rho = GroupHomomorphism(Z, CyclicBackend(2), lambda a: a % 2, check=False)
N = NormalSubgroup.kernel_of(rho)
ic = intersection_cover(A, w, N, 2)
print(f"A^2 meets 2Z in {sorted(ic.target)}; witness {sorted(ic.witness)}; valid={ic.verify()}")

phi = build_splitting(Z, N, A, 2)
print("\nsplitting Z -> Z/2Z from A=[-2,2]:")
for key, val in phi.verify().items():
    print(f"  {key}={val}")

G = CyclicBackend(12)
B = Subset(G, range(4))
res = brute_coset_progression(B, rank_cap=1)
print(f"\n{{0,1,2,3}} in Z/12: H={sorted(res.H)} generators={res.generators} lengths={res.lengths} size={res.size} ratio={res.ratio}")
