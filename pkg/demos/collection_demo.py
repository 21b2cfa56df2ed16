"""Collect a few words in the free nilpotent group and check the answer in UT(4, Z)."""
from nilkit import UnitriangularBackend, collect, enumerate_basic, parse_word
from nilkit.collection import copy_counts
from nilkit.groups import evaluate_word

RANK, STEP = 2, 3

print(f"basic commutators, rank {RANK}, step {STEP}:")
for c in enumerate_basic(RANK, STEP):
    print("  ", c)

# UT(4, Z) is nilpotent of step 3, so collected forms must evaluate to the same matrix
U = UnitriangularBackend(4)
a = U.from_entries((1, 2, -1, 1, 3, 1))
b = U.from_entries((2, 0, 1, -1, 1, 2))

for text in ["x2 x1", "x2 x2 x1", "x2^-1 x1^-1 x2 x1", "x2 x1 x2^-1 x1^-1 x2"]:
    w = parse_word(text, rank=RANK, step=STEP)
    form, trace = collect(w)
    lhs = evaluate_word(U, [a, b], w)
    rhs = evaluate_word(U, [a, b], form.to_word())
    print(f"\n{text}")
    print("  collected:", " ".join(f"{c}^{e}" for c, e in form.items()))
    print(f"  steps={len(trace)}  same value in UT(4): {lhs == rhs}")
    kept = {str(c): n for c, n in copy_counts(trace, w).items() if n}
    print("  copies left:", kept)

print("\nfirst steps of collecting x2 x2 x1 x1:")
w = parse_word("x2 x2 x1 x1", rank=RANK, step=STEP)
_, trace = collect(w)
for st in trace.steps[:5]:
    print("  ", st)
