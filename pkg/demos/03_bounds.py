"""Closed-form error bounds, the worst-case floor, and the adversarial
straggler sets that witness it."""
import gradcoding as gc

# Diagonal-law constant: 1 at epsilon=0, grows as the magnitudes spread.
for eps in (0.0, 0.1, 0.3, 0.5):
    print(f"c({eps}) = {gc.compute_c(eps):.6f}")

# Family closed forms as a function of the straggler count.
A = gc.bibd_transpose_from_difference_set(gc.builtin_difference_sets()[91], 91)
print("\n(91,91,10,10,1), m=2, epsilon=0:")
print(f"{'s':>4} {'proposed upper':>15} {'baseline exact':>15} {'floor':>6}")
for s in (0, 10, 20, 30, 45):
    up = gc.bound_bibd(A.params, 2, s).value
    base = gc.baseline_bibd_error(A.params, 2, s).value
    low = gc.lower_bound(A.n, A.k, A.delta, 2, s).value
    print(f"{s:>4} {up:>15.3f} {base:>15.3f} {low:>6.0f}")

S = gc.srg_paley(13)
print(f"\npaley(13), m=1, s=0: upper = {gc.bound_srg(S.params, 1, 0).value:.4f} "
      f"(theta = {gc.srg_theta(S.params):.4f})")

C = gc.CosetParams(k=27, m=2, delta=5, generating_set=tuple(range(5)))
print(f"coset (27,2,5), epsilon=0.1, s=0: upper = "
      f"{gc.bound_coset(C, 0, gc.compute_c(0.1)).value:.4f}")

# The floor holds for any scheme with this support; the adversarial set
# erases all workers covering the lowest-degree subsets.
A7 = gc.bibd_transpose_from_difference_set([0, 1, 3], 7)
B = gc.encode_random_diagonal(A7, 2, gc.DiagonalLaw(0.0), seed=0)
print("\nfano, m=2: floor vs error on the adversarial set")
for s in (3, 5):
    low = gc.lower_bound(7, 7, 3, 2, s).value
    worst = max(
        gc.decode(B, gc.adversarial_straggler_set(A7, 2, s, u)).err
        for u in (1, 2)
    )
    print(f"  s={s}: floor={low:.0f}, adversarial err={worst:.3f}")
