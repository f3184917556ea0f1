"""Exact covering radii by exhaustive search, with the ball-covering lower bound."""

# %%
from covrad import build_full_shift, build_repetition, build_rll_0k, covering_radius_exact
from covrad.quantizer import covering_radius_upper_curve, quantize, sphere_covering_lower_bound

full = build_full_shift(2)
x = build_rll_0k(1)

# quantizing a single word: the witness is a nearest constrained word
r = quantize(x, [0, 0, 0, 0, 0, 0])
print("000000 ->", "".join(map(str, r.nearest)), "distance", r.distance)

# %%
rep = covering_radius_exact(x, full, 10)
print(rep.to_json())

# %% Normalized radii against the lower bound.
lower = sphere_covering_lower_bound(x, full)
for n, radius, norm in covering_radius_upper_curve(x, full, 12):
    print(f"n={n:2d}  R={radius}  R/n={norm:.3f}  lower={lower:.4f}")

# %% The repetition shift sits at floor(n/2).
print([covering_radius_exact(build_repetition(2), full, n).radius for n in range(1, 13)])
