"""Typical words need far fewer flips than the worst case.

For (0,1)-RLL the worst-case normalized radius is 1/2, yet a uniformly random
word is only about 1/6 of the way from the constraint.
"""

# %%
from covrad import build_rll_0k, estimate_eps_radius, uniform_bernoulli
from covrad.essential import analytic_essential_0k, estimates_to_csv

mu = uniform_bernoulli(2)
x = build_rll_0k(1)

estimates = [estimate_eps_radius(x, mu, n, 200, 0.5, seed=7) for n in (100, 1000, 10000)]
print(estimates_to_csv(estimates))
print("closed form", analytic_essential_0k(1))

# %% Larger k makes the constraint looser and the typical distance smaller.
for k in (1, 2, 3):
    est = estimate_eps_radius(build_rll_0k(k), mu, 5000, 50, 0.5, seed=k)
    print(k, round(est.normalized, 4), round(analytic_essential_0k(k), 4))
