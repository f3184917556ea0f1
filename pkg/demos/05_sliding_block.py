"""A local rule that forces (0,k)-RLL output.

Look back N(k+1)-1 symbols and insert a 1 whenever the zero run would get
too long.  The mismatch rate has a closed form that approaches the essential
radius as N grows.
"""

# %%
from covrad import build_rll_0k, uniform_bernoulli
from covrad.essential import apply_sliding_block, estimate_sbc_mismatch, rll0k_rule, rll0k_rule_mismatch
from covrad.quantizer import quantize_distance

rule = rll0k_rule(1, 2)
word = [0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1]
image, mism = apply_sliding_block(rule, word)
print("input ", "".join(map(str, word[rule.look_back:])))
print("output", "".join(map(str, image)), "mismatches", mism)
print("in the constraint:", quantize_distance(build_rll_0k(1), image) == 0)

# %%
mu = uniform_bernoulli(2)
for N in range(1, 7):
    rate, se = estimate_sbc_mismatch(rll0k_rule(1, N), mu, 10**5, 20, seed=N)
    print(f"N={N}: {rate:.5f} +- {se:.5f}   exact {rll0k_rule_mismatch(1, N):.5f}")
