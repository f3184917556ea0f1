"""The Markov-extension linear program.

We search for the cheapest stationary coupling of a constrained process with
uniform input, then look at the chain the solver found.
"""

# %%
import numpy as np

from covrad import build_full_shift, build_rll_0k, build_rll_d_inf, uniform_bernoulli
from covrad.markov_bound import dinfty_sandwich, formulate, solve_bound

full = build_full_shift(2)
mu = uniform_bernoulli(2)

problem = formulate(build_rll_0k(1), full, mu)
print("variables", problem.lp.variable_count, "rows", problem.lp.a_eq.shape[0])
res = solve_bound(problem)
print("bound", res.value)

# %% Read the optimal coupling edge by edge.
prod = problem.product
p = res.chain.full_edge_probs()
for e in np.flatnonzero(p > 1e-12):
    ax, ay = prod.pair_label(e)
    s, t, _ = prod.product.edges[e]
    print(f"edge {e}: {s}->{t} output {ax} input {ay}  mass {p[e]:.4f}")

# %%
for k in (1, 2, 3):
    print(k, solve_bound(formulate(build_rll_0k(k), full, mu)).value, 1 / (2 * (2 ** (k + 1) - 1)))

# %% For (d,inf) the value lands inside a known interval.
for d in range(1, 5):
    lo, hi, v = dinfty_sandwich(d)
    print(f"d={d}: {lo:.4f} <= {v:.4f} <= {hi:.4f}")
print(solve_bound(formulate(build_rll_d_inf(2), full, mu)).chain.to_json()[:200], "...")
