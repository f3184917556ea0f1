"""Encode, quantize into the constraint, corrupt, decode.

The code pays for quantization out of its correction budget.  Here we see
where the guarantee holds and where it breaks.
"""

# %%
from covrad import build_rll_0k, make_repetition_code
from covrad.qcc import preflight, qcc_sweep, qcc_transmit, verify_guarantee

code = make_repetition_code(2, 9)
for k in (1, 2, 3):
    x = build_rll_0k(k)
    pf = preflight(code, x)
    print(f"k={k}: t={pf.t} worst quantization {pf.max_quantization_distance} "
          f"guaranteed errors {pf.guaranteed_weight}")

# %% One transmission in detail.
run = qcc_transmit(code, build_rll_0k(2), 0, [4], seed=3)
for key, val in run.to_dict().items():
    print(f"{key:22s} {val}")

# %% Exhaustive check of the guarantee, then a random-error sweep past it.
x = build_rll_0k(3)
print("patterns checked, failures:", verify_guarantee(code, x))
for s in qcc_sweep(code, x, 200, [0, 1, 2, 3, 4], seed=1):
    print(s.channel_error_weight, s.success_rate, s.histogram)
