"""Building constrained systems and reading off their capacity.

A constrained system is given by a labeled graph; its words are the label
sequences of paths.  We build a few and look at their growth rates.
"""

# %%
from covrad import build_from_forbidden_words, build_repetition, build_rll_0k, build_rll_d_inf, capacity
from covrad.graphs import primitivity_exponent
from covrad.quantizer import enumerate_language

rll = build_rll_0k(1)
print(rll.presentation.to_json())
print("irreducible", rll.is_irreducible, "primitive", rll.is_primitive)

# %% Word counts grow like the Fibonacci numbers, so capacity is log2 of the golden ratio.
counts = [len(enumerate_language(rll, n)) for n in range(1, 11)]
print("word counts", counts)
print("capacity", capacity(rll))

# %% The same language from a forbidden-word list.
sft = build_from_forbidden_words(2, 2, [(0, 0)])
print("same language up to n=8:", all(enumerate_language(sft, n) == enumerate_language(rll, n) for n in range(1, 9)))

# %% A small table.
for name, x in [("(0,1)", build_rll_0k(1)), ("(0,3)", build_rll_0k(3)), ("(2,inf)", build_rll_d_inf(2)),
                ("rep", build_repetition(2))]:
    exp = primitivity_exponent(x.presentation) if x.is_primitive else None
    print(f"{name:8s} capacity {capacity(x):.6f}  primitivity exponent {exp}")
